"""Text formats: matrices (CSV/JSON), instances, cell-complex dumps and SVG."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .geometry import Ray
from .instance import QInstance, RationalMatrix

INSTANCE_SCHEMA = "qcover-instance-v1"
COMPLEX_SCHEMA = "qcover-complex-v1"


class InputError(ValueError):
    """Malformed input file; the message carries line/column when known."""


def rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(token: str) -> Fraction:
    token = token.strip()
    if not token:
        raise ValueError("empty entry")
    num, slash, den = token.partition("/")
    try:
        value = Fraction(int(num), int(den)) if slash else Fraction(int(num))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {token!r}") from None
    except ValueError:
        raise ValueError(f"not a rational: {token!r}") from None
    return value


def _json_rat(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"{where}: not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rat(value)
        except ValueError as e:
            raise InputError(f"{where}: {e}") from None
    raise InputError(f"{where}: rationals must be integers or \"p/q\" strings, got {value!r}")


def parse_matrix_csv(text: str) -> RationalMatrix:
    rows = []
    for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        parsed = []
        col = 1
        for cell in row:
            try:
                parsed.append(parse_rat(cell))
            except ValueError as e:
                raise InputError(f"line {line_no}, column {col}: {e}") from None
            col += len(cell) + 1
        rows.append((line_no, parsed))
    return _square(rows)


def _square(rows) -> RationalMatrix:
    if not rows:
        raise InputError("empty matrix")
    n = len(rows)
    for line_no, r in rows:
        if len(r) != n:
            raise InputError(f"line {line_no}: expected {n} entries, found {len(r)}")
    return RationalMatrix(tuple(tuple(r) for _, r in rows))


def matrix_from_json(obj) -> RationalMatrix:
    entries = obj.get("entries") if isinstance(obj, dict) else obj
    if not isinstance(entries, list):
        raise InputError("matrix JSON needs an \"entries\" list of rows")
    rows = []
    for i, row in enumerate(entries, start=1):
        if not isinstance(row, list):
            raise InputError(f"row {i}: not a list")
        rows.append((i, [_json_rat(x, f"row {i}, column {j}") for j, x in enumerate(row, 1)]))
    m = _square(rows)
    if isinstance(obj, dict) and "n" in obj and obj["n"] != m.n:
        raise InputError(f"declared n = {obj['n']} but matrix is {m.n}x{m.n}")
    return m


def matrix_to_json(M: RationalMatrix) -> dict:
    return {"n": M.n, "entries": [[rat(x) for x in row] for row in M.entries]}


def instance_to_json(inst: QInstance) -> dict:
    return {
        "n": inst.n,
        "s": [[rat(x) for x in r.coords] for r in inst.s],
        "t": [[rat(x) for x in r.coords] for r in inst.t],
        "schema": INSTANCE_SCHEMA,
    }


def instance_from_json(obj) -> QInstance:
    if obj.get("schema") != INSTANCE_SCHEMA:
        raise InputError(f"unknown instance schema {obj.get('schema')!r}")
    n = obj.get("n")
    try:
        s = [Ray(tuple(_json_rat(x, f"s[{i}]") for x in r)) for i, r in enumerate(obj["s"])]
        t = [Ray(tuple(_json_rat(x, f"t[{i}]") for x in r)) for i, r in enumerate(obj["t"])]
        inst = QInstance(tuple(s), tuple(t))
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed instance: {e}") from None
    except InputError:
        raise
    except ValueError as e:
        raise InputError(str(e)) from None
    if n != inst.n:
        raise InputError(f"declared n = {n} but instance has n = {inst.n}")
    return inst


def load_input(path: str):
    """A RationalMatrix or QInstance from a CSV or JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
        if isinstance(obj, dict) and "schema" in obj:
            return instance_from_json(obj)
        return matrix_from_json(obj)
    return parse_matrix_csv(text)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file so a failure never leaves a partial file."""
    import os
    import tempfile

    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".qcover-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- cell complexes -----------------------------------------------------------------


def complex_to_json(cc) -> dict:
    cells = []
    for c in cc.cells:
        entry = {"boundary": list(c.boundary), "arcs": list(c.edges), "ghost": c.is_ghost}
        if c.covered is not None:
            entry["covered"] = c.covered
            entry["multiplicity"] = c.multiplicity
            v, probe = c.representative
            entry["representative"] = {"vertex": v, "direction": [rat(x) for x in probe.coords]}
        cells.append(entry)
    return {
        "schema": COMPLEX_SCHEMA,
        "instance": instance_to_json(cc.instance),
        "vertices": [
            {"ray": [rat(x) for x in v.coords], "points": list(o)}
            for v, o in zip(cc.vertices, cc.original)
        ],
        "arcs": [
            {"ends": list(a.endpoints), "normal": [rat(x) for x in a.circle_normal.coords],
             "facets": list(a.origins)}
            for a in cc.arcs
        ],
        "cells": cells,
        "counts": {
            "V": cc.V,
            "E": cc.E,
            "F": cc.F,
            "components": cc.components,
            "ghosts": len(cc.ghost_cells()),
            "uncovered": len(cc.uncovered_cells()),
        },
        "notes": list(cc.notes),
    }


def _unit(v):
    x = [float(c) for c in v]
    r = math.sqrt(sum(c * c for c in x))
    return [c / r for c in x]


def _stereo(p, size):
    # projection from (0, 0, -1); points near that pole are pushed to the rim
    x, y, z = p
    d = max(1.0 + z, 1e-3)
    u, v = x / d, y / d
    r = math.hypot(u, v)
    lim = 3.0
    if r > lim:
        u, v = u * lim / r, v * lim / r
    half = size / 2
    return half + u * half / lim, half - v * half / lim


def complex_to_svg(cc, size: int = 600) -> str:
    """Stereographic picture of the arrangement (drawing only, floats allowed)."""
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{size / 2}" cy="{size / 2}" r="{size / 6:.1f}" fill="none" '
        'stroke="#ccc" stroke-dasharray="4 3"/>',
    ]
    for a in cc.arcs:
        p, q = (_unit(cc.vertices[i].coords) for i in a.endpoints)
        omega = math.acos(max(-1.0, min(1.0, sum(x * y for x, y in zip(p, q)))))
        pts = []
        for k in range(33):
            f = k / 32
            if omega < 1e-9:
                w = p
            else:
                s = math.sin(omega)
                c1, c2 = math.sin((1 - f) * omega) / s, math.sin(f * omega) / s
                w = [c1 * x + c2 * y for x, y in zip(p, q)]
            pts.append("%.2f,%.2f" % _stereo(w, size))
        out.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="black"/>')
    for v, o in zip(cc.vertices, cc.original):
        x, y = _stereo(_unit(v.coords), size)
        colour = "#c00" if o else "#06c"
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{colour}"/>')
        if o:
            out.append(
                f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="11">{",".join(o)}</text>'
            )
    for c in cc.cells:
        if c.covered is False and c.representative is not None:
            v, probe = c.representative
            base = [float(x) for x in cc.vertices[v].coords]
            nb = math.sqrt(sum(x * x for x in base))
            d = _unit(probe.coords)
            w = _unit([x / nb + 0.05 * y for x, y in zip(base, d)])
            x, y = _stereo(w, size)
            out.append(f'<text x="{x:.2f}" y="{y:.2f}" font-size="12" fill="#c00">x</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
