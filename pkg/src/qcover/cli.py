"""qcover command line: classify, surround, cells, verify, gen."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time

from . import serialize
from .instance import DegenerateInstanceError, QInstance, RationalMatrix, instance_from_matrix
from .serialize import InputError, dumps, rat, write_atomic

VERDICT_SCHEMA = "qcover-verdict-v1"
EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_SAMPLED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _digest(obj) -> str:
    return "sha256:" + hashlib.sha256(dumps(obj).encode()).hexdigest()


def _input_json(x) -> dict:
    if isinstance(x, RationalMatrix):
        return {"matrix": serialize.matrix_to_json(x)}
    return {"instance": serialize.instance_to_json(x)}


def _as_instance(x) -> QInstance:
    if isinstance(x, QInstance):
        return x
    try:
        return instance_from_matrix(x)
    except DegenerateInstanceError as e:
        raise InputError(str(e)) from None


def _verdict(command: str, argv_echo: list, source, payload: dict, method: str, witnesses=()):
    data = _input_json(source) if source is not None else {}
    return {
        "schema": VERDICT_SCHEMA,
        "command": argv_echo,
        "digest": _digest(data) if data else None,
        "input": data,
        "result": payload,
        "method": method,
        "witnesses": list(witnesses),
    }


def _vec(v) -> list:
    return [rat(x) for x in v]


# -- commands -------------------------------------------------------------------------


def cmd_classify(args):
    from .lcp import QStatus, classify

    M = serialize.load_input(args.path)
    if not isinstance(M, RationalMatrix):
        raise InputError("classify needs a matrix file (CSV or JSON with \"entries\")")
    c = classify(M, probe_count=args.probes, seed=args.seed)
    payload = {
        "n": M.n,
        "is_Q": c.is_Q.value,
        "is_P": c.is_P,
        "is_R0": c.is_R0,
        "murty_applicable": c.murty_applicable,
        "murty_Q": c.murty_Q,
    }
    witnesses = []
    if c.failing_point is not None:
        i, side = c.failing_point
        payload["failing_point"] = f"{side}{i + 1}"
    if c.sample is not None:
        payload["sample"] = {
            "probes": c.sample.probes,
            "covered": c.sample.covered,
            "fraction": rat(c.sample.fraction),
            "seed": args.seed,
        }
        witnesses = [_vec(r.coords) for r in c.sample.witnesses]
    code = {QStatus.YES: EXIT_YES, QStatus.NO: EXIT_NO, QStatus.SAMPLED_ONLY: EXIT_SAMPLED}[c.is_Q]
    lines = [
        f"n = {M.n}",
        f"Q-matrix: {c.is_Q.value} ({c.method})",
        f"P-matrix: {'yes' if c.is_P else 'no'}",
        f"R0-matrix: {'yes' if c.is_R0 else 'no'}",
    ]
    if c.murty_applicable:
        lines.append(f"nonnegative, diagonal test: {'Q' if c.murty_Q else 'not Q'}")
    if "failing_point" in payload:
        lines.append(f"not surrounded: {payload['failing_point']}")
    if c.sample is not None:
        lines.append(f"sampled coverage: {c.sample.covered}/{c.sample.probes}")
    return _verdict("classify", args.echo, M, payload, c.method, witnesses), lines, code


def _parse_point(text: str, n: int):
    try:
        i, side = text.split(",")
        i = int(i)
    except ValueError:
        raise UsageError(f"invalid point selector {text!r}; expected <i>,s or <i>,t") from None
    side = side.strip()
    if side not in ("s", "t") or not 1 <= i <= n:
        raise UsageError(f"invalid point selector {text!r}; index must be 1..{n}, side s or t")
    return i - 1, side


def cmd_surround(args):
    src = serialize.load_input(args.path)
    inst = _as_instance(src)
    i, side = _parse_point(args.point, inst.n)
    if inst.n == 2:
        from .planar import surround_point_2d

        v = surround_point_2d(inst, i, side)
        tag, notes, witness = v.case_fired, list(v.notes), v.witness
        surrounded, method = v.surrounded, "planar-cases"
    elif inst.n == 3:
        from .spatial import build_surround_problem, surround_cases_3d, surround_general

        problem = build_surround_problem(inst, i, side)
        g = surround_general(problem)
        c = surround_cases_3d(problem)
        surrounded, witness = g.surrounded, g.witness
        tag = c.case_fired or g.case_fired
        notes = list(problem.degenerate_events) + [x for x in c.notes]
        method = "spatial-general"
        bad = inst.inseparable_indices()
        if bad:
            k = bad[0] + 1
            notes = [x for x in notes if not x.startswith("inseparable")]
            notes.insert(0, f"inseparable: s{k} = t{k}, the sphere cannot be covered")
            if surrounded:
                notes.append(f"locally surrounded ({tag})")
            surrounded, tag = False, None
    else:
        raise InputError("surround needs n = 2 or n = 3")
    payload = {"point": f"{side}{i + 1}", "surrounded": surrounded, "case": tag, "notes": notes}
    witnesses = []
    if witness is not None and not surrounded:
        witnesses = [_vec(witness.coords)]
    lines = [f"{side}{i + 1}: {'surrounded' if surrounded else 'not surrounded'}"]
    if tag:
        lines.append(f"case: {tag}")
    lines += [f"note: {x}" for x in notes]
    if witnesses:
        lines.append("gap direction: (" + ", ".join(witnesses[0]) + ")")
    return _verdict("surround", args.echo, src, payload, method, witnesses), lines, (
        EXIT_YES if surrounded else EXIT_NO
    )


def cmd_cells(args):
    from .arrangement import build_arrangement, classify_cells

    src = serialize.load_input(args.path)
    inst = _as_instance(src)
    if inst.n != 3:
        raise InputError("cells needs an n = 3 instance")
    cc = classify_cells(build_arrangement(inst))
    dump = serialize.complex_to_json(cc)
    payload = {"complex": dump, "counts": dump["counts"]}
    files = {}
    if args.svg:
        files[args.svg] = serialize.complex_to_svg(cc)
    k = dump["counts"]
    lines = [
        f"V = {k['V']}, E = {k['E']}, F = {k['F']}, V - E + F = {cc.euler()}",
        f"ghost cells: {k['ghosts']}, uncovered cells: {k['uncovered']}",
    ]
    lines += [f"note: {x}" for x in cc.notes]
    code = EXIT_YES if k["uncovered"] == 0 else EXIT_NO
    return _verdict("cells", args.echo, src, payload, "arrangement"), lines, code, files


def cmd_verify(args):
    from .verify import SUITES, run_suite

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; known: {', '.join(sorted(SUITES))}")
    rep = run_suite(args.suite, args.trials, args.seed)
    payload = rep.to_json()
    lines = [f"{args.suite}: {'pass' if rep.passed else 'FAIL'} ({args.trials} trials, seed {args.seed})"]
    lines += [f"  {k} = {v}" for k, v in sorted(rep.stats.items())]
    lines += [f"  unmet: {u}" for u in rep.requirements]
    for f in rep.failures[:5]:
        lines.append(f"  counterexample: {json.dumps(f, sort_keys=True)}")
    return _verdict("verify", args.echo, None, payload, "suite"), lines, (
        EXIT_YES if rep.passed else EXIT_NO
    )


def cmd_gen(args):
    from .arrangement import build_arrangement
    from .generators import instance_for_profile
    from .instance import enumerate_cones

    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    if args.profile == "ghost-biased" and args.n != 3:
        raise UsageError("the ghost-biased profile needs --n 3")
    rng = random.Random(args.seed)
    files = {}
    rank2 = 0
    ghosts = 0
    for k in range(args.count):
        inst = instance_for_profile(rng, args.n, args.profile)
        rank2 += any(c.degenerate for c in enumerate_cones(inst))
        if args.n == 3 and args.profile == "ghost-biased":
            ghosts += bool(build_arrangement(inst).ghost_cells())
        name = os.path.join(args.out, f"instance-{args.seed}-{k:05d}.json")
        files[name] = dumps(serialize.instance_to_json(inst))
    payload = {
        "files": sorted(files),
        "profile": args.profile,
        "instances_with_rank2_cone": rank2,
    }
    lines = [f"wrote {len(files)} instances to {args.out}", f"instances with a rank-2 cone: {rank2}"]
    if args.n == 3 and args.profile == "ghost-biased":
        payload["instances_with_ghost_cells"] = ghosts
        lines.append(f"ghost hit rate: {ghosts}/{args.count}")
    return _verdict("gen", args.echo, None, payload, f"profile:{args.profile}"), lines, EXIT_YES, files


# -- plumbing -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcover", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print the JSON verdict")
        sp.add_argument("--out", help="also write the JSON verdict to this file")
        sp.add_argument("--timing", action="store_true", help="report wall time (not byte-stable)")

    c = sub.add_parser("classify", help="Q/P/R0 classification of a matrix")
    c.add_argument("path")
    c.add_argument("--probes", type=int, default=10_000, help="sample size for n >= 4")
    c.add_argument("--seed", type=int, default=0)
    common(c)

    s = sub.add_parser("surround", help="surround check for one point")
    s.add_argument("path")
    s.add_argument("--point", required=True, help="<i>,s or <i>,t with i starting at 1")
    common(s)

    k = sub.add_parser("cells", help="spherical cell complex of an n = 3 instance")
    k.add_argument("path")
    k.add_argument("--svg", help="write a stereographic drawing")
    common(k)

    v = sub.add_parser("verify", help="run a seeded property suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    common(v)

    g = sub.add_parser("gen", help="write seeded random instances")
    g.add_argument("--n", type=int, choices=(2, 3), required=True)
    g.add_argument("--count", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument(
        "--profile", choices=("uniform", "degenerate-biased", "ghost-biased"), default="uniform"
    )
    g.add_argument("--out", default=".", help="output directory")
    g.add_argument("--json", action="store_true")
    g.add_argument("--timing", action="store_true")
    return p


COMMANDS = {
    "classify": cmd_classify,
    "surround": cmd_surround,
    "cells": cmd_cells,
    "verify": cmd_verify,
    "gen": cmd_gen,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else 0
    args.echo = argv
    start = time.perf_counter()
    try:
        result = COMMANDS[args.command](args)
    except (InputError, UsageError) as e:
        print(f"qcover: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    verdict, lines, code = result[:3]
    files = dict(result[3]) if len(result) > 3 else {}
    if args.timing:
        verdict["timing_seconds"] = round(time.perf_counter() - start, 3)
        lines.append(f"time: {verdict['timing_seconds']} s")
    text = dumps(verdict)
    if args.command != "gen" and args.out:
        files[args.out] = text
    try:
        if args.command == "gen":
            os.makedirs(args.out, exist_ok=True)
        for path, content in sorted(files.items()):
            write_atomic(path, content)
    except OSError as e:
        print(f"qcover: error: cannot write output: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text if args.json else "\n".join(lines) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
