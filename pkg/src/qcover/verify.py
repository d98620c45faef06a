"""Seeded property suites comparing the deciders with independent oracles.

Every trial draws from its own generator seeded by (seed, trial index), so a
suite's report does not depend on evaluation order or on the worker count.
Set QCOVER_THREADS to run trials in several processes.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arrangement import (
    build_arrangement,
    cell_probes,
    classify_cells,
    exact_covering_oracle_3d,
    verify_localization,
)
from .generators import (
    instance_for_profile,
    random_nonneg_matrix,
    random_p_matrix,
)
from .geometry import cone_member, perturbed_member
from .instance import DegenerateInstanceError, QInstance, enumerate_cones, instance_from_matrix
from .lcp import decide_q, murty_nonneg_q, sample_coverage
from .planar import is_covering_2d, minkowski_coverage_2d
from .serialize import instance_to_json, matrix_to_json
from .spatial import (
    build_surround_problem,
    check_partition,
    is_covering_3d,
    surround_cases_3d,
    surround_general,
)

MAX_FAILURES = 20


@dataclass
class SuiteReport:
    suite: str
    trials: int
    seed: int
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    requirements: list = field(default_factory=list)  # unmet suite-level conditions

    @property
    def passed(self) -> bool:
        return not self.failures and not self.requirements

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "failure_count": self.stats.get("failures", len(self.failures)),
            "failures": self.failures[:MAX_FAILURES],
            "unmet": list(self.requirements),
            "stats": dict(sorted(self.stats.items())),
        }


def trial_rng(seed: int, k: int) -> random.Random:
    return random.Random(f"qcover:{seed}:{k}")


def _euler_ok(cc) -> bool:
    return cc.euler() == 2


def _euler_stats(cc) -> dict:
    return {"euler_checked": 1, "euler_failures": int(not _euler_ok(cc))}


# -- trials: each returns (ok, stats, detail) ---------------------------------------


def _t_oracle2(rng, opts):
    inst = instance_for_profile(rng, 2, "uniform")
    a = is_covering_2d(inst).covered
    b = minkowski_coverage_2d(inst).covered
    return a == b, {"covered": int(a)}, {"instance": instance_to_json(inst), "surround": a, "oracle": b}


def _t_oracle3(rng, opts):
    inst = instance_for_profile(rng, 3, opts.get("profile", "uniform"))
    a = is_covering_3d(inst).covered
    d = exact_covering_oracle_3d(inst)
    report = sample_coverage(inst, opts.get("probes", 10_000), opts.get("probe_seed", 0))
    c = report.covered == report.probes
    euler = _euler_ok(d.complex)
    ok = a == d.covered == c and euler
    detail = {
        "instance": instance_to_json(inst),
        "surround": a,
        "arrangement": d.covered,
        "sampled": c,
        "euler": d.complex.euler(),
    }
    return ok, {"covered": int(a), **_euler_stats(d.complex)}, detail


def _t_cases(rng, opts):
    profile = "degenerate-biased" if rng.random() < opts.get("degenerate_share", 0.5) else "uniform"
    inst = instance_for_profile(rng, 3, profile)
    i, side = rng.randrange(3), rng.choice("st")
    problem = build_surround_problem(inst, i, side)
    c = surround_cases_3d(problem)
    g = surround_general(problem)
    stats = {f"profile:{profile}": 1, f"case:{c.case_fired or 'none'}": 1}
    if problem.degenerate_events:
        stats["degenerate_problems"] = 1
    detail = {
        "instance": instance_to_json(inst),
        "point": f"{side}{i + 1}",
        "cases": c.surrounded,
        "general": g.surrounded,
        "events": list(problem.degenerate_events),
    }
    return c.surrounded == g.surrounded, stats, detail


def _t_ghost(rng, opts):
    inst = instance_for_profile(rng, 3, opts.get("profile", "ghost-biased"))
    cc = classify_cells(build_arrangement(inst))
    ghosts = cc.ghost_cells()
    bad = [k for k, c in enumerate(cc.cells) if c.is_ghost and not c.covered]
    stats = {"ghost_cells": len(ghosts), "instances_with_ghosts": int(bool(ghosts)), **_euler_stats(cc)}
    detail = {"instance": instance_to_json(inst), "uncovered_ghosts": bad, "euler": cc.euler()}
    return not bad and _euler_ok(cc), stats, detail


def _t_localization(rng, opts):
    profile = "degenerate-biased" if rng.random() < 0.5 else "uniform"
    inst = instance_for_profile(rng, 3, profile)
    cc = classify_cells(build_arrangement(inst))
    rep = verify_localization(cc)
    detail = {"instance": instance_to_json(inst), "violations": [str(v) for v in rep.violations]}
    return rep.holds and _euler_ok(cc), {"cells": rep.cells, **_euler_stats(cc)}, detail


def _t_continuity(rng, opts):
    inst = instance_for_profile(rng, 3, opts.get("profile", "uniform"))
    cc = classify_cells(build_arrangement(inst))
    cones = enumerate_cones(inst)
    count = opts.get("probes", 32)
    probes_used = 0
    short = 0
    violations = []
    for k, cell in enumerate(cc.cells):
        v, probe = cell.representative
        expected = [perturbed_member(cc.vertices[v].coords, probe.coords, c.generators) for c in cones]
        pts = cell_probes(cc, cell, count, rng)
        short += len(pts) < count
        for p in pts:
            probes_used += 1
            got = [cone_member(p, c.generators).inside for c in cones]
            if got != expected:
                violations.append({"cell": k, "probe": list(p)})
    stats = {"cells": len(cc.cells), "probes": probes_used, "cells_short_of_probes": short, **_euler_stats(cc)}
    detail = {"instance": instance_to_json(inst), "violations": violations[:5]}
    return not violations and _euler_ok(cc), stats, detail


def _partition_instance(rng):
    # P-matrices give partitions; half of the draws are plain uniform instances
    if rng.random() < 0.5:
        return instance_from_matrix(random_p_matrix(rng, 3))
    return instance_for_profile(rng, 3, "uniform")


def _t_partition(rng, opts):
    for _ in range(200):
        inst = _partition_instance(rng)
        if check_partition(inst):
            break
    else:
        return True, {"skipped": 1}, None
    cc = classify_cells(build_arrangement(inst))
    mult = sorted({c.multiplicity for c in cc.cells})
    detail = {"instance": instance_to_json(inst), "multiplicities": mult, "euler": cc.euler()}
    return mult == [1] and _euler_ok(cc), {"partitions": 1, **_euler_stats(cc)}, detail


def _decide_matrix(M) -> bool:
    try:
        inst = instance_from_matrix(M)
    except DegenerateInstanceError:
        return False
    return decide_q(inst)[0]


def _t_murty(rng, opts):
    n = rng.choice((2, 3))
    M = random_nonneg_matrix(rng, n)
    a = murty_nonneg_q(M)
    b = _decide_matrix(M)
    stats = {f"n={n}": 1, "murty_q": int(bool(a))}
    return a == b, stats, {"matrix": matrix_to_json(M), "murty": a, "exact": b}


def _t_p_implies_q(rng, opts):
    n = rng.choice((2, 3))
    M = random_p_matrix(rng, n)
    b = _decide_matrix(M)
    return b, {f"n={n}": 1}, {"matrix": matrix_to_json(M), "exact": b}


def _t_inseparable(rng, opts):
    n = rng.choice((2, 3))
    inst = instance_for_profile(rng, n, "uniform")
    i = rng.randrange(n)
    t = list(inst.t)
    t[i] = inst.s[i]
    inst = QInstance(inst.s, tuple(t))
    if n == 2:
        ok = not is_covering_2d(inst).covered and not minkowski_coverage_2d(inst).covered
        return ok, {"n=2": 1}, {"instance": instance_to_json(inst)}
    d = exact_covering_oracle_3d(inst)
    ok = not is_covering_3d(inst).covered and not d.covered and _euler_ok(d.complex)
    return ok, {"n=3": 1, **_euler_stats(d.complex)}, {"instance": instance_to_json(inst)}


def _t_euler(rng, opts):
    profile = rng.choice(("uniform", "degenerate-biased", "ghost-biased"))
    inst = instance_for_profile(rng, 3, profile)
    cc = build_arrangement(inst)
    detail = {"instance": instance_to_json(inst), "V": cc.V, "E": cc.E, "F": cc.F}
    return _euler_ok(cc), _euler_stats(cc), detail


SUITES = {
    "oracle-equivalence-2d": _t_oracle2,
    "oracle-equivalence-3d": _t_oracle3,
    "cases": _t_cases,
    "ghost": _t_ghost,
    "localization": _t_localization,
    "continuity": _t_continuity,
    "partition": _t_partition,
    "murty": _t_murty,
    "p-implies-q": _t_p_implies_q,
    "inseparable": _t_inseparable,
    "euler": _t_euler,
}


def _run_one(args):
    name, seed, k, opts = args
    ok, stats, detail = SUITES[name](trial_rng(seed, k), opts)
    return k, ok, stats, detail


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("QCOVER_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(name: str, trials: int, seed: int = 0, **opts) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    jobs = [(name, seed, k, opts) for k in range(trials)]
    workers = min(thread_count(), max(1, trials))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=max(1, trials // (workers * 8))))
    else:
        results = [_run_one(j) for j in jobs]
    rep = SuiteReport(name, trials, seed)
    nfail = 0
    for k, ok, stats, detail in sorted(results, key=lambda r: r[0]):
        for key, v in stats.items():
            rep.stats[key] = rep.stats.get(key, 0) + v
        if not ok:
            nfail += 1
            if len(rep.failures) < MAX_FAILURES:
                rep.failures.append({"trial": k, **(detail or {})})
    rep.stats["failures"] = nfail
    if name == "ghost" and rep.stats.get("ghost_cells", 0) == 0:
        rep.requirements.append("no ghost cell was generated")
    return rep


def verify_ghost_covered(inst: QInstance) -> bool:
    cc = classify_cells(build_arrangement(inst))
    return all(c.covered for c in cc.ghost_cells())
