"""Named verification suites shared by the command line and the acceptance tests."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

from .config import DEFAULTS
from .report import Report

SUITES = ("modular", "anharmonic", "darboux", "transvect", "schwarz", "numeric")


def modular_suite(order: int = 32, **_) -> Report:
    from . import halphen
    from .qseries import dlog_delta_check

    rep = Report("modular")
    rep.extend(halphen.verify_modular(order), "series")
    rep.extend(dlog_delta_check(order), "series")
    rep.extend(halphen.cubic_dh_identity(), "symbolic")
    rep.extend(halphen.s4_s3_equivalence(), "symbolic")
    rep.extend(halphen.degenerate_solutions_check(), "symbolic")
    return rep


INVARIANCE_CASES = (
    [("cyclic", m) for m in (4, 5, 6)]
    + [("dihedral", m) for m in (2, 3, 4, 5)]
    + [("tetrahedral", None), ("octahedral", None), ("icosahedral", None)]
)


def invariance_suite() -> Report:
    from .mobius import group_catalog, verify_invariance

    rep = Report("invariance")
    for kind, m in INVARIANCE_CASES:
        g = group_catalog(kind, m)
        rep.extend(verify_invariance(g, all_elements=True), g.name)
    return rep


def degree_suite() -> Report:
    from .anharmonic import degree_table

    rep = Report("degrees")
    orders = {"tetrahedral": 12, "octahedral": 24, "icosahedral": 60}
    for kind, N in orders.items():
        rows = degree_table(kind)
        for row in rows["p>1"]:
            rep.exact(f"{kind} (n, p) = {row.as_pair()}: n p = {N}", row.n * row.p == N,
                      residual=str(row.n * row.p), divisibility_ok=row.divisibility_ok, note=row.note)
    return rep


def anharmonic_suite(cyclic=(4, 5, 6, 7), dihedral=((3, 2),), extra=(), resultant: bool = True, **_) -> Report:
    """Invariance, degree bookkeeping and end-to-end constructions.

    ``extra`` takes further (kind, parameter, p) triples, e.g. ("tetrahedral", None, 3).
    """
    from .anharmonic import construct, verify_construction

    rep = Report("anharmonic")
    rep.extend(invariance_suite(), "invariance")
    rep.extend(degree_suite(), "degrees")
    for n in cyclic:
        res = construct("cyclic", n, p=1)
        rep.extend(verify_construction(res, numeric=False), f"cyclic({n})")
    for m, p in dihedral:
        res = construct("dihedral", m, p=p)
        rep.extend(verify_construction(res, numeric=True, resultant=resultant), f"dihedral({m}).p{p}")
    for kind, param, p in extra:
        res = construct(kind, param, p=p)
        rep.extend(verify_construction(res), f"{kind}.p{p}")
    return rep


def darboux_suite(ns=(2, 3, 4, 6), **_) -> Report:
    from . import darboux

    rep = Report("darboux")
    for n in ns:
        if n == 2:
            rep.extend(darboux.n2_impossibility(), "n2")
        else:
            rep.extend(darboux.darboux_suite(n), f"n{n}")
    return rep


def transvect_suite(seed: int = 0, cases: int = 100, **_) -> Report:
    from .binform import transvect_suite as run

    return run(seed=seed, cases=cases)


def schwarz_suite(seed: int = 0, cases: int = 50, **_) -> Report:
    from .schwarz import schwarz_suite as run

    return run(seed=seed, cases=min(cases, 50))


def numeric_suite(steps: int | None = None, **_) -> Report:
    from .numeric import numeric_suite as run

    return run(steps)


_RUNNERS = {
    "modular": modular_suite,
    "anharmonic": anharmonic_suite,
    "darboux": darboux_suite,
    "transvect": transvect_suite,
    "schwarz": schwarz_suite,
    "numeric": numeric_suite,
}


def _run_one(name: str, options: dict) -> Report:
    start = time.perf_counter()
    rep = _RUNNERS[name](**options)
    elapsed = time.perf_counter() - start
    for c in rep.checks:  # per-suite granularity: every check carries its suite's elapsed time
        if c.wall_time is None:
            c.wall_time = elapsed
    return rep


def run_suite(name: str, jobs: int = 1, **options) -> Report:
    """Run a named suite ("all" runs every suite); checks come back sorted by name."""
    if name != "all" and name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; expected one of {', '.join(SUITES + ('all',))}")
    options = {k: v for k, v in options.items() if v is not None}
    options.setdefault("seed", DEFAULTS["seed"])
    names = SUITES if name == "all" else (name,)
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_one, names, [options] * len(names)))
    else:
        parts = [_run_one(n, options) for n in names]
    rep = Report(name)
    for n, part in zip(names, parts):
        rep.extend(part, n if name == "all" else None)
    return rep.sorted()
