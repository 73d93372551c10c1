"""Benchmark sweeps (utility and time vs. k and vs. number of intervals) and
the tiny-instance oracle verification."""

from __future__ import annotations

import csv
import math
from dataclasses import astuple, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import InvariantError
from .instancegen import GenParams, generate, random_tiny
from .model import Instance, schedule_violations
from .scoring import total_utility
from .solvers import SolveReport, solve, solve_exact, solve_grd, solve_rand, solve_top

DEFAULT_KS = (25, 50, 75, 100)
DEFAULT_METHODS = ("GRD", "TOP", "RAND")
REL_TOL = 1e-9


@dataclass
class BenchRow:
    method: str
    k: int
    intervals: int
    users: int
    seed: int
    utility: float
    wall_time_ms: float
    shortfall: bool


CSV_HEADER = [f.name for f in fields(BenchRow)]


def interval_sweep_values(k: int) -> list[int]:
    """k/5, k/2, k, 3k/2, 2k, 3k (rounded down, at least 1)."""
    return [max(1, v) for v in (k // 5, k // 2, k, (3 * k) // 2, 2 * k, 3 * k)]


def _row(report: SolveReport, instance: Instance, seed: int) -> BenchRow:
    return BenchRow(report.method, report.k, instance.n_intervals, instance.n_users, seed,
                    report.utility, report.wall_time_ms, report.shortfall)


def spot_check(instance: Instance, report: SolveReport) -> None:
    """Re-derive feasibility and utility of ``report`` from its raw pairs."""
    pairs = report.pairs()
    bad = schedule_violations(instance, pairs)
    if bad:
        raise InvariantError(f"{report.method}: infeasible schedule: {bad}")
    again = total_utility(instance, pairs)
    if not math.isclose(again, report.utility, rel_tol=REL_TOL, abs_tol=1e-12):
        raise InvariantError(f"{report.method}: utility {report.utility} != recomputed {again}")


def run_points(points: Iterable[GenParams], seeds: Sequence[int],
               methods: Sequence[str] = DEFAULT_METHODS, *, spot_every: int = 10,
               backend: str | None = None) -> Iterator[BenchRow]:
    """Generate one instance per (point, seed), run every method on it.

    Generation is excluded from timing. Every ``spot_every``-th row is
    re-checked against an independent utility recomputation.
    """
    kernels.warmup(kernels.select(backend))
    n = 0
    for params in points:
        for seed in seeds:
            instance = generate(params.replace(seed=seed))
            for method in methods:
                kwargs = {"backend": backend} if method.upper() in ("GRD", "TOP") else {}
                report = solve(instance, method, params.k, seed=seed, **kwargs)
                if spot_every and n % spot_every == 0:
                    spot_check(instance, report)
                n += 1
                yield _row(report, instance, seed)


def k_sweep(ks: Sequence[int] = DEFAULT_KS, seeds: Sequence[int] = range(5),
            methods: Sequence[str] = DEFAULT_METHODS, base: GenParams | None = None,
            **kwargs) -> Iterator[BenchRow]:
    base = base or GenParams()
    points = [base.replace(k=k, num_events=2 * k, num_intervals=(3 * k) // 2) for k in ks]
    return run_points(points, list(seeds), methods, **kwargs)


def interval_sweep(k: int = 50, intervals: Sequence[int] | None = None,
                   seeds: Sequence[int] = range(5), methods: Sequence[str] = DEFAULT_METHODS,
                   base: GenParams | None = None, **kwargs) -> Iterator[BenchRow]:
    base = base or GenParams()
    intervals = list(intervals) if intervals is not None else interval_sweep_values(k)
    points = [base.replace(k=k, num_events=2 * k, num_intervals=t) for t in intervals]
    return run_points(points, list(seeds), methods, **kwargs)


class CsvAppender:
    """Single writer for bench rows; header written on open."""

    def __init__(self, path: str | Path):
        self._fh = open(path, "w", newline="", encoding="utf-8")
        self._w = csv.writer(self._fh)
        self._w.writerow(CSV_HEADER)

    def append(self, row: BenchRow) -> None:
        self._w.writerow(astuple(row))
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_csv(path: str | Path) -> list[BenchRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [BenchRow(r["method"], int(r["k"]), int(r["intervals"]), int(r["users"]),
                         int(r["seed"]), float(r["utility"]), float(r["wall_time_ms"]),
                         r["shortfall"] == "True")
                for r in csv.DictReader(fh)]


def mean_utility(rows: Iterable[BenchRow], key: str = "k") -> dict[tuple[str, int], float]:
    """Mean utility grouped by (method, ``key`` column)."""
    acc: dict[tuple[str, int], list[float]] = {}
    for r in rows:
        acc.setdefault((r.method, getattr(r, key)), []).append(r.utility)
    return {g: float(np.mean(v)) for g, v in acc.items()}


# -- oracle verification ----------------------------------------------------


@dataclass
class VerifyRecord:
    k: int
    exact: float
    grd: float
    top: float
    rand_mean: float
    failures: list[str] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.grd / self.exact if self.exact > 0 else 1.0


def verify_instance(instance: Instance, k: int, rand_seeds: Sequence[int] = range(20),
                    backend: str | None = None) -> VerifyRecord:
    """Run all four methods and collect violated checks.

    Failures: any infeasible schedule, exact < GRD, negative GRD utility, or
    accepted GRD gains not summing to the recomputed utility.
    """
    ex = solve_exact(instance, k)
    grd = solve_grd(instance, k, backend=backend)
    top = solve_top(instance, k, backend=backend)
    rands = [solve_rand(instance, k, s) for s in rand_seeds]
    rec = VerifyRecord(k, ex.utility, grd.utility, top.utility,
                       float(np.mean([r.utility for r in rands])) if rands else 0.0)
    for rep in [ex, grd, top, *rands]:
        bad = schedule_violations(instance, rep.pairs())
        if bad:
            rec.failures.append(f"{rep.method} infeasible: {'; '.join(map(str, bad))}")
        if len(rep.schedule) > k:
            rec.failures.append(f"{rep.method} returned {len(rep.schedule)} > k assignments")
    if grd.utility < 0:
        rec.failures.append(f"GRD utility negative: {grd.utility}")
    if ex.utility < grd.utility - REL_TOL * max(1.0, abs(ex.utility)):
        rec.failures.append(f"EXACT {ex.utility!r} < GRD {grd.utility!r}")
    telescoped = math.fsum(grd.accepted_scores)
    if not math.isclose(telescoped, grd.utility, rel_tol=REL_TOL, abs_tol=1e-12):
        rec.failures.append(f"GRD gains sum {telescoped!r} != utility {grd.utility!r}")
    return rec


def verify(count: int, seed: int = 0, *, max_events: int = 6, max_intervals: int = 3,
           max_users: int = 5, max_k: int = 3, max_competing: int = 2,
           rand_seeds: int = 20, tight: bool = False) -> list[VerifyRecord]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        inst = random_tiny(rng, max_events=max_events, max_intervals=max_intervals,
                           max_users=max_users, max_competing=max_competing, tight=tight)
        k = int(rng.integers(1, max_k + 1))
        out.append(verify_instance(inst, k, range(rand_seeds)))
    return out
