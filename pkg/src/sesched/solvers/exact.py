"""Exhaustive solver for tiny instances, used as a verification oracle."""

from __future__ import annotations

from itertools import combinations, product
from time import perf_counter

import numpy as np

from ..errors import SizeError
from ..model import Instance, Schedule
from ..scoring import competing_totals
from ._common import Counters, SolveReport, check_k, finish, rank_permutations

MAX_EVENTS = 8
MAX_INTERVALS = 4
MAX_K = 4


def _utility(instance: Instance, comp: np.ndarray, pairs) -> float:
    # plain per-event attendance sums, independent of ScoreState
    by_t: dict[int, list[int]] = {}
    for e, t in pairs:
        by_t.setdefault(t, []).append(e)
    mu = instance.event_interest
    total = 0.0
    for t, evs in by_t.items():
        den = comp[t] + mu[evs].sum(axis=0)
        safe = np.where(den > 0, den, 1.0)
        share = np.where(den > 0, mu[evs] / safe, 0.0)
        total += float((instance.activity[t] * share).sum())
    return total


def _feasible(instance: Instance, pairs) -> bool:
    use: dict[int, float] = {}
    locs: dict[int, set[int]] = {}
    codes = instance.location_codes
    for e, t in pairs:
        loc = int(codes[e])
        if loc in locs.setdefault(t, set()):
            return False
        locs[t].add(loc)
        use[t] = use.get(t, 0.0) + instance.resources[e]
        if use[t] > instance.theta:
            return False
    return True


def solve_exact(instance: Instance, k: int, *, at_most: bool = True,
                max_events: int = MAX_EVENTS, max_intervals: int = MAX_INTERVALS,
                max_k: int = MAX_K) -> SolveReport:
    """Best feasible schedule by exhaustive enumeration.

    With ``at_most`` (the default) every feasible schedule of 1..k
    assignments competes, so the result bounds any solver that returns at
    most ``k`` assignments, including one that stalls short of ``k``.
    Otherwise only schedules of exactly ``min(k, largest feasible size)``
    assignments are considered. Ties within 1e-12 relative go to the larger
    schedule, then to the lexicographically smallest sorted list of
    (event id, interval id) pairs. ``shortfall`` is set only when no feasible
    schedule of ``k`` assignments exists.
    """
    k = check_k(k)
    if instance.n_events > max_events or instance.n_intervals > max_intervals or k > max_k:
        raise SizeError(
            f"exact solver limited to {max_events} events, {max_intervals} intervals, "
            f"k <= {max_k}; got {instance.n_events}, {instance.n_intervals}, k={k}")
    start = perf_counter()
    counters = Counters()
    comp = competing_totals(instance)
    ev_of, t_of = rank_permutations(instance)
    best: tuple | None = None
    largest = 0
    top = min(k, instance.n_events) if instance.n_intervals else 0
    for size in range(top, 0, -1):
        if largest and not at_most:
            break
        for ers in combinations(range(instance.n_events), size):
            for trs in product(range(instance.n_intervals), repeat=size):
                pairs = [(int(ev_of[er]), int(t_of[tr])) for er, tr in zip(ers, trs)]
                counters.iterations += 1
                if not _feasible(instance, pairs):
                    continue
                largest = max(largest, size)
                value = _utility(instance, comp, pairs)
                counters.score_computations += 1
                key = tuple(zip(ers, trs))
                if best is None:
                    best = (value, key, pairs)
                    continue
                # sizes run downwards, so an equal value never displaces a larger schedule
                tol = 1e-12 * max(1.0, abs(best[0]))
                if value > best[0] + tol or (
                        abs(value - best[0]) <= tol and len(key) == len(best[1]) and key < best[1]):
                    best = (value, key, pairs)
    schedule = Schedule(instance)
    if best is not None:
        for e, t in best[2]:
            schedule.insert_idx(e, t)
    report = finish("EXACT", instance, k, schedule, perf_counter() - start, counters)
    report.shortfall = largest < k
    return report
