"""RAND baseline: valid pairs accepted in a seeded uniform random order."""

from __future__ import annotations

from time import perf_counter

import numpy as np

from ..model import Instance, Schedule
from ._common import Counters, SolveReport, check_k, finish


def solve_rand(instance: Instance, k: int, seed: int = 0) -> SolveReport:
    """Draw untried (event, interval) pairs uniformly; keep the valid ones.

    Walking a seeded permutation of all pairs is the same as drawing without
    replacement, so the result is a pure function of ``(instance, k, seed)``.
    """
    k = check_k(k)
    start = perf_counter()
    counters = Counters()
    schedule = Schedule(instance)
    n_e, n_t = instance.n_events, instance.n_intervals
    rng = np.random.default_rng(seed)
    for p in rng.permutation(n_e * n_t):
        counters.iterations += 1
        e, t = divmod(int(p), n_t)
        if not schedule.valid_idx(e, t):
            counters.invalid_pops += 1
            continue
        schedule.insert_idx(e, t)
        if len(schedule) == k:
            break
    return finish("RAND", instance, k, schedule, perf_counter() - start, counters)
