"""TOP baseline: one round of gains, then a validity-respecting sweep."""

from __future__ import annotations

from time import perf_counter

import numpy as np

from ..model import Instance, Schedule
from ..scoring import ScoreState
from ._common import Counters, SolveReport, check_k, finish, rank_permutations, resolve_kernels


def solve_top(instance: Instance, k: int, *, backend=None) -> SolveReport:
    """Accept pairs in descending initial-gain order (ties as in GRD); never rescore."""
    k = check_k(k)
    start = perf_counter()
    counters = Counters()
    schedule = Schedule(instance)
    accepted: list[float] = []
    n_e, n_t = instance.n_events, instance.n_intervals
    if n_e and n_t:
        state = ScoreState(instance, resolve_kernels(backend))
        ev_of, t_of = rank_permutations(instance)
        scores = state.all_gains()[ev_of][:, t_of]
        counters.score_computations = n_e * n_t
        flat = scores.ravel()
        for idx in np.argsort(-flat, kind="stable"):
            counters.iterations += 1
            er, tr = divmod(int(idx), n_t)
            e, t = int(ev_of[er]), int(t_of[tr])
            if not schedule.valid_idx(e, t):
                counters.invalid_pops += 1
                continue
            schedule.insert_idx(e, t, float(flat[idx]))
            accepted.append(float(flat[idx]))
            if len(schedule) == k:
                break
    return finish("TOP", instance, k, schedule, perf_counter() - start, counters, accepted)
