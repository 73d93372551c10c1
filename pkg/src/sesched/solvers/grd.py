"""Greedy solver: repeatedly accept the valid assignment with the largest gain.

The candidate list holds every (event, interval) pair with a cached gain.
After an acceptance at interval ``t`` only the gains of pairs at ``t`` can
change, so only those are recomputed; pairs that became invalid are dropped.
Pop order is "largest cached gain, then smallest event id, then smallest
interval id". Keeping the score matrix with rows and columns sorted by id
makes that exactly the first maximum found by ``argmax``.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter
from typing import Callable

import numpy as np

from ..model import Instance, Schedule
from ..scoring import ScoreState
from ._common import Counters, SolveReport, check_k, finish, rank_permutations, resolve_kernels

_DEAD = -np.inf


@dataclass
class GreedyStep:
    """Snapshot handed to ``on_accept`` after each acceptance and its updates.

    ``scores`` and ``alive`` are in instance index order, shape
    ``(n_events, n_intervals)``; ``updated`` is False for the final
    acceptance, after which no rescoring happens.
    """

    step: int
    event: int
    interval: int
    score: float
    scores: np.ndarray
    alive: np.ndarray
    state: ScoreState
    updated: bool


def solve_grd(instance: Instance, k: int, *, backend=None,
              on_accept: Callable[[GreedyStep], None] | None = None) -> SolveReport:
    k = check_k(k)
    start = perf_counter()
    counters = Counters()
    schedule = Schedule(instance)
    state = ScoreState(instance, resolve_kernels(backend))
    accepted: list[float] = []
    n_e, n_t = instance.n_events, instance.n_intervals
    if n_e == 0 or n_t == 0:
        return finish("GRD", instance, k, schedule, perf_counter() - start, counters)

    ev_of, t_of = rank_permutations(instance)
    pos_of_t = np.argsort(t_of)
    scores = state.all_gains()[ev_of][:, t_of]
    counters.score_computations = n_e * n_t
    live = scores.copy()

    while len(schedule) < k:
        flat = int(np.argmax(live))
        if live.flat[flat] == _DEAD:
            break
        er, tr = divmod(flat, n_t)
        live[er, tr] = _DEAD
        counters.iterations += 1
        e, t = int(ev_of[er]), int(t_of[tr])
        if not schedule.valid_idx(e, t):
            counters.invalid_pops += 1
            continue
        score = float(scores[er, tr])
        schedule.insert_idx(e, t, score)
        state.apply_idx(e, t)
        accepted.append(score)
        updated = len(schedule) < k
        if updated:
            live[er, :] = _DEAD
            rows = np.flatnonzero(live[:, tr] != _DEAD)
            if rows.size:
                ok = schedule.feasible_rows(t, ev_of[rows])
                live[rows[~ok], tr] = _DEAD
                keep = rows[ok]
                if keep.size:
                    fresh = state.gains_idx(t, ev_of[keep])
                    scores[keep, tr] = fresh
                    live[keep, tr] = fresh
                    counters.score_updates += keep.size
                    counters.score_computations += keep.size
        if on_accept is not None:
            inv = np.argsort(ev_of)
            on_accept(GreedyStep(
                step=len(schedule), event=e, interval=t, score=score,
                scores=scores[inv][:, pos_of_t].copy(),
                alive=(live[inv][:, pos_of_t] != _DEAD),
                state=state, updated=updated,
            ))

    return finish("GRD", instance, k, schedule, perf_counter() - start, counters, accepted)
