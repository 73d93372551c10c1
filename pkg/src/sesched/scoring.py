"""Attendance probabilities, expected attendance, total utility and gains.

A user's probability of attending a scheduled event is the event's share of
the user's interest among everything happening in that interval (scheduled
events plus competing ones), scaled by the user's activity probability for
the interval. :class:`ScoreState` keeps two per-(interval, user) sums so that
each of these quantities costs one pass over the users.
"""

from __future__ import annotations

from types import SimpleNamespace
from typing import Iterable

import numpy as np

from . import kernels as _kernels
from .errors import InvariantError
from .model import Instance, Schedule, schedule_violations


def competing_totals(instance: Instance) -> np.ndarray:
    """Interest in competing events summed per (interval, user)."""
    out = np.zeros((instance.n_intervals, instance.n_users))
    codes = instance.competing_interval_codes
    for i in range(len(codes)):
        if codes[i] >= 0:
            out[codes[i]] += instance.competing_interest[i]
    return out


class ScoreState:
    """Per-(interval, user) interest aggregates for one solver run.

    ``competing[t, u]`` is fixed at construction. ``scheduled[t, u]`` is the
    interest of user ``u`` in the events placed at ``t``; it is recomputed
    from the interval's members in ascending event-index order on every
    :meth:`apply`, so its value depends on the member set only and never on
    insertion order.
    """

    def __init__(self, instance: Instance, kernels: SimpleNamespace | None = None,
                 competing: np.ndarray | None = None):
        self.instance = instance
        self.kernels = kernels or _kernels.active
        self.competing = competing_totals(instance) if competing is None else competing
        self.scheduled = np.zeros((instance.n_intervals, instance.n_users))
        self._members: list[list[int]] = [[] for _ in range(instance.n_intervals)]
        self._placed: dict[int, int] = {}

    @classmethod
    def from_schedule(cls, instance: Instance, schedule: Schedule,
                      kernels: SimpleNamespace | None = None) -> "ScoreState":
        state = cls(instance, kernels)
        for e, t in schedule.placements():
            state.apply_idx(e, t)
        return state

    def copy(self) -> "ScoreState":
        out = ScoreState(self.instance, self.kernels, self.competing)
        out.scheduled = self.scheduled.copy()
        out._members = [list(m) for m in self._members]
        out._placed = dict(self._placed)
        return out

    def interval_of_idx(self, e: int) -> int | None:
        return self._placed.get(e)

    def members(self, t: int) -> list[int]:
        return list(self._members[t])

    def apply_idx(self, e: int, t: int) -> None:
        if e in self._placed:
            raise InvariantError(f"event {self.instance.events[e].id!r} already applied")
        self._placed[e] = t
        members = self._members[t]
        members.append(e)
        members.sort()
        acc = np.zeros(self.instance.n_users)
        mu = self.instance.event_interest
        for r in members:
            acc += mu[r]
        self.scheduled[t] = acc

    def gains_idx(self, t: int, rows: np.ndarray) -> np.ndarray:
        """Gains of hypothetically adding each event in ``rows`` to ``t``."""
        inst = self.instance
        return self.kernels.interval_gains(
            inst.activity[t], self.competing[t], self.scheduled[t],
            inst.event_interest, np.ascontiguousarray(rows, dtype=np.int64))

    def all_gains(self) -> np.ndarray:
        """Gain matrix of shape ``(n_events, n_intervals)``, feasibility ignored."""
        inst = self.instance
        return self.kernels.all_gains(inst.activity, self.competing, self.scheduled,
                                      inst.event_interest)

    def attendance_idx(self, e: int, t: int) -> float:
        inst = self.instance
        return float(self.kernels.event_attendance(
            inst.activity[t], self.competing[t], self.scheduled[t], inst.event_interest[e]))


def _placed_at(instance: Instance, state: ScoreState, event: str, interval: str) -> tuple[int, int]:
    e = instance.event_pos(event)
    t = instance.interval_pos(interval)
    if state.interval_of_idx(e) != t:
        raise InvariantError(f"event {event!r} is not scheduled at {interval!r}")
    return e, t


def attendance_probability(instance: Instance, state: ScoreState, user: str,
                           event: str, interval: str) -> float:
    """Probability that ``user`` attends ``event``, which must be placed at ``interval``."""
    e, t = _placed_at(instance, state, event, interval)
    u = instance.user_pos(user)
    den = state.competing[t, u] + state.scheduled[t, u]
    if den <= 0.0:
        return 0.0
    return float(instance.activity[t, u] * (instance.event_interest[e, u] / den))


def expected_attendance(instance: Instance, state: ScoreState, event: str, interval: str) -> float:
    e, t = _placed_at(instance, state, event, interval)
    return state.attendance_idx(e, t)


def total_utility(instance: Instance, schedule: Schedule | Iterable[tuple[str, str]]) -> float:
    """Sum of expected attendances of all scheduled events, from a fresh state.

    Accepts a :class:`Schedule` or raw (event, interval) pairs; pairs that do
    not form a feasible schedule raise :class:`InvariantError`.
    """
    if not isinstance(schedule, Schedule):
        pairs = list(schedule)
        bad = schedule_violations(instance, pairs)
        if bad:
            raise InvariantError("infeasible schedule: " + "; ".join(map(str, bad)))
        schedule = Schedule.from_pairs(instance, pairs)
    state = ScoreState.from_schedule(instance, schedule)
    return float(sum(state.attendance_idx(e, t) for e, t in schedule.placements()))


def assignment_score(instance: Instance, state: ScoreState, event: str, interval: str) -> float:
    """Gain in total expected attendance from adding ``event`` at ``interval``.

    Feasibility is not checked; the event must not be placed yet.
    """
    e = instance.event_pos(event)
    t = instance.interval_pos(interval)
    if state.interval_of_idx(e) is not None:
        raise InvariantError(f"event {event!r} is already scheduled")
    return float(state.gains_idx(t, np.array([e]))[0])


def apply_assignment(state: ScoreState, instance: Instance, event: str, interval: str) -> ScoreState:
    state.apply_idx(instance.event_pos(event), instance.interval_pos(interval))
    return state
