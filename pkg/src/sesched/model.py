"""Domain types for social event scheduling instances and schedules.

An :class:`Instance` is immutable. User interest and activity are stored as
dense, read-only ``float64`` arrays with users on the last axis so the
per-user kernels in :mod:`sesched.kernels` walk contiguous memory:

* ``event_interest``     shape ``(n_events, n_users)``
* ``competing_interest`` shape ``(n_competing, n_users)``
* ``activity``           shape ``(n_intervals, n_users)``

The sparse :class:`User` view (absent key means 0) is produced on demand and
is what the JSON format stores.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError, InvariantError


@dataclass(frozen=True)
class CandidateEvent:
    id: str
    location: str
    required_resources: float = 0.0


@dataclass(frozen=True)
class CompetingEvent:
    """Third-party event already fixed to an interval."""

    id: str
    interval: str


@dataclass(frozen=True)
class User:
    id: str
    interest: Mapping[str, float] = field(default_factory=dict)
    activity: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def _frozen_array(values, shape: tuple[int, int], name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, order="C", copy=True)
    if arr.size == 0:
        arr = arr.reshape(shape)
    if arr.shape != shape:
        raise InputError(f"{name} has shape {arr.shape}, expected {shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable problem input.

    ``theta`` is the per-interval resource budget. Id collections may contain
    duplicates or dangling references; :func:`validate_instance` reports them
    rather than the constructor rejecting them.
    """

    theta: float
    intervals: tuple[str, ...]
    events: tuple[CandidateEvent, ...]
    competing: tuple[CompetingEvent, ...]
    user_ids: tuple[str, ...]
    event_interest: np.ndarray
    competing_interest: np.ndarray
    activity: np.ndarray

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "theta", float(self.theta))
        set_(self, "intervals", tuple(self.intervals))
        set_(self, "events", tuple(self.events))
        set_(self, "competing", tuple(self.competing))
        set_(self, "user_ids", tuple(self.user_ids))
        n_u = len(self.user_ids)
        set_(self, "event_interest",
             _frozen_array(self.event_interest, (len(self.events), n_u), "event_interest"))
        set_(self, "competing_interest",
             _frozen_array(self.competing_interest, (len(self.competing), n_u),
                           "competing_interest"))
        set_(self, "activity",
             _frozen_array(self.activity, (len(self.intervals), n_u), "activity"))

    @classmethod
    def from_users(
        cls,
        theta: float,
        intervals: Sequence[str],
        events: Sequence[CandidateEvent],
        competing: Sequence[CompetingEvent],
        users: Sequence[User],
    ) -> "Instance":
        """Build from sparse per-user maps; unknown map keys raise InputError."""
        intervals = tuple(intervals)
        events = tuple(events)
        competing = tuple(competing)
        ev_idx = _first_index(e.id for e in events)
        cp_idx = _first_index(c.id for c in competing)
        t_idx = _first_index(intervals)
        n_u = len(users)
        mu_e = np.zeros((len(events), n_u))
        mu_c = np.zeros((len(competing), n_u))
        sigma = np.zeros((len(intervals), n_u))
        for j, user in enumerate(users):
            for key, value in user.interest.items():
                if key in ev_idx:
                    mu_e[ev_idx[key], j] = value
                elif key in cp_idx:
                    mu_c[cp_idx[key], j] = value
                else:
                    raise InputError(f"user {user.id!r}: interest in unknown event {key!r}")
            for key, value in user.activity.items():
                if key not in t_idx:
                    raise InputError(f"user {user.id!r}: activity for unknown interval {key!r}")
                sigma[t_idx[key], j] = value
        return cls(theta, intervals, events, competing, tuple(u.id for u in users),
                   mu_e, mu_c, sigma)

    # -- sizes and lookups -------------------------------------------------

    @property
    def n_events(self) -> int:
        return len(self.events)

    @property
    def n_intervals(self) -> int:
        return len(self.intervals)

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    @cached_property
    def event_index(self) -> dict[str, int]:
        return _first_index(e.id for e in self.events)

    @cached_property
    def interval_index(self) -> dict[str, int]:
        return _first_index(self.intervals)

    @cached_property
    def competing_index(self) -> dict[str, int]:
        return _first_index(c.id for c in self.competing)

    @cached_property
    def user_index(self) -> dict[str, int]:
        return _first_index(self.user_ids)

    @cached_property
    def resources(self) -> np.ndarray:
        arr = np.array([e.required_resources for e in self.events], dtype=np.float64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def location_codes(self) -> np.ndarray:
        """Integer code per event; equal codes mean a shared location."""
        codes = _first_index(e.location for e in self.events)
        arr = np.array([codes[e.location] for e in self.events], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def competing_interval_codes(self) -> np.ndarray:
        """Interval index of every competing event, -1 when dangling."""
        t_idx = self.interval_index
        arr = np.array([t_idx.get(c.interval, -1) for c in self.competing], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def event_order(self) -> np.ndarray:
        """Rank of each event under ascending id order (tie-break key)."""
        return _rank([e.id for e in self.events])

    @cached_property
    def interval_order(self) -> np.ndarray:
        return _rank(list(self.intervals))

    def event_pos(self, event_id: str) -> int:
        try:
            return self.event_index[event_id]
        except KeyError:
            raise InputError(f"unknown event {event_id!r}") from None

    def interval_pos(self, interval_id: str) -> int:
        try:
            return self.interval_index[interval_id]
        except KeyError:
            raise InputError(f"unknown interval {interval_id!r}") from None

    def user_pos(self, user_id: str) -> int:
        try:
            return self.user_index[user_id]
        except KeyError:
            raise InputError(f"unknown user {user_id!r}") from None

    @property
    def users(self) -> tuple[User, ...]:
        """Sparse per-user view; zero entries are omitted."""
        out = []
        ev_ids = [e.id for e in self.events]
        cp_ids = [c.id for c in self.competing]
        for j, uid in enumerate(self.user_ids):
            interest = {ev_ids[i]: float(v) for i, v in enumerate(self.event_interest[:, j]) if v != 0.0}
            interest.update(
                {cp_ids[i]: float(v) for i, v in enumerate(self.competing_interest[:, j]) if v != 0.0})
            activity = {self.intervals[i]: float(v)
                        for i, v in enumerate(self.activity[:, j]) if v != 0.0}
            out.append(User(uid, interest, activity))
        return tuple(out)

    def summary(self) -> dict[str, int]:
        return {"events": self.n_events, "intervals": self.n_intervals,
                "users": self.n_users, "competing": len(self.competing)}


def _first_index(ids: Iterable[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for i, x in enumerate(ids):
        out.setdefault(x, i)
    return out


def _rank(ids: list[str]) -> np.ndarray:
    order = sorted(range(len(ids)), key=lambda i: (ids[i], i))
    rank = np.empty(len(ids), dtype=np.int64)
    rank[order] = np.arange(len(ids))
    rank.setflags(write=False)
    return rank


@dataclass
class Assignment:
    """One (event, interval) pair; ``score`` caches its attendance gain."""

    event: str
    interval: str
    score: float = 0.0


class Schedule:
    """Feasible set of assignments with per-interval bookkeeping.

    Resource use and occupied locations per interval are maintained
    incrementally on :meth:`insert`. Solvers use the index-based methods
    (``*_idx``); the id-based API validates ids and is what callers see.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self._assignments: dict[str, Assignment] = {}
        self._event_interval: dict[int, int] = {}
        self._resource_use = np.zeros(instance.n_intervals)
        self._locations: list[set[int]] = [set() for _ in range(instance.n_intervals)]

    def __len__(self) -> int:
        return len(self._assignments)

    def __iter__(self) -> Iterator[Assignment]:
        return iter(self._assignments.values())

    def __contains__(self, event_id: object) -> bool:
        return event_id in self._assignments

    def __repr__(self) -> str:
        pairs = ", ".join(f"{a.event}@{a.interval}" for a in self)
        return f"Schedule([{pairs}])"

    @property
    def assignments(self) -> tuple[Assignment, ...]:
        return tuple(self._assignments.values())

    @property
    def events(self) -> set[str]:
        return set(self._assignments)

    def events_at(self, interval: str) -> list[str]:
        return [a.event for a in self if a.interval == interval]

    def interval_of(self, event: str) -> str | None:
        a = self._assignments.get(event)
        return None if a is None else a.interval

    @property
    def intervals_used(self) -> set[str]:
        return {a.interval for a in self}

    @property
    def per_interval_resource_use(self) -> dict[str, float]:
        return {t: float(self._resource_use[i]) for i, t in enumerate(self.instance.intervals)}

    @property
    def per_interval_locations(self) -> dict[str, set[str]]:
        ev = self.instance.events
        out: dict[str, set[str]] = {t: set() for t in self.instance.intervals}
        for a in self:
            out[a.interval].add(ev[self.instance.event_index[a.event]].location)
        return out

    def placements(self) -> list[tuple[int, int]]:
        """(event index, interval index) pairs in insertion order."""
        return list(self._event_interval.items())

    def has_event_idx(self, e: int) -> bool:
        return e in self._event_interval

    def feasible_idx(self, e: int, t: int) -> bool:
        inst = self.instance
        if inst.location_codes[e] in self._locations[t]:
            return False
        return self._resource_use[t] + inst.resources[e] <= inst.theta

    def valid_idx(self, e: int, t: int) -> bool:
        return e not in self._event_interval and self.feasible_idx(e, t)

    def feasible_rows(self, t: int, rows: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`feasible_idx` for many events at one interval."""
        inst = self.instance
        ok = self._resource_use[t] + inst.resources[rows] <= inst.theta
        if self._locations[t]:
            ok &= ~np.isin(inst.location_codes[rows], list(self._locations[t]))
        return ok

    def insert_idx(self, e: int, t: int, score: float = 0.0) -> Assignment:
        if not self.valid_idx(e, t):
            inst = self.instance
            raise InvariantError(
                f"invalid assignment {inst.events[e].id!r}@{inst.intervals[t]!r}")
        inst = self.instance
        a = Assignment(inst.events[e].id, inst.intervals[t], float(score))
        self._assignments[a.event] = a
        self._event_interval[e] = t
        self._resource_use[t] += inst.resources[e]
        self._locations[t].add(int(inst.location_codes[e]))
        return a

    def insert(self, assignment: Assignment) -> None:
        e = self.instance.event_pos(assignment.event)
        t = self.instance.interval_pos(assignment.interval)
        self.insert_idx(e, t, assignment.score)

    def copy(self) -> "Schedule":
        out = Schedule(self.instance)
        for e, t in self._event_interval.items():
            out.insert_idx(e, t, self._assignments[self.instance.events[e].id].score)
        return out

    def rebuilt_aggregates(self) -> tuple[np.ndarray, list[set[int]]]:
        """Resource use and location codes recomputed from the assignments."""
        inst = self.instance
        use = np.zeros(inst.n_intervals)
        locs: list[set[int]] = [set() for _ in range(inst.n_intervals)]
        for e, t in self._event_interval.items():
            use[t] += inst.resources[e]
            locs[t].add(int(inst.location_codes[e]))
        return use, locs

    def aggregates(self) -> tuple[np.ndarray, list[set[int]]]:
        return self._resource_use.copy(), [set(s) for s in self._locations]

    @classmethod
    def from_pairs(cls, instance: Instance, pairs: Iterable[tuple[str, str]]) -> "Schedule":
        s = cls(instance)
        for event, interval in pairs:
            s.insert(Assignment(event, interval))
        return s


def is_feasible_assignment(instance: Instance, schedule: Schedule, event: str, interval: str) -> bool:
    """Location and resource constraints hold if ``event`` joins ``interval``."""
    return schedule.feasible_idx(instance.event_pos(event), instance.interval_pos(interval))


def is_valid_assignment(instance: Instance, schedule: Schedule, event: str, interval: str) -> bool:
    return schedule.valid_idx(instance.event_pos(event), instance.interval_pos(interval))


def insert_assignment(schedule: Schedule, assignment: Assignment) -> Schedule:
    """Insert a valid assignment; raises :class:`InvariantError` otherwise."""
    schedule.insert(assignment)
    return schedule


def validate_instance(instance: Instance) -> list[Violation]:
    """Every invariant breach of ``instance``; never raises."""
    out: list[Violation] = []
    if not np.isfinite(instance.theta) or instance.theta < 0:
        out.append(Violation("negative theta", f"theta = {instance.theta}"))
    for label, ids in (
        ("interval", list(instance.intervals)),
        ("event", [e.id for e in instance.events]),
        ("competing event", [c.id for c in instance.competing]),
        ("user", list(instance.user_ids)),
    ):
        for x, n in Counter(ids).items():
            if n > 1:
                out.append(Violation("duplicate id", f"{label} id {x!r} appears {n} times"))
    for e in instance.events:
        if not e.required_resources >= 0:
            out.append(Violation("negative resources", f"event {e.id!r}: {e.required_resources}"))
    known = set(instance.intervals)
    for c in instance.competing:
        if c.interval not in known:
            out.append(Violation("dangling interval",
                                 f"competing event {c.id!r} references {c.interval!r}"))
    for kind, arr, ids in (
        ("interest out of range", instance.event_interest, [e.id for e in instance.events]),
        ("interest out of range", instance.competing_interest, [c.id for c in instance.competing]),
        ("activity out of range", instance.activity, list(instance.intervals)),
    ):
        bad = ~((arr >= 0.0) & (arr <= 1.0))
        for row, col in zip(*np.nonzero(bad)):
            out.append(Violation(kind, f"user {instance.user_ids[col]!r}, "
                                       f"{ids[row]!r}: {arr[row, col]}"))
    return out


def schedule_violations(instance: Instance, pairs: Iterable[tuple[str, str]]) -> list[Violation]:
    """Independent from-scratch feasibility check of (event, interval) pairs.

    Deliberately shares no code with :class:`Schedule` bookkeeping.
    """
    out: list[Violation] = []
    events = {e.id: e for e in instance.events}
    known_t = set(instance.intervals)
    seen: set[str] = set()
    by_interval: dict[str, list[CandidateEvent]] = {}
    for ev, t in pairs:
        if ev not in events:
            out.append(Violation("unknown event", ev))
            continue
        if t not in known_t:
            out.append(Violation("unknown interval", t))
            continue
        if ev in seen:
            out.append(Violation("duplicate event", ev))
        seen.add(ev)
        by_interval.setdefault(t, []).append(events[ev])
    for t, evs in by_interval.items():
        locs = Counter(e.location for e in evs)
        for loc, n in locs.items():
            if n > 1:
                out.append(Violation("location clash", f"{n} events at {loc!r} in {t!r}"))
        used = sum(e.required_resources for e in evs)
        # summation order differs from the incremental path
        if used > instance.theta + 1e-9 * max(1.0, instance.theta):
            out.append(Violation("resources exceeded", f"{used} > {instance.theta} in {t!r}"))
    return out
