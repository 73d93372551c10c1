"""Synthetic and tag-based instance construction.

Interest between a user and an event is the Jaccard similarity of their tag
sets. Synthetic instances draw tag sets from a small vocabulary so interest
values keep the sparsity and correlation that tag overlap produces.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError
from .model import CandidateEvent, CompetingEvent, Instance


@dataclass(frozen=True)
class GenParams:
    """Generator parameters. Sizes left as ``None`` derive from ``k``."""

    k: int = 100
    num_intervals: int | None = None  # 3k/2
    num_events: int | None = None  # 2k
    num_users: int = 5000
    num_locations: int = 25
    theta: float = 20.0
    xi_range: tuple[float, float] = (1.0, 20.0 / 3.0)
    competing_mean: float = 8.1
    seed: int = 0
    vocab_size: int = 30
    tags_per_entity: tuple[int, int] = (3, 8)

    def __post_init__(self):
        if self.num_intervals is None:
            object.__setattr__(self, "num_intervals", (3 * self.k) // 2)
        if self.num_events is None:
            object.__setattr__(self, "num_events", 2 * self.k)
        object.__setattr__(self, "xi_range", tuple(float(x) for x in self.xi_range))
        object.__setattr__(self, "tags_per_entity", tuple(int(x) for x in self.tags_per_entity))

    def validate(self) -> None:
        for name in ("k", "num_intervals", "num_events", "num_users", "num_locations",
                     "vocab_size"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise InputError(f"{name} must be a positive integer, got {v!r}")
        if not self.theta >= 0:
            raise InputError(f"theta must be non-negative, got {self.theta}")
        lo, hi = self.xi_range
        if not 0 <= lo <= hi <= self.theta:
            raise InputError(f"xi_range {self.xi_range} must lie within [0, theta={self.theta}]")
        if not self.competing_mean > 0:
            raise InputError(f"competing_mean must be positive, got {self.competing_mean}")
        tlo, thi = self.tags_per_entity
        if not 0 <= tlo <= thi <= self.vocab_size:
            raise InputError(f"tags_per_entity {self.tags_per_entity} outside [0, vocab_size]")

    def replace(self, **changes) -> "GenParams":
        return dataclasses.replace(self, **changes)


def competing_count_law(mean: float) -> tuple[int, int, float]:
    """Integer-uniform range plus Bernoulli extra event that hit ``mean``.

    8.1 gives uniform on [5, 11] (mean 8) with one extra event w.p. 0.1.
    """
    base = int(np.floor(mean))
    lo = max(0, base - 3)
    hi = 2 * base - lo
    return lo, hi, float(mean - base)


def build_interest(user_tags: Iterable[str], event_tags: Iterable[str]) -> float:
    """Jaccard similarity of two tag sets; 0 when both are empty."""
    a, b = set(user_tags), set(event_tags)
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def jaccard_matrix(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Pairwise Jaccard of boolean tag-membership matrices.

    ``rows`` is ``(n, vocab)``, ``cols`` is ``(m, vocab)``; result ``(n, m)``.
    """
    r = rows.astype(np.int64)
    c = cols.astype(np.int64)
    inter = r @ c.T
    union = r.sum(axis=1)[:, None] + c.sum(axis=1)[None, :] - inter
    return np.divide(inter, union, out=np.zeros(inter.shape), where=union > 0)


def _random_tag_sets(rng: np.random.Generator, n: int, vocab: int, lo: int, hi: int) -> np.ndarray:
    counts = rng.integers(lo, hi + 1, size=n)
    # rank of each token under a random key per row; the lowest `count` are kept
    ranks = np.argsort(np.argsort(rng.random((n, vocab)), axis=1), axis=1)
    return ranks < counts[:, None]


def _ids(prefix: str, n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def generate(params: GenParams) -> Instance:
    """Seeded synthetic instance; a pure function of ``params``."""
    params.validate()
    rng = np.random.default_rng(params.seed)
    n_t, n_e, n_u = params.num_intervals, params.num_events, params.num_users

    intervals = _ids("t", n_t)
    locs = rng.integers(0, params.num_locations, size=n_e)
    xi = rng.uniform(params.xi_range[0], params.xi_range[1], size=n_e)
    loc_ids = _ids("L", params.num_locations)
    events = [CandidateEvent(eid, loc_ids[locs[i]], float(xi[i]))
              for i, eid in enumerate(_ids("e", n_e))]

    lo, hi, p_extra = competing_count_law(params.competing_mean)
    per_t = rng.integers(lo, hi + 1, size=n_t) + (rng.random(n_t) < p_extra)
    comp_t = np.repeat(np.arange(n_t), per_t)
    competing = [CompetingEvent(cid, intervals[comp_t[i]])
                 for i, cid in enumerate(_ids("c", len(comp_t)))]

    tlo, thi = params.tags_per_entity
    user_tags = _random_tag_sets(rng, n_u, params.vocab_size, tlo, thi)
    event_tags = _random_tag_sets(rng, n_e, params.vocab_size, tlo, thi)
    comp_tags = _random_tag_sets(rng, len(competing), params.vocab_size, tlo, thi)
    sigma = rng.random((n_t, n_u))

    return Instance(
        theta=params.theta,
        intervals=intervals,
        events=events,
        competing=competing,
        user_ids=_ids("u", n_u),
        event_interest=jaccard_matrix(event_tags, user_tags),
        competing_interest=jaccard_matrix(comp_tags, user_tags),
        activity=sigma,
    )


def build_instance_from_tags(
    tagged_users: Mapping[str, Iterable[str]],
    tagged_events: Mapping[str, Iterable[str]],
    tagged_competing: Mapping[str, Iterable[str]],
    interval_map: Mapping[str, str],
    theta: float,
    xi_map: Mapping[str, float],
    *,
    location_map: Mapping[str, str] | None = None,
    intervals: Sequence[str] | None = None,
    activity: Mapping[str, Mapping[str, float]] | None = None,
    default_activity: float = 1.0,
) -> Instance:
    """Instance whose interest values are tag Jaccard similarities.

    ``interval_map`` places competing events; ``xi_map`` gives each candidate
    event's required resources. Events without a ``location_map`` entry get a
    location of their own. Users without an ``activity`` map are active with
    probability ``default_activity`` in every interval.
    """
    if intervals is None:
        intervals = sorted(set(interval_map.values()))
    intervals = list(intervals)
    known_t = set(intervals)
    location_map = location_map or {}
    activity = activity or {}

    for cid in tagged_competing:
        if cid not in interval_map:
            raise InputError(f"competing event {cid!r} has no interval")
        if interval_map[cid] not in known_t:
            raise InputError(f"competing event {cid!r} references unknown interval "
                             f"{interval_map[cid]!r}")
    for eid in tagged_events:
        if eid not in xi_map:
            raise InputError(f"event {eid!r} has no required resources")
    for uid, amap in activity.items():
        if uid not in tagged_users:
            raise InputError(f"activity given for unknown user {uid!r}")
        for t in amap:
            if t not in known_t:
                raise InputError(f"user {uid!r}: activity for unknown interval {t!r}")

    user_ids = list(tagged_users)
    ev_ids = list(tagged_events)
    cp_ids = list(tagged_competing)
    vocab = sorted({tag for group in (tagged_users, tagged_events, tagged_competing)
                    for tags in group.values() for tag in tags})
    col = {tag: i for i, tag in enumerate(vocab)}

    def membership(group: Mapping[str, Iterable[str]], ids: list[str]) -> np.ndarray:
        m = np.zeros((len(ids), len(vocab)), dtype=bool)
        for i, x in enumerate(ids):
            for tag in group[x]:
                m[i, col[tag]] = True
        return m

    users_m = membership(tagged_users, user_ids)
    t_idx = {t: i for i, t in enumerate(intervals)}
    sigma = np.full((len(intervals), len(user_ids)), float(default_activity))
    for j, uid in enumerate(user_ids):
        if uid in activity:
            sigma[:, j] = 0.0
            for t, v in activity[uid].items():
                sigma[t_idx[t], j] = v

    return Instance(
        theta=theta,
        intervals=intervals,
        events=[CandidateEvent(eid, location_map.get(eid, eid), float(xi_map[eid]))
                for eid in ev_ids],
        competing=[CompetingEvent(cid, interval_map[cid]) for cid in cp_ids],
        user_ids=user_ids,
        event_interest=jaccard_matrix(membership(tagged_events, ev_ids), users_m),
        competing_interest=jaccard_matrix(membership(tagged_competing, cp_ids), users_m),
        activity=sigma,
    )


def random_tiny(rng: np.random.Generator, *, max_events: int = 6, max_intervals: int = 3,
                max_users: int = 5, max_competing: int = 2, tight: bool = False) -> Instance:
    """Small random instance for oracle checks.

    Sizes are drawn uniformly from 1..max and competing events per interval
    uniformly from 0..max_competing. By default every other parameter is the
    :class:`GenParams` default. ``tight`` instead uses 1-3 locations, a budget
    drawn from [5, 20] and a 6-token vocabulary, so both feasibility
    constraints bind often and interest values are frequently 0.
    """
    n_e = int(rng.integers(1, max_events + 1))
    n_t = int(rng.integers(1, max_intervals + 1))
    n_u = int(rng.integers(1, max_users + 1))
    seed = int(rng.integers(2**31))
    params = GenParams(k=max(1, n_e // 2), num_events=n_e, num_intervals=n_t, num_users=n_u,
                       competing_mean=max_competing / 2 if max_competing else 1.0, seed=seed)
    if tight:
        theta = float(rng.uniform(5.0, 20.0))
        params = params.replace(num_locations=int(rng.integers(1, 4)), theta=theta,
                                xi_range=(1.0, min(theta, 20.0 / 3.0)),
                                vocab_size=6, tags_per_entity=(1, 3))
    inst = generate(params)
    if max_competing == 0 and inst.competing:
        inst = dataclasses.replace(inst, competing=(),
                                   competing_interest=np.zeros((0, n_u)))
    return inst


def zero_interest(instance: Instance) -> Instance:
    """Copy of ``instance`` with every interest value set to 0."""
    return dataclasses.replace(
        instance,
        event_interest=np.zeros_like(instance.event_interest),
        competing_interest=np.zeros_like(instance.competing_interest),
    )
