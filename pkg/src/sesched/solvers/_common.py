from __future__ import annotations

from dataclasses import asdict, dataclass, field
from types import SimpleNamespace

import numpy as np

from ..errors import InputError
from ..model import Instance, Schedule
from ..scoring import total_utility


@dataclass
class Counters:
    iterations: int = 0
    score_computations: int = 0
    score_updates: int = 0
    invalid_pops: int = 0


@dataclass
class SolveReport:
    """Solver output. ``utility`` is always recomputed from the final schedule."""

    method: str
    k: int
    schedule: Schedule
    utility: float
    wall_time: float
    counters: Counters = field(default_factory=Counters)
    shortfall: bool = False
    accepted_scores: list[float] = field(default_factory=list)

    @property
    def wall_time_ms(self) -> float:
        return self.wall_time * 1e3

    def pairs(self) -> list[tuple[str, str]]:
        return [(a.event, a.interval) for a in self.schedule]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "k": self.k,
            "schedule": [{"event": a.event, "interval": a.interval, "score": a.score}
                         for a in self.schedule],
            "utility": self.utility,
            "wall_time_ms": self.wall_time_ms,
            "counters": asdict(self.counters),
            "shortfall": self.shortfall,
        }


def check_k(k: int) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    return int(k)


def rank_permutations(instance: Instance) -> tuple[np.ndarray, np.ndarray]:
    """Event and interval indices sorted by ascending id."""
    return np.argsort(instance.event_order), np.argsort(instance.interval_order)


def finish(method: str, instance: Instance, k: int, schedule: Schedule, elapsed: float,
           counters: Counters, accepted: list[float] | None = None) -> SolveReport:
    return SolveReport(
        method=method, k=k, schedule=schedule,
        utility=total_utility(instance, schedule),
        wall_time=elapsed, counters=counters,
        shortfall=len(schedule) < k,
        accepted_scores=list(accepted or []),
    )


def resolve_kernels(backend: str | SimpleNamespace | None) -> SimpleNamespace | None:
    if backend is None or isinstance(backend, SimpleNamespace):
        return backend
    from .. import kernels
    return kernels.select(backend)
