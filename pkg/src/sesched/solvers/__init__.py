"""Greedy (GRD), TOP, RAND and exhaustive (EXACT) solvers."""

from ._common import Counters, SolveReport
from .exact import solve_exact
from .grd import GreedyStep, solve_grd
from .rand import solve_rand
from .top import solve_top

METHODS = ("GRD", "TOP", "RAND", "EXACT")


def solve(instance, method: str, k: int, seed: int = 0, **kwargs) -> SolveReport:
    """Dispatch by method name (case-insensitive)."""
    name = method.upper()
    if name == "GRD":
        return solve_grd(instance, k, **kwargs)
    if name == "TOP":
        return solve_top(instance, k, **kwargs)
    if name == "RAND":
        return solve_rand(instance, k, seed)
    if name == "EXACT":
        return solve_exact(instance, k, **kwargs)
    from ..errors import InputError
    raise InputError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


__all__ = ["Counters", "GreedyStep", "METHODS", "SolveReport", "solve", "solve_exact",
           "solve_grd", "solve_rand", "solve_top"]
