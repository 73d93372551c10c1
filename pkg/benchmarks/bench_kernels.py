"""Compare the numba and numpy kernel backends.

Times the full initial score matrix and a complete GRD run on generated
instances, and checks both backends agree. Run from the repo root:

    python3 benchmarks/bench_kernels.py --users 2500 5000 --k 50 100
"""

import argparse
import time

import numpy as np

from sesched import kernels
from sesched.instancegen import GenParams, generate
from sesched.scoring import ScoreState
from sesched.solvers import solve_grd


def best_of(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--users", type=int, nargs="+", default=[2500, 5000])
    p.add_argument("--k", type=int, nargs="+", default=[50, 100])
    p.add_argument("--reps", type=int, default=3)
    args = p.parse_args(argv)

    if kernels.numba_kernels is None:
        raise SystemExit("numba is not installed; nothing to compare")
    for backend in (kernels.numpy_kernels, kernels.numba_kernels):
        kernels.warmup(backend)

    print(f"{'k':>5} {'users':>6} {'stage':>10} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for k in args.k:
        for users in args.users:
            inst = generate(GenParams(k=k, num_users=users))
            times = {}
            for name in ("numpy", "numba"):
                state = ScoreState(inst, kernels.select(name))
                times["init", name] = best_of(state.all_gains, args.reps)
                times["grd", name] = best_of(lambda: solve_grd(inst, k, backend=name), args.reps)
            a = ScoreState(inst, kernels.numpy_kernels).all_gains()
            b = ScoreState(inst, kernels.numba_kernels).all_gains()
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)
            assert (solve_grd(inst, k, backend="numpy").pairs()
                    == solve_grd(inst, k, backend="numba").pairs())
            for stage in ("init", "grd"):
                t_np, t_nb = times[stage, "numpy"], times[stage, "numba"]
                print(f"{k:>5} {users:>6} {stage:>10} {t_np * 1e3:>10.1f} {t_nb * 1e3:>10.1f} "
                      f"{t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
