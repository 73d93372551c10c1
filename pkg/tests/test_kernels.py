import os
import subprocess
import sys

import numpy as np
import pytest

from sesched import kernels
from sesched.instancegen import GenParams, generate
from sesched.scoring import ScoreState
from sesched.solvers import solve_grd, solve_top

BACKENDS = [kernels.numpy_kernels] + ([kernels.numba_kernels] if kernels.numba_kernels else [])
needs_numba = pytest.mark.skipif(kernels.numba_kernels is None, reason="numba not installed")


def _arrays(rng, n_e=7, n_t=4, n_u=50):
    sigma = rng.random((n_t, n_u))
    comp = rng.random((n_t, n_u)) * (rng.random((n_t, n_u)) > 0.3)
    sched = rng.random((n_t, n_u)) * (rng.random((n_t, n_u)) > 0.5)
    mu = rng.random((n_e, n_u)) * (rng.random((n_e, n_u)) > 0.3)
    return sigma, comp, sched, mu


def _reference_gain(s, c, a, m):
    def f(x, c):
        return 0.0 if x + c == 0 else x / (x + c)
    return sum(s[u] * (f(a[u] + m[u], c[u]) - f(a[u], c[u])) for u in range(len(s)))


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.name)
def test_gains_match_difference_of_shares(k, rng):
    sigma, comp, sched, mu = _arrays(rng)
    g = k.all_gains(sigma, comp, sched, mu)
    for e in range(mu.shape[0]):
        for t in range(sigma.shape[0]):
            assert g[e, t] == pytest.approx(_reference_gain(sigma[t], comp[t], sched[t], mu[e]),
                                            rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.name)
def test_interval_gains_bitwise_equal_to_full_matrix(k, rng):
    sigma, comp, sched, mu = _arrays(rng)
    full = k.all_gains(sigma, comp, sched, mu)
    rows = np.array([5, 1, 3], dtype=np.int64)
    for t in range(sigma.shape[0]):
        part = k.interval_gains(sigma[t], comp[t], sched[t], mu, rows)
        assert np.array_equal(part, full[rows, t])


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.name)
def test_event_attendance(k, rng):
    sigma, comp, sched, mu = _arrays(rng)
    den = comp[0] + sched[0]
    ref = sum(sigma[0, u] * mu[2, u] / den[u] for u in range(len(den)) if den[u] > 0)
    assert k.event_attendance(sigma[0], comp[0], sched[0], mu[2]) == pytest.approx(ref, rel=1e-12)


@needs_numba
def test_backends_agree(rng):
    sigma, comp, sched, mu = _arrays(rng, 20, 6, 500)
    np.testing.assert_allclose(kernels.numba_kernels.all_gains(sigma, comp, sched, mu),
                               kernels.numpy_kernels.all_gains(sigma, comp, sched, mu),
                               rtol=1e-12, atol=1e-13)


@needs_numba
def test_solvers_agree_across_backends():
    inst = generate(GenParams(k=15, num_users=400, seed=4))
    a, b = solve_grd(inst, 15, backend="numba"), solve_grd(inst, 15, backend="numpy")
    assert a.pairs() == b.pairs()
    assert a.utility == pytest.approx(b.utility, rel=1e-12)
    assert solve_top(inst, 15, backend="numba").pairs() == solve_top(inst, 15, backend="numpy").pairs()


def test_state_uses_selected_backend():
    inst = generate(GenParams(k=4, num_users=30, seed=1))
    st = ScoreState(inst, kernels.numpy_kernels)
    assert st.kernels is kernels.numpy_kernels


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.select("fortran")


@pytest.mark.parametrize("value,expected", [("1", "numpy"), ("", None)])
def test_env_flag_selects_backend(value, expected):
    env = dict(os.environ, SESCHED_DISABLE_NUMBA=value)
    out = subprocess.run([sys.executable, "-c", "from sesched import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    if expected is None:
        expected = "numba" if kernels.numba_kernels is not None else "numpy"
    assert out == expected
