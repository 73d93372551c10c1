"""Per-user inner loops, with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``SESCHED_DISABLE_NUMBA`` is
unset (or ``0``). Both paths are always importable for comparison as
:data:`numpy_kernels` and :data:`numba_kernels` (``None`` without numba).

Gain of adding interest ``m`` to a user whose interval aggregates are
``a`` (scheduled) and ``c`` (competing), scaled by activity ``s``::

    s * (f(a + m) - f(a)),   f(x) = x / (x + c),  f = 0 when x + c = 0

is evaluated as ``s * m * c / ((a + m + c) * (a + c))`` for ``c > 0`` and as
the 0 -> 1 jump ``s * [a == 0 and m > 0]`` for ``c == 0``. Every factor is
non-negative and the denominator grows with ``a``, so the floating-point
result is itself non-negative and non-increasing in ``a``.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

_FLAG = "SESCHED_DISABLE_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


# -- pure numpy -------------------------------------------------------------


def _np_interval_gains(sigma_t, comp_t, sched_t, mu, rows):
    m = mu[rows]
    c = comp_t
    a = sched_t
    den = (a + m + c) * (a + c)
    frac = np.divide(m * c, den, out=np.zeros_like(m), where=den > 0)
    jump = (c == 0.0) & (a == 0.0) & (m > 0.0)
    return (sigma_t * (frac + jump)).sum(axis=1)


def _np_all_gains(sigma, comp, sched, mu):
    n_e, n_t = mu.shape[0], sigma.shape[0]
    out = np.empty((n_e, n_t))
    rows = np.arange(n_e)
    for t in range(n_t):
        out[:, t] = _np_interval_gains(sigma[t], comp[t], sched[t], mu, rows)
    return out


def _np_event_attendance(sigma_t, comp_t, sched_t, mu_e):
    den = comp_t + sched_t
    share = np.divide(mu_e, den, out=np.zeros_like(mu_e), where=den > 0)
    return float((sigma_t * share).sum())


numpy_kernels = SimpleNamespace(
    name="numpy",
    interval_gains=_np_interval_gains,
    all_gains=_np_all_gains,
    event_attendance=_np_event_attendance,
)


# -- numba ------------------------------------------------------------------

numba_kernels = None

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

if numba is not None:

    @numba.njit(cache=True, inline="always")
    def _nb_gain_row(sigma_t, comp_t, sched_t, mu_row):
        total = 0.0
        for u in range(mu_row.shape[0]):
            m = mu_row[u]
            c = comp_t[u]
            a = sched_t[u]
            if c > 0.0:
                total += sigma_t[u] * ((m * c) / ((a + m + c) * (a + c)))
            elif a == 0.0 and m > 0.0:
                total += sigma_t[u]
        return total

    @numba.njit(cache=True)
    def _nb_interval_gains(sigma_t, comp_t, sched_t, mu, rows):
        out = np.empty(rows.shape[0])
        for i in range(rows.shape[0]):
            out[i] = _nb_gain_row(sigma_t, comp_t, sched_t, mu[rows[i]])
        return out

    @numba.njit(cache=True)
    def _nb_all_gains(sigma, comp, sched, mu):
        n_e, n_t = mu.shape[0], sigma.shape[0]
        out = np.empty((n_e, n_t))
        for t in range(n_t):
            for e in range(n_e):
                out[e, t] = _nb_gain_row(sigma[t], comp[t], sched[t], mu[e])
        return out

    @numba.njit(cache=True)
    def _nb_event_attendance(sigma_t, comp_t, sched_t, mu_e):
        total = 0.0
        for u in range(mu_e.shape[0]):
            den = comp_t[u] + sched_t[u]
            if den > 0.0:
                total += sigma_t[u] * (mu_e[u] / den)
        return total

    numba_kernels = SimpleNamespace(
        name="numba",
        interval_gains=_nb_interval_gains,
        all_gains=_nb_all_gains,
        event_attendance=_nb_event_attendance,
    )


def select(name: str | None = None) -> SimpleNamespace:
    """Kernel set by name (``"numba"``/``"numpy"``), or the env-selected default."""
    if name is None:
        name = "numpy" if (_numba_disabled() or numba_kernels is None) else "numba"
    if name == "numba":
        if numba_kernels is None:
            raise RuntimeError("numba is not installed")
        return numba_kernels
    if name == "numpy":
        return numpy_kernels
    raise ValueError(f"unknown kernel backend {name!r}")


active = select()
BACKEND = active.name


def warmup(kernels: SimpleNamespace | None = None) -> None:
    """Trigger JIT compilation so timings exclude it.

    Instance arrays are read-only, which numba types separately from
    writable ones, so both variants are compiled.
    """
    k = kernels or active
    for writable in (True, False):
        sigma = np.ones((2, 3))
        mu = np.full((2, 3), 0.5)
        sigma.setflags(write=writable)
        mu.setflags(write=writable)
        k.all_gains(sigma, np.full((2, 3), 0.5), np.zeros((2, 3)), mu)
        k.interval_gains(sigma[0], np.ones(3), np.zeros(3), mu, np.arange(2, dtype=np.int64))
        k.event_attendance(sigma[0], np.ones(3), np.zeros(3), mu[0])
