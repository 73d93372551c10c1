import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sesched import kernels  # noqa: E402
from sesched.model import CandidateEvent, CompetingEvent, Instance, User  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def make_instance(events, users, intervals=("t1",), competing=(), theta=20.0):
    """events: (id, location, resources); competing: (id, interval);
    users: (id, interest dict, activity dict)."""
    return Instance.from_users(
        theta,
        list(intervals),
        [CandidateEvent(*e) for e in events],
        [CompetingEvent(*c) for c in competing],
        [User(*u) for u in users],
    )


def random_dense_instance(rng, n_e, n_t, n_u, n_c, theta=20.0, n_loc=None, zero_frac=0.3):
    """Dense random instance with some exact zeros in interest and activity.

    Locations are distinct unless ``n_loc`` is given."""
    mu_e = rng.random((n_e, n_u)) * (rng.random((n_e, n_u)) > zero_frac)
    mu_c = rng.random((n_c, n_u)) * (rng.random((n_c, n_u)) > zero_frac)
    sigma = rng.random((n_t, n_u)) * (rng.random((n_t, n_u)) > zero_frac / 2)
    intervals = [f"t{i}" for i in range(n_t)]
    return Instance(
        theta=theta,
        intervals=intervals,
        events=[CandidateEvent(f"e{i}", f"L{i if n_loc is None else rng.integers(n_loc)}",
                               float(rng.uniform(1, 20 / 3)))
                for i in range(n_e)],
        competing=[CompetingEvent(f"c{i}", intervals[rng.integers(n_t)]) for i in range(n_c)],
        user_ids=[f"u{i}" for i in range(n_u)],
        event_interest=mu_e,
        competing_interest=mu_c,
        activity=sigma,
    )


@pytest.fixture(scope="session", autouse=True)
def _jit_warm():
    kernels.warmup()
    if kernels.numba_kernels is not None:
        kernels.warmup(kernels.numba_kernels)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
