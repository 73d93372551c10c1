import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import make_instance, random_dense_instance
from sesched.errors import InputError, InvariantError
from sesched.model import Schedule
from sesched.scoring import (ScoreState, apply_assignment, assignment_score,
                             attendance_probability, expected_attendance, total_utility)


def _state(inst, pairs):
    s = ScoreState(inst)
    for e, t in pairs:
        apply_assignment(s, inst, e, t)
    return s


# -- attendance probability --------------------------------------------------

def test_sole_option_attends_surely():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.4}, {"t1": 1.0})])
    s = _state(inst, [("e", "t1")])
    assert attendance_probability(inst, s, "u", "e", "t1") == pytest.approx(1.0, rel=1e-12)


def test_symmetric_split_with_competitor():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.5, "c": 0.5}, {"t1": 0.5})],
                         competing=[("c", "t1")])
    s = _state(inst, [("e", "t1")])
    assert attendance_probability(inst, s, "u", "e", "t1") == pytest.approx(0.25, rel=1e-12)


def test_inactive_user_never_attends():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.9}, {"t1": 0.0})])
    assert attendance_probability(inst, _state(inst, [("e", "t1")]), "u", "e", "t1") == 0.0


def test_zero_interest_everywhere_gives_zero_not_nan():
    inst = make_instance([("e", "L", 1.0)], [("u", {}, {"t1": 1.0})])
    assert attendance_probability(inst, _state(inst, [("e", "t1")]), "u", "e", "t1") == 0.0


def test_probability_requires_placement_and_known_ids():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.4}, {"t1": 1.0})])
    with pytest.raises(InvariantError):
        attendance_probability(inst, ScoreState(inst), "u", "e", "t1")
    with pytest.raises(InputError):
        attendance_probability(inst, _state(inst, [("e", "t1")]), "nobody", "e", "t1")


def test_probability_matches_formula_on_random_state(rng):
    inst = random_dense_instance(rng, 2, 1, 3, 1, zero_frac=0.0)
    pairs = [("e0", "t0"), ("e1", "t0")]
    s = _state(inst, pairs)
    for u in inst.user_ids:
        for e, t in pairs:
            assert attendance_probability(inst, s, u, e, t) == pytest.approx(
                oracles.rho(inst, u, e, t, pairs), rel=1e-12)


# -- expected attendance / total utility -------------------------------------

def test_expected_attendance_zero_activity():
    inst = make_instance([("e", "L", 1.0)], [(f"u{i}", {"e": 0.7}, {}) for i in range(4)])
    assert expected_attendance(inst, _state(inst, [("e", "t1")]), "e", "t1") == 0.0


def test_expected_attendance_single_user_sole_option():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.4}, {"t1": 1.0})])
    assert expected_attendance(inst, _state(inst, [("e", "t1")]), "e", "t1") == pytest.approx(1.0)


def test_expected_attendance_five_users(rng):
    inst = random_dense_instance(rng, 3, 2, 5, 3)
    pairs = [("e0", "t0"), ("e1", "t0"), ("e2", "t1")]
    s = _state(inst, pairs)
    for e, t in pairs:
        terms = [oracles.rho(inst, u, e, t, pairs) for u in inst.user_ids]
        assert expected_attendance(inst, s, e, t) == pytest.approx(math.fsum(terms), rel=1e-12)


def test_total_utility_empty_and_single():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.4}, {"t1": 1.0})])
    assert total_utility(inst, Schedule(inst)) == 0.0
    assert total_utility(inst, Schedule.from_pairs(inst, [("e", "t1")])) == pytest.approx(1.0)


def test_total_utility_tiny_matches_oracle(rng):
    inst = random_dense_instance(rng, 3, 2, 3, 2, theta=100.0)
    for pairs in ([("e0", "t0")], [("e0", "t0"), ("e1", "t0")],
                  [("e0", "t0"), ("e1", "t1"), ("e2", "t0")]):
        assert total_utility(inst, pairs) == pytest.approx(oracles.total(inst, pairs), rel=1e-12)


def test_total_utility_rejects_infeasible_pairs():
    inst = make_instance([("a", "L", 1.0), ("b", "L", 1.0)], [("u", {}, {})])
    with pytest.raises(InvariantError):
        total_utility(inst, [("a", "t1"), ("b", "t1")])


# -- assignment score --------------------------------------------------------

def test_first_event_in_empty_interval_gains_total_activity():
    users = [(f"u{i}", {"e": 0.1 * (i + 1)}, {"t1": 0.2 * i}) for i in range(4)]
    inst = make_instance([("e", "L", 1.0)], users)
    assert assignment_score(inst, ScoreState(inst), "e", "t1") == pytest.approx(0.0 + 0.2 + 0.4 + 0.6)


def test_second_event_without_competition_only_cannibalizes():
    users = [(f"u{i}", {"a": 0.3, "b": 0.6}, {"t1": 0.9}) for i in range(3)]
    inst = make_instance([("a", "L1", 1.0), ("b", "L2", 1.0)], users)
    assert assignment_score(inst, _state(inst, [("a", "t1")]), "b", "t1") == 0.0


def test_gain_one_sixth():
    inst = make_instance([("p", "L1", 1.0), ("r", "L2", 1.0)],
                         [("u", {"p": 0.5, "r": 0.5, "c": 0.5}, {"t1": 1.0})],
                         competing=[("c", "t1")])
    g = assignment_score(inst, _state(inst, [("p", "t1")]), "r", "t1")
    assert g == pytest.approx(1 / 6, rel=1e-12)
    after = total_utility(inst, [("p", "t1"), ("r", "t1")])
    before = total_utility(inst, [("p", "t1")])
    assert g == pytest.approx(after - before, rel=1e-12)


def test_gain_of_scheduled_event_is_an_error():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.4}, {"t1": 1.0})], intervals=("t1", "t2"))
    with pytest.raises(InvariantError):
        assignment_score(inst, _state(inst, [("e", "t1")]), "e", "t2")


def test_gain_ignores_feasibility():
    inst = make_instance([("a", "L", 30.0)], [("u", {"a": 0.4}, {"t1": 0.5})], theta=20.0)
    assert assignment_score(inst, ScoreState(inst), "a", "t1") == pytest.approx(0.5)


# -- apply -------------------------------------------------------------------

def test_apply_zero_interest_leaves_state():
    inst = make_instance([("e", "L", 1.0), ("z", "L2", 1.0)],
                         [("u", {"e": 0.4}, {"t1": 1.0}), ("v", {"e": 0.1}, {})])
    s = _state(inst, [("e", "t1")])
    before = s.scheduled.copy()
    apply_assignment(s, inst, "z", "t1")
    assert np.array_equal(before, s.scheduled)


def test_apply_twice_is_an_error():
    inst = make_instance([("e", "L", 1.0)], [("u", {"e": 0.4}, {})], intervals=("t1", "t2"))
    s = _state(inst, [("e", "t1")])
    with pytest.raises(InvariantError):
        apply_assignment(s, inst, "e", "t2")


def test_apply_matches_rebuild_and_brute_sums(rng):
    inst = random_dense_instance(rng, 4, 2, 6, 2, theta=100.0)
    pairs = [("e2", "t0"), ("e0", "t1"), ("e3", "t0")]
    s = _state(inst, pairs)
    rebuilt = ScoreState.from_schedule(inst, Schedule.from_pairs(inst, pairs))
    assert np.array_equal(s.scheduled, rebuilt.scheduled)
    for j, u in enumerate(inst.users):
        for t in inst.intervals:
            brute = sum(u.interest.get(e, 0.0) for e, tt in pairs if tt == t)
            assert s.scheduled[inst.interval_index[t], j] == pytest.approx(brute, rel=1e-15)


# -- properties --------------------------------------------------------------

def _random_state(seed):
    r = np.random.default_rng(seed)
    n_e, n_t = int(r.integers(2, 7)), int(r.integers(1, 4))
    inst = random_dense_instance(r, n_e, n_t, int(r.integers(1, 6)), int(r.integers(0, 4)),
                                 theta=100.0)
    order = r.permutation(n_e)[: int(r.integers(0, n_e))]
    pairs = [(f"e{e}", f"t{r.integers(n_t)}") for e in order]
    return inst, pairs, r


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gains_nonnegative_and_diminishing(seed):
    inst, pairs, r = _random_state(seed)
    state = _state(inst, pairs)
    placed = {e for e, _ in pairs}
    free = [e.id for e in inst.events if e.id not in placed]
    if len(free) < 2:
        return
    cand, other = free[0], free[1]
    t = inst.intervals[r.integers(inst.n_intervals)]
    before = assignment_score(inst, state, cand, t)
    assert before >= 0.0
    apply_assignment(state, inst, other, t)
    assert 0.0 <= assignment_score(inst, state, cand, t) <= before


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_normalization_and_ranges(seed):
    inst, pairs, _ = _random_state(seed)
    state = _state(inst, pairs)
    for j, u in enumerate(inst.user_ids):
        for ti, t in enumerate(inst.intervals):
            here = [e for e, tt in pairs if tt == t]
            a, c = state.scheduled[ti, j], state.competing[ti, j]
            probs = [attendance_probability(inst, state, u, e, t) for e in here]
            assert all(0.0 <= p <= 1.0 for p in probs)
            if a + c > 0:
                sigma = inst.activity[ti, j]
                assert math.fsum(probs) == pytest.approx(sigma * a / (a + c), rel=1e-12, abs=1e-15)
                assert math.fsum(probs) <= sigma + 1e-15
    for e, t in pairs:
        assert 0.0 <= expected_attendance(inst, state, e, t) <= inst.n_users


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gains_telescope_to_total_utility(seed):
    inst, pairs, _ = _random_state(seed)
    state = ScoreState(inst)
    gains = []
    for e, t in pairs:
        gains.append(assignment_score(inst, state, e, t))
        apply_assignment(state, inst, e, t)
    omega = oracles.total(inst, pairs)
    assert math.fsum(gains) == pytest.approx(omega, rel=1e-9, abs=1e-12)
    assert total_utility(inst, pairs) == pytest.approx(omega, rel=1e-12, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gain_depends_on_occupant_set_only(seed):
    inst, pairs, r = _random_state(seed)
    shuffled = [pairs[i] for i in r.permutation(len(pairs))]
    s1, s2 = _state(inst, pairs), _state(inst, shuffled)
    assert np.array_equal(s1.scheduled, s2.scheduled)
    assert np.array_equal(s1.all_gains(), s2.all_gains())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gain_matches_brute_difference(seed):
    inst, pairs, _ = _random_state(seed)
    state = _state(inst, pairs)
    placed = {e for e, _ in pairs}
    for ev in inst.events:
        if ev.id in placed:
            continue
        for t in inst.intervals:
            assert assignment_score(inst, state, ev.id, t) == pytest.approx(
                oracles.gain(inst, ev.id, t, pairs), rel=1e-9, abs=1e-12)
