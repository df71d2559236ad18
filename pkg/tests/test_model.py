import numpy as np
import pytest
from hypothesis import given, strategies as st

from qubitdesign.model import Outcome, dt_to_times, is_feasible, outcome_probability, times_to_dt

times_st = st.floats(min_value=0, max_value=50, allow_nan=False)
omega_st = st.floats(min_value=0, max_value=1, allow_nan=False)


@pytest.mark.parametrize(
    "t, omega, outcome, expected",
    [(1, 0.0, Outcome.PLUS, 0.0), (1, 1.0, Outcome.PLUS, 1.0), (2, 0.5, Outcome.MINUS, 0.0)],
)
def test_outcome_probability_examples(t, omega, outcome, expected):
    assert outcome_probability(t, omega, outcome) == pytest.approx(expected, abs=1e-15)


@given(times_st, omega_st)
def test_outcome_probabilities_sum_to_one(t, omega):
    total = outcome_probability(t, omega, Outcome.PLUS) + outcome_probability(t, omega, Outcome.MINUS)
    assert abs(total - 1.0) <= 1e-15


@given(st.integers(1, 20), st.floats(0, 1), st.integers(-3, 3))
def test_integer_time_periodicity(m, omega, shift):
    period = 2.0 / m
    other = omega + shift * period
    if not 0 <= other <= 1:
        return
    assert outcome_probability(m, omega, "+") == pytest.approx(
        outcome_probability(m, other, "+"), abs=1e-12
    )


def test_outcome_probability_domain_errors():
    with pytest.raises(ValueError):
        outcome_probability(-1, 0.5, "+")
    with pytest.raises(ValueError):
        outcome_probability(1, 1.5, "+")
    with pytest.raises(ValueError):
        outcome_probability(1, -0.1, "-")


def test_outcome_coercion():
    assert Outcome.coerce("+") is Outcome.PLUS
    assert Outcome.coerce(False) is Outcome.MINUS
    assert Outcome.coerce("minus") is Outcome.MINUS
    with pytest.raises(ValueError):
        Outcome.coerce("x")


def test_dt_to_times_examples():
    np.testing.assert_array_equal(dt_to_times([1, 1, 1]), [1, 2, 3])
    np.testing.assert_allclose(
        dt_to_times([1.060, 0.022, 0.337, 0.719, 0.732]),
        [1.060, 1.082, 1.419, 2.138, 2.870],
        atol=1e-12,
    )
    np.testing.assert_array_equal(dt_to_times([2]), [2])


def test_times_to_dt_examples():
    np.testing.assert_array_equal(times_to_dt([1, 2, 3]), [1, 1, 1])
    np.testing.assert_array_equal(times_to_dt([1, 1, 1, 2, 3]), [1, 0, 0, 1, 1])
    d = times_to_dt([3, 1])
    np.testing.assert_array_equal(d, [3, -2])
    assert not is_feasible(d)
    with pytest.raises(ValueError):
        times_to_dt([])


@given(st.lists(st.integers(-64, 64).map(lambda k: k / 8), min_size=1, max_size=12))
def test_dt_round_trip_exact_on_dyadics(dts):
    np.testing.assert_array_equal(times_to_dt(dt_to_times(dts)), dts)


@given(st.lists(st.integers(0, 1000).map(lambda k: k / 4), min_size=1, max_size=12))
def test_times_round_trip_exact_on_dyadics(times):
    np.testing.assert_array_equal(dt_to_times(times_to_dt(times)), times)


def test_feasibility_allows_repeated_times():
    assert is_feasible([1.0, 0.0, 0.0])
    assert not is_feasible([1.0, -1e-9])
