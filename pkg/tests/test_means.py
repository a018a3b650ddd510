import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanmetrics.means import (
    ARITHMETIC, GEOMETRIC, LOGARITHMIC, MAX, MIN, MeanKind, log_mean, mean, power, power_mean,
)

positive = st.floats(min_value=1e-8, max_value=1e8, allow_nan=False, allow_infinity=False)


def mp_log_mean(a, b):
    a, b = mpmath.mpf(a), mpmath.mpf(b)
    return a if a == b else (a - b) / (mpmath.log(a) - mpmath.log(b))


@pytest.mark.parametrize("a,b,expected", [
    (1.0, 2.0, 1.0 / math.log(2.0)),
    (2.0, 2.0, 2.0),
    (1.0, math.e, math.e - 1.0),
])
def test_log_mean_values(a, b, expected):
    assert log_mean(a, b) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("ratio", [1 + 1e-12, 1 + 3e-9, 1 + 9.9e-5, 1 + 1.01e-4, 1 - 5e-5, 0.51, 1.99, 50.0, 1e-6])
def test_log_mean_matches_high_precision(ratio):
    with mpmath.workdps(50):
        expected = float(mp_log_mean(3.0, 3.0 * ratio))
    assert log_mean(3.0, 3.0 * ratio) == pytest.approx(expected, rel=2e-15)


def test_log_mean_continuous_across_series_cutoff():
    a = 1.7
    below = log_mean(a, a * (1 + 0.99999e-4))
    above = log_mean(a, a * (1 + 1.00001e-4))
    assert abs(above - below) < 1e-8 * a


@pytest.mark.parametrize("d,expected", [(2.0, math.sqrt(5.0)), (1.0, 2.0), (0.5, 1.0 + math.sqrt(3.0) / 2.0)])
def test_power_mean_values(d, expected):
    assert power_mean(1.0, 3.0, d) == pytest.approx(expected, rel=1e-15)


def test_power_one_is_arithmetic_exactly():
    a, b = 0.1, 0.7
    assert mean(power(1), a, b) == mean(ARITHMETIC, a, b)


def test_named_means():
    assert mean(MIN, 2.0, 5.0) == 2.0
    assert mean(MAX, 2.0, 5.0) == 5.0
    assert mean(GEOMETRIC, 4.0, 9.0) == pytest.approx(6.0)
    assert mean(GEOMETRIC, 0.3, 0.3) == 0.3
    assert mean(ARITHMETIC, 3.0, 4.0) == 3.5


def test_broadcasting_and_scalars():
    out = mean(LOGARITHMIC, np.array([1.0, 2.0, 4.0]), 2.0)
    assert out.shape == (3,)
    assert out[1] == 2.0
    assert isinstance(mean(LOGARITHMIC, 1.0, 2.0), float)


@pytest.mark.parametrize("args", [(0.0, 1.0), (-1.0, 2.0), (math.inf, 1.0), (math.nan, 1.0)])
def test_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        mean(ARITHMETIC, *args)


def test_mean_kind_validation():
    with pytest.raises(ValueError):
        MeanKind("power")
    with pytest.raises(ValueError):
        MeanKind("median")
    with pytest.raises(ValueError):
        power(0.0)


KINDS = [ARITHMETIC, LOGARITHMIC, MIN, MAX, GEOMETRIC, power(0.2), power(1 / 3), power(3.0)]


@settings(max_examples=200, deadline=None)
@given(a=positive, b=positive, t=st.floats(min_value=1e-3, max_value=1e3))
def test_mean_properties(a, b, t):
    for kind in KINDS:
        m = mean(kind, a, b)
        assert min(a, b) * (1 - 1e-14) <= m <= max(a, b) * (1 + 1e-14)
        assert m == pytest.approx(mean(kind, b, a), rel=1e-14)
        assert mean(kind, t * a, t * b) == pytest.approx(t * m, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(a=positive, b=positive)
def test_log_mean_between_geometric_and_arithmetic(a, b):
    g, l, m = mean(GEOMETRIC, a, b), log_mean(a, b), mean(ARITHMETIC, a, b)
    assert g * (1 - 1e-14) <= l <= m * (1 + 1e-14)


@settings(max_examples=100, deadline=None)
@given(a=positive, b=positive)
def test_power_mean_monotone_in_exponent(a, b):
    values = [power_mean(a, b, d) for d in (0.2, 0.5, 1.0, 2.0, 3.0)]
    assert all(x <= y * (1 + 1e-14) for x, y in zip(values, values[1:]))
