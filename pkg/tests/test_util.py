import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superdirichlet import QUADRATURE_CAP, SignaledInfinity
from superdirichlet._util import (capped, fmt, fmt_point, is_power_of_two,
                                  parse_point, wrap_angle)


def test_signaled_infinity_is_inf():
    s = SignaledInfinity(3.5)
    assert math.isinf(s)
    assert s > 1e300
    assert s.partial == 3.5
    assert isinstance(s, float)


def test_capped_passes_finite_values():
    assert capped(2.0) == 2.0
    assert not isinstance(capped(2.0), SignaledInfinity)


def test_capped_traps_cap_and_inf():
    s = capped(QUADRATURE_CAP * 10)
    assert isinstance(s, SignaledInfinity)
    assert s.partial == QUADRATURE_CAP
    s = capped(math.inf)
    assert isinstance(s, SignaledInfinity)


def test_fmt_fifteen_digits():
    assert fmt(2 * math.log(2)) == "1.38629436111989"
    assert fmt(2.0) == "2"
    assert fmt(math.inf) == "inf"
    assert fmt(-math.inf) == "-inf"
    assert fmt(float("nan")) == "nan"
    assert fmt(True) == "True"


def test_fmt_point_forms():
    assert fmt_point(0.5 + 0.25j) == "0.5+0.25i"
    assert fmt_point(1 - 2j) == "1-2i"
    assert fmt_point(0j) == "0+0i"


@pytest.mark.parametrize("text, value", [
    ("0+0i", 0j),
    ("0.5", 0.5 + 0j),
    ("1-2i", 1 - 2j),
    ("0.25i", 0.25j),
])
def test_parse_point(text, value):
    assert parse_point(text) == value


@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False,
                          allow_infinity=False))
def test_point_round_trip(z):
    back = parse_point(fmt_point(z))
    assert abs(back - z) <= 1e-9 * max(1.0, abs(z))


@given(st.floats(min_value=-50.0, max_value=50.0))
def test_wrap_angle_range_and_phase(theta):
    w = float(wrap_angle(theta))
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-12)
    assert math.isclose(math.sin(w), math.sin(theta), abs_tol=1e-12)


def test_is_power_of_two():
    assert all(is_power_of_two(2**k) for k in range(0, 16))
    assert not any(is_power_of_two(m) for m in (0, -4, 3, 6, 12, 1000))


def test_wrap_angle_vectorized():
    out = wrap_angle(np.array([0.0, np.pi, -np.pi, 3 * np.pi]))
    assert out.shape == (4,)
    assert out[1] == pytest.approx(np.pi)
    assert out[2] == pytest.approx(np.pi)
