from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from fwexact.fps import FPS, fps_arith

series = st.lists(st.fractions(max_denominator=50), min_size=1, max_size=9).map(lambda cs: FPS(cs, 8))


def test_sqrt_of_one_plus_x2():
    s = fps_arith(FPS.x(8, 2), None, "sqrt_of_one_plus")
    assert s.coeffs[:7] == (1, 0, F(1, 2), 0, F(-1, 8), 0, F(1, 16))


def test_reciprocal_one_plus_gamma():
    gamma = FPS.x(6, 2).sqrt_of_one_plus()
    r = fps_arith(gamma + 1, None, "reciprocal")
    assert (r[0], r[2], r[4]) == (F(1, 2), F(-1, 8), F(1, 16))


def test_series_d_product():
    gamma = FPS.x(6, 2).sqrt_of_one_plus()
    inv = (gamma + 1).reciprocal()
    p = fps_arith(gamma.reciprocal(), inv * inv, "mul")
    assert (p[0], p[2], p[4]) == (F(1, 4), F(-1, 4), F(15, 64))
    # d_2/8, d_3/32, d_4/128
    assert (p[0], -p[2], p[4]) == (F(2, 8), F(8, 32), F(30, 128))


def test_preconditions():
    with pytest.raises(ZeroDivisionError):
        FPS([0, 1], 4).reciprocal()
    with pytest.raises(ValueError):
        FPS([1, 1], 4).sqrt_of_one_plus()
    with pytest.raises(ValueError):
        FPS([1, 1], 4).compose(FPS([1, 1], 4))
    with pytest.raises(ValueError):
        fps_arith(FPS([1], 2), None, "exp")


def test_truncation_never_extends():
    a, b = FPS([1, 2, 3], 2), FPS([1, 1, 1, 1, 1], 4)
    assert (a * b).order == 2
    assert (a + b).order == 2
    with pytest.raises(IndexError):
        (a * b)[3]
    with pytest.raises(ValueError):
        a.truncate(5)


def test_compose_geometric():
    geo = FPS([1] * 7, 6)  # 1 / (1 - u)
    c = geo.compose(FPS.x(6, 2))
    assert c.coeffs == (1, 0, 1, 0, 1, 0, 1)


def test_shift():
    s = FPS([0, 0, 3, 4], 3)
    assert s.shift_down(2) == FPS([3, 4], 1)
    assert s.shift_down(2).shift_up(2) == s
    with pytest.raises(ValueError):
        s.shift_down(3)


@given(series, series, series)
def test_mul_associative_commutative(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(series)
def test_reciprocal_inverts(a):
    if a[0] != 0:
        assert a * a.reciprocal() == FPS.constant(1, 8)


@given(series)
def test_sqrt_squares_back(a):
    u = a - a[0]
    s = u.sqrt_of_one_plus()
    assert s * s == u + 1
