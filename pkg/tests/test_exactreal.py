import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gprand.errors import InsufficientPrecision, StraddlesInteger
from gprand.exactreal import (DyadicBall, add, floor_certified, frac_certified, mul, pi_ball, precision_ladder,
                              round_to, sqrt_int, to_float64)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


def test_add_exact_dyadics():
    assert add(DyadicBall.exact(1.5), DyadicBall.exact(2.25)) == DyadicBall.exact(3.75)


def test_add_zero_is_identity():
    x = DyadicBall(12345, 20, 3)
    y = add(x, DyadicBall(0))
    assert (y.lower(), y.upper()) == (x.lower(), x.upper())


def test_radii_add():
    one = DyadicBall(1 << 10, 10, 1)
    s = add(one, one)
    assert s.center() == 2 and s.radius == 2 and s.scale == 10


def test_mul_examples():
    assert mul(DyadicBall.exact(1.5), DyadicBall.exact(2)).center() == 3
    x = DyadicBall(777, 9, 2)
    assert mul(x, DyadicBall(1)) == x
    z = mul(DyadicBall(2 << 8, 8, 1), DyadicBall(0))
    assert z.center() == 0 and z.is_exact


@pytest.mark.parametrize("value, fl", [(2.75, 2), (-0.25, -1), (7, 7)])
def test_floor(value, fl):
    assert floor_certified(DyadicBall.exact(value)) == fl


def test_floor_straddle():
    b = DyadicBall.from_fraction(Fraction(3), 10)
    wide = DyadicBall(b.mantissa, 10, 103)  # about 3 +- 0.1
    with pytest.raises(StraddlesInteger):
        floor_certified(wide)


@pytest.mark.parametrize("value, fr", [(-0.25, Fraction(3, 4)), (3.5, Fraction(1, 2)), (7, 0)])
def test_frac(value, fr):
    assert frac_certified(DyadicBall.exact(value)).center() == fr


def test_to_float64():
    assert to_float64(DyadicBall.exact(0.5)) == 0.5
    assert to_float64(DyadicBall.from_fraction(Fraction(1, 3), 128)) == 1 / 3
    with pytest.raises(InsufficientPrecision):
        to_float64(DyadicBall(10, 7, 13))  # radius ~ 0.1


def _mp_fraction(x) -> Fraction:
    m, e = x.man_exp
    return Fraction(m) * Fraction(2) ** e


def test_constants_against_mpmath():
    with mpmath.workprec(600):
        for k in (2, 3, 5, 7, 1000003):
            assert sqrt_int(k, 512).contains(_mp_fraction(mpmath.sqrt(k)))
        assert pi_ball(512).contains(_mp_fraction(+mpmath.pi))
    assert sqrt_int(9, 64).center() == 3


def test_ladder_doubles_to_cap():
    assert list(precision_ladder(256, 2048)) == [256, 512, 1024, 2048]


def _ball(q: Fraction, slack: int) -> DyadicBall:
    b = DyadicBall.from_fraction(q, 64)
    return DyadicBall(b.mantissa, b.scale, b.radius + slack)


@given(fractions, fractions, st.integers(0, 50), st.integers(0, 50))
def test_arithmetic_encloses(x, y, r1, r2):
    a, b = _ball(x, r1), _ball(y, r2)
    assert a.contains(x) and b.contains(y)
    assert add(a, b).contains(x + y)
    assert (a - b).contains(x - y)
    assert mul(a, b).contains(x * y)
    assert mul(a, b, 40).contains(x * y)


@given(fractions, st.integers(1, 200))
def test_rounding_never_drops_error(x, prec):
    b = _ball(x, 5)
    rb = round_to(b, prec)
    assert rb.lower() <= b.lower() and rb.upper() >= b.upper()


@given(fractions)
def test_floor_matches_exact_floor(x):
    b = _ball(x, 1)
    try:
        fl = floor_certified(b)
    except StraddlesInteger:
        assert math.floor(b.lower()) != math.floor(b.upper())
    else:
        assert fl == math.floor(x)
        f = frac_certified(b)
        assert 0 <= f.lower() and f.upper() < 1
