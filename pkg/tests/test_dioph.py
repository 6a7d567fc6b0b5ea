import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gprand.dioph import (QuadraticSurd, continued_fraction, convergent_bounds_hold, nearest_int_dist,
                          ntheta_discrepancy_bound, sum_of_minima, to_surd, type_probe)
from gprand.errors import DomainError, PrecisionExhausted, RationalRelation
from gprand.exactreal import DyadicBall
from gprand.genpoly import parse

PHI = "1/2 + 1/2*sqrt(5)"


@pytest.mark.parametrize("x, d", [(2.3, 0.3), (-0.5, 0.5), (7, 0.0), (Fraction(5, 3), 1 / 3)])
def test_nearest_int_dist(x, d):
    assert nearest_int_dist(x) == pytest.approx(d)


@given(st.floats(-1e6, 1e6))
def test_nearest_int_dist_range(x):
    d = nearest_int_dist(x)
    assert 0 <= d <= 0.5
    assert d == pytest.approx(min(abs(x - math.floor(x)), abs(math.ceil(x) - x)), abs=1e-9)


def test_cf_examples():
    assert continued_fraction("sqrt(2)", 6).terms() == (1, 2, 2, 2, 2, 2)
    assert continued_fraction(PHI, 6).terms() == (1,) * 6
    cf = continued_fraction(Fraction(355, 113), 10)
    assert cf.terms() == (3, 7, 16) and cf.exact_input


def test_cf_surd_against_mpmath():
    for text in ("sqrt(7)", "3/2*sqrt(13) + 1/5", "sqrt(8)"):
        cf = continued_fraction(text, 25).terms()
        with mpmath.workdps(200):
            x = {"sqrt(7)": mpmath.sqrt(7), "3/2*sqrt(13) + 1/5": 1.5 * mpmath.sqrt(13) + mpmath.mpf(1) / 5,
                 "sqrt(8)": mpmath.sqrt(8)}[text]
            ref = []
            for _ in range(25):
                a = int(mpmath.floor(x))
                ref.append(a)
                x = 1 / (x - a)
        assert cf == tuple(ref)


def test_cf_ball_input():
    cf = continued_fraction("pi", 12)
    assert cf.terms()[:5] == (3, 7, 15, 1, 292) and not cf.exact_input
    fixed = DyadicBall.from_fraction(Fraction(314159, 100000), 40)
    with pytest.raises(PrecisionExhausted):
        continued_fraction(DyadicBall(fixed.mantissa, fixed.scale, 1 << 20), 30)


def test_surd_normalisation():
    assert to_surd(parse("sqrt(8)")) == QuadraticSurd(0, 2, 2, 1)
    assert to_surd(parse("sqrt(2)*sqrt(2)")) == 2
    assert to_surd(parse("sqrt(2)*sqrt(3)")) is None
    assert to_surd(parse("pi")) is None


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6))
def test_rational_cf_reconstructs(q):
    cf = continued_fraction(q, 200)
    p, d = cf.convergents()[-1]
    assert Fraction(p, d) == q
    assert all(a >= 1 for a in cf.partial_quotients)


@given(st.integers(2, 500).filter(lambda k: math.isqrt(k) ** 2 != k), st.integers(-20, 20), st.integers(1, 20))
def test_surd_convergent_inequality(k, p, r):
    x = QuadraticSurd.make(p, 1, k, r)
    cf = continued_fraction(x, 30)
    assert all(a >= 1 for a in cf.partial_quotients)
    assert all(convergent_bounds_hold(x, cf))


def test_type_probe_golden_ratio():
    r = type_probe([PHI], 10**4)
    assert 0.9 <= r.t_hat <= 1.1
    assert r.witness == (6765,)
    assert 0 < r.c_hat <= nearest_int_dist((1 + 5 ** 0.5) / 2) + 1e-12  # n = 1 is in the box


def test_type_probe_relation():
    with pytest.raises(RationalRelation) as info:
        type_probe([Fraction(1, 3)], 10)
    assert info.value.witness == (3,)
    with pytest.raises(RationalRelation):
        type_probe(["sqrt(2)", "sqrt(8)"], 5)


def test_type_probe_pair():
    r = type_probe(["sqrt(2)", "sqrt(3)"], 40)
    assert r.t_hat > 0 and any(r.witness) and math.isfinite(r.t_hat)


def test_t_sup_monotone_in_q():
    sup = [type_probe([PHI], q).t_sup for q in (2, 10, 100, 1000)]
    assert sup == sorted(sup)
    sup = [type_probe(["sqrt(2)", "sqrt(3)"], q).t_sup for q in (3, 6, 12, 24)]
    assert sup == sorted(sup)


def test_ntheta_bound():
    grid = [ntheta_discrepancy_bound(t, L, 31).c_ratio for t in ("sqrt(2)", PHI, "sqrt(7)")
            for L in (100, 1000, 10000)]
    assert max(grid) < 1.0
    full = [ntheta_discrepancy_bound(PHI, L, L).c_ratio for L in (1000, 2000, 4000)]
    assert max(full) / min(full) < 2
    with pytest.raises(RationalRelation):
        ntheta_discrepancy_bound(Fraction(1, 2), 100, 10)
    with pytest.raises(DomainError):
        ntheta_discrepancy_bound("sqrt(2)", 0, 3)


def test_sum_of_minima_small_case():
    r = sum_of_minima(PHI, 10, 10)
    phi = (1 + 5 ** 0.5) / 2
    want = sum(min(10, 1 / nearest_int_dist(l * phi)) for l in range(1, 11))
    assert r.lhs == pytest.approx(want, rel=1e-12)


def test_sum_of_minima_far_from_integers():
    r = sum_of_minima("sqrt(2)", 50, 10**4)
    s2 = 2 ** 0.5
    assert r.lhs == pytest.approx(sum(1 / nearest_int_dist(l * s2) for l in range(1, 51)), rel=1e-12)


def test_sum_of_minima_doubling():
    ratios = [sum_of_minima("sqrt(2)", L, 1000).c_ratio for L in (1000, 2000, 4000)]
    assert all(0.5 <= b / a <= 2 for a, b in zip(ratios, ratios[1:]))


def test_sum_of_minima_degenerate_terms():
    r = sum_of_minima(Fraction(1, 2), 4, 100)  # even multiples are integers and count N each
    assert r.lhs == 2 + 100 + 2 + 100
    with pytest.raises(RationalRelation):
        sum_of_minima(3, 5, 10)
