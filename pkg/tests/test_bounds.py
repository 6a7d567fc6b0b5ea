import warnings
from fractions import Fraction

import numpy as np
import pytest
from exponent_oracle import evaluate, key_lemma
from hypothesis import given
from hypothesis import strategies as st

from gprand.bounds import (bound_scan, cap_warning, key_lemma_exponents, linear_sum_check, loglog_slope,
                           prop1_exponents, prop1_precondition, prop2_exponents, prop3_exponents,
                           proof_parameters, scan_csv, theorem_eta, threshold_exponent, weyl_check)
from gprand.errors import DomainError, NotTheoremShape

DS = range(2, 9)
TS = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5)]


def F(x):
    return Fraction(int(x.p), int(x.q))


def test_spot_values():
    assert (prop1_exponents(2, 1).a_exp, prop1_exponents(2, 1).n_exp) == (Fraction(2, 5), Fraction(1, 7))
    assert prop1_exponents(2, 1).precond_a_exp == Fraction(1, 2)
    assert (prop1_exponents(3, 1).a_exp, prop1_exponents(3, 1).n_exp) == (Fraction(1, 3), Fraction(3, 26))
    assert (prop2_exponents(2, 1).a_exp, prop2_exponents(2, 1).n_exp) == (Fraction(4, 11), Fraction(1, 15))
    assert (prop2_exponents(2, 2).a_exp, prop2_exponents(2, 2).n_exp) == (Fraction(8, 19), Fraction(1, 26))
    assert (prop3_exponents(2, 1).a_exp, prop3_exponents(2, 1).n_exp) == (Fraction(3, 11), Fraction(4, 357))
    assert threshold_exponent(2, 1) == Fraction(1, 1764)
    assert key_lemma_exponents(2, 1, 1) == (Fraction(1, 2), Fraction(3, 2))
    assert key_lemma_exponents(2, 1, 3) == (Fraction(1, 4), Fraction(7, 4))


@pytest.mark.parametrize("d", DS)
@pytest.mark.parametrize("t", TS)
def test_against_sympy(d, t):
    p1, p2, p3 = prop1_exponents(d, t), prop2_exponents(d, t), prop3_exponents(d, t)
    assert p1.a_exp == F(evaluate("prop1_a", d, t)) and p1.n_exp == F(evaluate("prop1_n", d, t))
    assert p1.precond_a_exp == F(evaluate("prop1_cap", d, t))
    assert p2.a_exp == F(evaluate("prop2_a", d, t)) and p2.n_exp == F(evaluate("prop2_n", d, t))
    assert p3.a_exp == F(evaluate("prop3_a", d, t)) and p3.n_exp == F(evaluate("prop3_n", d, t))
    assert p3.threshold_exp == F(evaluate("threshold", d, t))
    for s in (1, 2, 3):
        a, n = key_lemma(d, t, s)
        assert key_lemma_exponents(d, t, s) == (F(a), F(n))


@pytest.mark.parametrize("d", DS)
@pytest.mark.parametrize("t", TS)
def test_grid_invariants(d, t):
    for es in (prop1_exponents(d, t), prop2_exponents(d, t), prop3_exponents(d, t)):
        assert es.a_exp > 0 and 0 < es.n_exp < 1
    assert prop2_exponents(d, t).n_exp < prop1_exponents(d, t).n_exp
    eta = theorem_eta(d, t)
    assert 0 < eta.eta_candidate <= eta.threshold_exp


@pytest.mark.parametrize("t", TS)
def test_eta_decreasing_in_d(t):
    etas = [theorem_eta(d, t).eta_candidate for d in DS]
    assert all(a > b for a, b in zip(etas, etas[1:]))


def test_monotone_limits():
    firsts = [key_lemma_exponents(2, 1, s)[0] for s in range(1, 20)]
    assert all(a > b for a, b in zip(firsts, firsts[1:]))
    ns = [prop1_exponents(3, t).n_exp for t in (1, 2, 5, 10, 100, 1000)]
    assert all(a > b for a, b in zip(ns, ns[1:])) and ns[-1] < Fraction(1, 1000)


@pytest.mark.parametrize("bad", [(1, 1), (2, 0), (2, -1), (2.5, 1)])
def test_domain(bad):
    with pytest.raises(DomainError):
        prop1_exponents(*bad)


def test_prop1_precondition():
    # d = 2, t = 1: cap exponent 1/2, so a <= sqrt(N)
    assert prop1_precondition(2, 1, 10, 100)
    assert not prop1_precondition(2, 1, 11, 100)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert cap_warning(2, 1, 11, 100)
    assert caught
    assert proof_parameters(2, 1, 100, a=11)["prop1"]["precondition"] is False


def test_proof_parameters():
    rep = proof_parameters(2, 1, 10**6, a=1, h=1)
    assert rep["keyLemma"]["J"] == pytest.approx(1000.0)  # d = 2: L = N, J = L^(1/2)
    assert rep["prop2"]["theta"] == "1/15" and rep["prop2"]["sigma"] == "4/11"
    assert rep["prop3"]["theta1"] == "4/357" and rep["prop3"]["sigma"] == "3/11"


def test_weyl_examples():
    r = weyl_check(np.ones(16), 1, 4)
    assert r.lhs == pytest.approx(1 / 64) and r.rhs >= 1 / 32 and r.holds
    m = np.arange(256)
    assert weyl_check(np.exp(2j * np.pi * m * 2 ** 0.5), 2, 16).holds
    with pytest.raises(DomainError):
        weyl_check(np.ones(4), 1, 5)
    with pytest.raises(DomainError):
        weyl_check(2 * np.ones(4), 1, 2)


@given(st.integers(1, 96), st.integers(1, 3), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_weyl_property(n, k, qfrac, seed):
    rng = np.random.default_rng(seed)
    q = 1 + qfrac * (n - 1)
    lam = np.exp(2j * np.pi * rng.random(n)) * rng.uniform(0, 1, n) ** 0.1
    assert weyl_check(lam, k, q).holds


def test_linear_sum_examples():
    r = linear_sum_check(Fraction(1, 2), 0, 2)
    assert (r.lhs, r.rhs) == (0.0, 1.0)
    assert linear_sum_check(Fraction(1, 4), 0, 4).lhs == 0.0
    assert linear_sum_check(3, 0, 5).lhs == 5.0


@given(st.floats(-10, 10), st.integers(-10**4, 10**4), st.integers(1, 10**4))
def test_linear_sum_property(alpha, n1, length):
    r = linear_sum_check(alpha, n1, n1 + length)
    assert r.holds
    if length <= 200:
        direct = abs(np.exp(2j * np.pi * alpha * np.arange(n1 + 1, n1 + length + 1)).sum())
        assert abs(direct - r.lhs) < 1e-6 * length


def test_scan_degenerate_and_csv():
    rows = bound_scan("2*floor(x)", [16, 32, 64], d=2)
    assert [r.w for r in rows] == [16, 32, 64]
    assert rows[-1].slope_so_far == pytest.approx(1.0)
    text = scan_csv(rows)
    assert text.splitlines()[0] == "N,W,slopeSoFar,D,prop2Bound,prop3Bound"
    with pytest.raises(NotTheoremShape):
        bound_scan("2*floor(x)", [16, 32])


def test_scan_theorem_small():
    rows = bound_scan("sqrt(5)*floor(sqrt(3)*floor(sqrt(2)*x^2))", [256, 512, 1024, 2048])
    assert all(r.w <= r.n for r in rows)
    assert rows[0].d > rows[-1].d
    assert loglog_slope([r.n for r in rows], [r.w for r in rows]) == rows[-1].slope_so_far
