import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gprand.errors import OutOfDomain, OutOfRange, TooLarge
from gprand.measures import (discrepancy, discrepancy_naive, progression_discrepancy_chain, progression_sum,
                             well_distribution, well_distribution_naive)
from gprand.sequence import BinarySequence

THEOREM = "sqrt(5)*floor(sqrt(3)*floor(sqrt(2)*x^2))"
signs = st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=200)
unit = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)


def seq(vals):
    return BinarySequence.from_values(vals)


def test_progression_sum_examples():
    e = seq([1, -1, 1])
    assert progression_sum(e, 2, 2, -1) == 2
    assert progression_sum(e, 3, 1, 0) == 1
    for k in range(3):
        assert progression_sum(e, 1, 1, k) == e[k + 1]
    with pytest.raises(OutOfRange):
        progression_sum(e, 2, 2, 0)


def test_well_distribution_examples():
    r = well_distribution(seq([1] * 5))
    assert r.w == 5 and (r.witness.a, r.witness.b, r.witness.m) == (1, 0, 5)
    r = well_distribution(seq([1, -1, 1]))
    assert r.w == 2 and (r.witness.a, r.witness.b, r.witness.m) == (2, -1, 2)
    assert well_distribution(seq([1, -1] * 3)).w == 3
    assert well_distribution_naive(seq([-1])).w == 1


def test_a_max_cap_flag():
    e = seq([1, -1] * 10)
    capped = well_distribution(e, a_max=1)
    assert capped.w == 1 and not capped.exhaustive
    assert well_distribution(e).exhaustive


def test_naive_cap():
    with pytest.raises(TooLarge):
        well_distribution_naive(np.ones(5000, dtype=np.int8))


@given(signs)
def test_fast_equals_naive(vals):
    fast, slow = well_distribution(seq(vals)), well_distribution_naive(seq(vals))
    assert fast == slow


@given(signs)
def test_witness_is_consistent(vals):
    e = seq(vals)
    r = well_distribution(e)
    w = r.witness
    assert r.w == abs(w.u) <= len(vals)
    assert progression_sum(e, w.m, w.a, w.b) == w.u


def test_discrepancy_examples():
    assert discrepancy([0.5]).d == 1.0
    assert discrepancy([0.25, 0.75]).d == pytest.approx(0.5)
    for n in (1, 2, 7, 100):
        grid = (2 * np.arange(1, n + 1) - 1) / (2 * n)
        assert discrepancy(grid).d == pytest.approx(1 / n, abs=1e-15)
        assert discrepancy_naive(grid).d == pytest.approx(1 / n, abs=1e-15)


def test_discrepancy_domain():
    with pytest.raises(OutOfDomain):
        discrepancy([0.2, 1.0])
    with pytest.raises(OutOfDomain):
        discrepancy_naive([-0.1])


@given(st.lists(unit, min_size=1, max_size=120))
def test_discrepancy_matches_oracle(pts):
    d = discrepancy(pts).d
    assert abs(d - discrepancy_naive(pts).d) <= 1e-12
    assert 1 / len(pts) - 1e-15 <= d <= 1.0


def test_chain_examples():
    r = progression_discrepancy_chain("x*1/2", 4, 1, 0)
    assert r.lhs_u == 0 and r.rhs >= 0 and r.holds
    assert progression_discrepancy_chain(THEOREM, 64, 1, 0).holds
    assert progression_discrepancy_chain(THEOREM, 65, 2, 1).holds
