import random
from math import factorial

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from holofilt.bernstein import (WeightedRingSpec, bf_basis, bf_dim, bf_dim_sequence, bf_member,
                                eps_and_order_domination, gr_commutativity_check,
                                multiplicativity_check, r_filtration_seq, random_element,
                                slope_witness)
from holofilt.filtration import dim_estimate
from holofilt.weyl import WeylOperator, commutator, weyl_mul

FIXTURES = [WeightedRingSpec(1), WeightedRingSpec(1, None, 3), WeightedRingSpec(1, (2,), 3),
            WeightedRingSpec(2), WeightedRingSpec(2, (1, 2), 3), WeightedRingSpec(1, (2,), "5/2"),
            WeightedRingSpec(2, None, "3/2")]


def names(spec, i):
    return sorted(WeylOperator({k: 1}, spec.n).to_text() for k in bf_basis(spec, i).keys)


def test_basis_examples():
    assert names(WeightedRingSpec(1), 1) == ["1", "d1", "x1"]
    for spec in FIXTURES:
        assert names(spec, 0) == ["1"]
    assert names(WeightedRingSpec(1, (2,), 3), 2) == ["1", "d1", "d1^2", "x1"]


def test_dim_examples():
    for i in range(12):
        assert bf_dim(WeightedRingSpec(1), i) == (i + 1) * (i + 2) // 2
    assert bf_dim(WeightedRingSpec(2), 1) == 5
    assert bf_dim(WeightedRingSpec(1), 0) == 1


def test_member_examples():
    xd = WeylOperator.from_text("x1*d1")
    assert bf_member(xd, WeightedRingSpec(1), 2)
    assert not bf_member(xd, WeightedRingSpec(1), 1)
    assert bf_member(WeylOperator.zero(1), WeightedRingSpec(1), 0)


def test_spec_validation():
    with pytest.raises(ValueError):
        WeightedRingSpec(1, (2,), 2)
    with pytest.raises(ValueError):
        WeightedRingSpec(2, (1,), 3)


@pytest.mark.parametrize("spec", FIXTURES, ids=lambda s: str(s.describe()))
def test_counting_matches_enumeration(spec):
    seq = bf_dim_sequence(spec, 40 if spec.n == 1 else 14).values
    for i, v in enumerate(seq):
        assert v == len(bf_basis(spec, i).keys)


def test_slope_witness_examples():
    r = slope_witness(WeightedRingSpec(1), WeightedRingSpec(1, None, 3))
    assert r["C"] == 3 and r["certified"]
    r = slope_witness(WeightedRingSpec(1), WeightedRingSpec(1))
    assert r["C"] == 1 and r["certified"]
    r = slope_witness(WeightedRingSpec(1, (2,), 3), WeightedRingSpec(1, (2,), 5))
    assert r["C"] == 5 and r["certified"]


def test_slopes_share_degree():
    for b in (2, 3, 4):
        e = dim_estimate(bf_dim_sequence(WeightedRingSpec(1, None, b), 60), 20)
        assert e.stable and e.degree == 2 and 0 < e.multiplicity < 1


def test_gr_commutativity_examples():
    spec = WeightedRingSpec(1)
    x, d = WeylOperator.x(0, 1), WeylOperator.d(0, 1)
    assert gr_commutativity_check(spec, 1, 1, 0, pairs=[(x, d)])["passed"]
    assert commutator(x, d) == WeylOperator.const(-1, 1)
    assert gr_commutativity_check(spec, 2, 2, 0, pairs=[(x * d, x * d)])["passed"]
    rep = gr_commutativity_check(WeightedRingSpec(2), 3, 3, 500, random.Random(5))
    assert rep["passed"] and rep["samples"] == 500


def test_gr_commutativity_needs_integral_slope():
    with pytest.raises(ValueError):
        gr_commutativity_check(WeightedRingSpec(1, (2,), "5/2"), 1, 1, 1)


def test_r_filtration_examples():
    assert r_filtration_seq(WeightedRingSpec(1), 8).values == [i + 1 for i in range(9)]
    assert r_filtration_seq(WeightedRingSpec(2), 8).values == [(i + 1) * (i + 2) // 2 for i in range(9)]
    assert r_filtration_seq(WeightedRingSpec(1, (2,), 3), 8).values == [i // 2 + 1 for i in range(9)]


def test_order_domination_examples():
    r = eps_and_order_domination(WeightedRingSpec(1))
    assert (r["epsilon"], r["C"], r["verified"]) == (1, 1, True)
    r = eps_and_order_domination(WeightedRingSpec(1, None, 3))
    assert (r["epsilon"], r["C"], r["verified"]) == (2, 1, True)
    r = eps_and_order_domination(WeightedRingSpec(1, (2,), "5/2"))
    assert (r["epsilon"], r["C"], r["verified"]) == (mpq(1, 2), 2, True)


@pytest.mark.parametrize("n", [1, 2])
def test_bernstein_algebra_growth(n):
    e = dim_estimate(bf_dim_sequence(WeightedRingSpec(n), 60), 20)
    assert e.stable and e.degree == 2 * n and e.multiplicity == mpq(1, factorial(2 * n))


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_multiplicativity(i, j, seed):
    for spec in (WeightedRingSpec(1), WeightedRingSpec(2, (1, 2), 3)):
        assert multiplicativity_check(spec, i, j, 3, random.Random(seed))


@given(st.integers(0, 10 ** 6))
def test_level_of_products_bounded(seed):
    rng = random.Random(seed)
    spec = WeightedRingSpec(1, (2,), 3)
    d, e = random_element(spec, 3, rng), random_element(spec, 4, rng)
    assert bf_member(weyl_mul(d, e), spec, 7)
    assert bf_member(commutator(d, e), spec, 6)
