import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from holofilt.bernstein import WeightedRingSpec, bf_dim
from holofilt.coeff import Poly
from holofilt.dmod import LocalizedElement
from holofilt.invariants import (GroupTooLarge, diff_signature_estimate, differential_power,
                                 group_closure, group_from_json, invariant_bf_basis,
                                 is_invariant_op, named_group, negative_degree_order1,
                                 pseudoreflections, reynolds_op, reynolds_poly, summand_check,
                                 trace_dimension, trivial_group)
from holofilt.weyl import WeylOperator
from strategies import operators

SIGN1 = named_group("cyclic-sign(1)")
SPEC1 = WeightedRingSpec(1)
GROUPS = {"trivial(1)": (named_group("trivial(1)"), SPEC1), "cyclic-sign(1)": (SIGN1, SPEC1),
          "cyclic-sign(2)": (named_group("cyclic-sign(2)"), WeightedRingSpec(2)),
          "perm(2)": (named_group("perm(2)"), WeightedRingSpec(2)),
          "diag-signs(1,0)": (named_group("diag-signs(1,0)"), WeightedRingSpec(2))}


def test_closure_examples():
    assert group_closure([[[-1, 0], [0, -1]]]).order == 2
    assert group_closure([[[0, 1], [1, 0]]]).order == 2
    with pytest.raises(GroupTooLarge):
        group_closure([[[2, 0], [0, 1]]], 100)
    assert group_from_json("[[[0, -1], [1, 0]]]").order == 4
    assert named_group("perm(3)").order == 6


def test_pseudoreflection_examples():
    assert pseudoreflections(named_group("cyclic-sign(2)")) == []
    swap = group_closure([[[0, 1], [1, 0]]])
    assert len(pseudoreflections(swap)) == 1
    assert pseudoreflections(trivial_group(2)) == []


def test_reynolds_examples():
    x = Poly.from_text("x1")
    assert not reynolds_poly(SIGN1, x)
    assert reynolds_poly(SIGN1, x * x) == x * x
    f = Poly.from_text("x1^3 + 2")
    assert reynolds_poly(trivial_group(1), f) == f


def test_invariant_basis_examples():
    sp = invariant_bf_basis(SIGN1, SPEC1, 2)
    assert sorted(b.to_text() for b in sp.basis) == ["1", "d1^2", "x1*d1", "x1^2"]
    assert [b.to_text() for b in invariant_bf_basis(SIGN1, SPEC1, 1).basis] == ["1"]
    assert invariant_bf_basis(trivial_group(1), SPEC1, 3).dim == bf_dim(SPEC1, 3)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_invariant_dimension_matches_trace_formula(name):
    G, spec = GROUPS[name]
    for i in range(5 if spec.n == 2 else 9):
        sp = invariant_bf_basis(G, spec, i)
        assert sp.dim == trace_dimension(G, spec, i)
        assert all(is_invariant_op(G, b) for b in sp.basis)


def test_differential_power_examples():
    for i in range(1, 13):
        r = differential_power(trivial_group(1), SPEC1, i)
        assert r["dim_quotient"] == i
        r = differential_power(SIGN1, SPEC1, i)
        assert r["dim_quotient"] == (i + 1) // 2
        assert r["nondegenerate"]
    for name in GROUPS:
        G, spec = GROUPS[name]
        assert differential_power(G, spec, 1)["dim_quotient"] == 1


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_pairing_nondegenerate_and_positive(name):
    G, spec = GROUPS[name]
    top = 12 if spec.n == 1 else 6
    for i in range(1, top + 1):
        r = differential_power(G, spec, i)
        assert r["nondegenerate"] and r["pairing_rank"] == r["dim_quotient"] > 0


def test_signature_examples():
    r = diff_signature_estimate(trivial_group(1), SPEC1, 10)
    assert set(r["normalized"]) == {"1"}
    r = diff_signature_estimate(SIGN1, SPEC1, 16, window=8)
    assert r["normalized"][1::2] == ["1/2"] * 8
    assert r["fitted_limsup"] == "1/2"
    r = diff_signature_estimate(trivial_group(2), WeightedRingSpec(2), 8)
    vals = [mpq(v) for v in r["normalized"]]
    assert all(a > b > 1 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == mpq(9, 8)


def test_negative_degree_examples():
    assert negative_degree_order1(SIGN1) == []
    assert [o.to_text() for o in negative_degree_order1(trivial_group(1))] == ["d1"]
    assert [o.to_text() for o in negative_degree_order1(named_group("diag-signs(1,0)"))] == ["d2"]
    assert negative_degree_order1(named_group("cyclic-sign(2)")) == []


def test_summand_examples():
    d = WeylOperator.d(0, 1)
    x2 = Poly.from_text("x1^2")
    assert not reynolds_op(SIGN1, d)
    assert summand_check(SIGN1, SPEC1, [x2], ops=[d])["passed"]
    assert summand_check(trivial_group(1), SPEC1, [x2], samples=5)["passed"]
    v = LocalizedElement(x2.one(), 1, x2)
    assert summand_check(SIGN1, SPEC1, [v], f=x2, samples=5)["passed"]


@given(operators(2, max_x=2, max_d=2), st.sampled_from(["cyclic-sign(2)", "perm(2)", "diag-signs(0,1)"]))
def test_reynolds_idempotent_and_fixed(delta, name):
    G = named_group(name)
    r = reynolds_op(G, delta)
    assert reynolds_op(G, r) == r
    assert is_invariant_op(G, r)


@given(st.integers(0, 10 ** 6))
def test_summand_property_random(seed):
    G = named_group("cyclic-sign(2)")
    probes = [Poly.from_text("x1^2 + x1*x2"), Poly.from_text("x2^4 - 3")]
    assert summand_check(G, WeightedRingSpec(2), probes, samples=3, rng=random.Random(seed))["passed"]
