import random

import pytest
from hypothesis import given

from holofilt.bernstein import WeightedRingSpec, bf_basis, op_level
from holofilt.invariants import invariant_bf_basis, named_group
from holofilt.simplicity import (bavula_constant, membership_certificate, min_constant_table,
                                 reduce_to_unit, reduction_membership)
from holofilt.weyl import WeylOperator
from strategies import nonzero_operators

SPEC = WeightedRingSpec(1)
SIGN1 = named_group("cyclic-sign(1)")


def W(text, n=1):
    return WeylOperator.from_text(text, n)


def test_reduction_examples():
    c = reduce_to_unit(W("x1"))
    assert c.moves == [("d", 0)] and c.constant == -1 and c.verified
    c = reduce_to_unit(W("5"))
    assert c.moves == [] and c.constant == 5
    c = reduce_to_unit(W("x1*d1"))
    assert c.moves == [("d", 0), ("x", 0)] and c.constant == -1
    with pytest.raises(ValueError):
        reduce_to_unit(WeylOperator.zero(1))


def test_membership_examples():
    cert = membership_certificate(W("x1"), 1, 1)
    assert cert.verified
    assert cert.combination() == WeylOperator.const(1, 1)
    pairs = {(a.to_text(), b.to_text()): c for c, a, b in cert.terms}
    assert pairs == {("d1", "1"): 1, ("1", "d1"): -1}
    cert = membership_certificate(WeylOperator.const(1, 1), 0, 3)
    assert cert.verified and len(cert.terms) == 1
    with pytest.raises(ValueError):
        membership_certificate(W("x1^2"), 1, 1)


def test_invariant_membership_example():
    cert = membership_certificate(W("x1^2"), 2, 1, group=SIGN1)
    assert cert is not None and cert.verified and cert.space == "invariant"


@pytest.mark.parametrize("n", [1, 2])
def test_reduction_gives_membership_with_standard_constant(n):
    spec = WeightedRingSpec(n)
    C = bavula_constant(spec)
    assert C == 1
    top = 8 if n == 1 else 4
    for i in range(1, top + 1):
        for k in bf_basis(spec, i).keys:
            delta = WeylOperator({k: 1}, n)
            cert = reduce_to_unit(delta, spec)
            assert len(cert.moves) <= op_level(delta, spec)
            assert reduction_membership(cert, spec, i, C)


def test_weighted_reduction_constant():
    spec = WeightedRingSpec(2, (1, 2), 3)
    C = bavula_constant(spec)
    assert C == 2
    for i in range(1, 6):
        for k in bf_basis(spec, i).keys:
            assert reduction_membership(reduce_to_unit(WeylOperator({k: 1}, 2), spec), spec, i, C)


@given(nonzero_operators(1, max_x=3, max_d=3, max_terms=3))
def test_reduction_replays_on_random_operators(delta):
    cert = reduce_to_unit(delta)
    assert cert.verified and cert.replay() == WeylOperator.const(cert.constant, 1)


def test_monotone_in_constant():
    for i in range(1, 4):
        for b in invariant_bf_basis(SIGN1, SPEC, i).basis:
            if op_level(b, SPEC) == 0:
                continue
            first = None
            for C in range(1, 4):
                got = membership_certificate(b, i, C, group=SIGN1) is not None
                if first is None and got:
                    first = C
                if first is not None:
                    assert got


def test_min_constant_tables():
    t = min_constant_table(SPEC, 4, 2)
    assert [t[i]["C"] for i in range(5)] == [0, 1, 1, 1, 1]
    t = min_constant_table(SPEC, 6, 5, group=SIGN1, random_samples=2, rng=random.Random(0))
    # the invariant level 1 holds only constants, so C_1 follows the level-0 convention
    assert [t[i]["C"] for i in range(7)] == [0, 0, 1, 1, 1, 1, 1]
    assert t[1]["deltas"] == 0
    assert all(not row["exceeded"] for row in t.values())


def test_nonhomogeneous_delta():
    delta = W("x1 + d1^2")
    cert = membership_certificate(delta, 2, 1)
    assert cert.verified
