import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from holofilt.coeff import Poly
from holofilt.dmod import LocalizedElement
from holofilt.weyl import (WeylOperator, apply, bracket_chain, bracket_sequence, commutator,
                           group_act_op, group_act_poly, mat_inverse, mat_mul,
                           verify_commute_identity, weyl_mul)
from strategies import nonzero_polys, operators, polys

x, d = WeylOperator.x(0, 1), WeylOperator.d(0, 1)


def W(text, n=1):
    return WeylOperator.from_text(text, n)


def P(text, n=1):
    return Poly.from_text(text, [f"x{k + 1}" for k in range(n)])


def test_mul_examples():
    assert weyl_mul(d, x) == W("x1*d1 + 1")
    assert weyl_mul(x * d, x * d) == W("x1^2*d1^2 + x1*d1")
    assert weyl_mul(x, x) == W("x1^2")


def test_apply_examples():
    assert apply(d, P("x1^2")) == P("2*x1")
    assert apply(x * d, P("x1^3")) == P("3*x1^3")
    f = P("x1^2 - 7")
    assert apply(WeylOperator.const(1, 1), f) == f


def test_commutator_and_chain_examples():
    assert commutator(d, x) == WeylOperator.const(1, 1)
    assert commutator(x, d) == WeylOperator.const(-1, 1)
    assert commutator(d * d, x) == W("2*d1")
    assert bracket_chain(d * d, P("x1"), 1) == W("2*d1")
    assert bracket_chain(d * d, P("x1"), 2) == W("2")
    assert bracket_chain(d * d, P("x1"), 0) == d * d


def test_commute_identity_examples():
    assert verify_commute_identity(d, P("x1"), 2)
    assert verify_commute_identity(d * d, P("x1"), 3)
    f = P("x1")
    assert verify_commute_identity(d, f, -1, [LocalizedElement(f.one(), 1, f)])


def test_group_action_examples():
    assert group_act_op([[-1]], d) == W("-d1")
    delta = W("x1^2*d1 + 3")
    assert group_act_op([[1]], delta) == delta
    assert group_act_op([[0, 1], [1, 0]], WeylOperator.d(0, 2)) == WeylOperator.d(1, 2)
    with pytest.raises(ValueError):
        mat_inverse([[1, 2], [2, 4]])


def test_text_and_json_roundtrip():
    a = W("3/2*x1^2*d2 - x2*d1^3 + 5", 2)
    assert WeylOperator.from_text(a.to_text(), 2) == a
    assert WeylOperator.from_json(a.to_json(), 2) == a
    s = W("s*x1*d1 + s^2", 1)
    assert s.sparam and WeylOperator.from_text(s.to_text(), 1) == s


@given(operators(), operators(), operators())
def test_associativity(a, b, c):
    assert weyl_mul(a, weyl_mul(b, c)) == weyl_mul(weyl_mul(a, b), c)


@given(operators(2, max_x=2, max_d=2, max_terms=3), operators(2, max_x=2, max_d=2, max_terms=3),
       operators(2, max_x=2, max_d=2, max_terms=3))
def test_associativity_two_variables(a, b, c):
    assert weyl_mul(a, weyl_mul(b, c)) == weyl_mul(weyl_mul(a, b), c)


@given(operators(), operators(), polys(1, max_deg=5))
def test_apply_respects_products(a, b, f):
    assert apply(weyl_mul(a, b), f) == apply(a, apply(b, f))


@given(operators(max_d=3), polys(1, max_deg=3), st.integers(0, 6))
def test_commute_identity_nonnegative(delta, f, j):
    assert verify_commute_identity(delta, f, j)


@given(operators(max_d=3, max_terms=3), nonzero_polys(1, max_deg=3, max_terms=3), st.integers(-4, -1))
def test_commute_identity_negative(delta, f, j):
    probes = [LocalizedElement(f.one(), 0, f), LocalizedElement(P("x1 + 2"), 2, f)]
    assert verify_commute_identity(delta, f, j, probes)


@given(operators(max_d=3), st.lists(polys(1, max_deg=2), min_size=4, max_size=4))
def test_iterated_commutator_vanishes(delta, rs):
    m = max(delta.order(), 0)
    cur = delta
    for r in rs[:m + 1]:
        cur = commutator(cur, r)
    assert not cur
    assert len(bracket_sequence(delta, P("x1^2 + 1"))) <= m + 1


mats = st.sampled_from([[[0, 1], [1, 0]], [[-1, 0], [0, 1]], [[1, 1], [0, 1]], [[2, 1], [1, 1]]])


@given(mats, mats, operators(2, max_x=2, max_d=2, max_terms=3), operators(2, max_x=2, max_d=2, max_terms=3))
def test_group_action_is_homomorphic(g, h, a, b):
    assert group_act_op(g, weyl_mul(a, b)) == weyl_mul(group_act_op(g, a), group_act_op(g, b))
    assert group_act_op(mat_mul(g, h), a) == group_act_op(g, group_act_op(h, a))


@given(mats, operators(2, max_x=2, max_d=2, max_terms=3), polys(2, max_deg=2))
def test_group_action_compatible_with_apply(g, a, f):
    assert group_act_poly(g, apply(a, f)) == apply(group_act_op(g, a), group_act_poly(g, f))


def test_specialize_s_parametric():
    a = W("s*d1 + s^2*x1")
    assert a.specialize(3) == W("3*d1 + 9*x1")
    rng = random.Random(1)
    t = rng.randint(-5, 5)
    assert a.specialize(t) == W(f"{t}*d1 + {t * t}*x1")
