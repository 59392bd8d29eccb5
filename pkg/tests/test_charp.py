
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holofilt.charp import (DividedPowerOperator, MonomialIdeal, Presentation,
                            agrees_with_brute_force, containment_checks, dp_apply, dp_mul,
                            f_regularity_scan, ffrt_class_sets, frobenius_power, level_by_beta,
                            level_of, lucas_binom, named_ring, splitting_ideal, veronese_ffrt)
from holofilt.coeff import Poly

D = DividedPowerOperator


def mono(p, q):
    return Poly({(q,): 1}, 1, p)


def test_divided_power_examples():
    for p in (2, 3, 5):
        assert dp_apply(D.monomial([0], [p], p), mono(p, p)) == Poly.const(1, 1, p)
        assert not dp_apply(D.monomial([0], [1], p), mono(p, p))
    got = dp_mul(D.monomial([0], [1], 2), D.monomial([1], [0], 2))
    assert got == D({(1, 1): 1, (0, 0): 1}, 1, 2)


@given(st.integers(0, 200), st.integers(0, 200), st.sampled_from([2, 3, 5, 7]))
def test_lucas_matches_exact(m, k, p):
    from math import comb
    assert lucas_binom(m, k, p) == (comb(m, k) % p if k <= m else 0)


def dp_ops(n, p):
    keys = st.tuples(*[st.integers(0, 4)] * (2 * n))
    return st.dictionaries(keys, st.integers(0, p - 1), max_size=3).map(lambda t: D(t, n, p))


@given(dp_ops(1, 2), dp_ops(1, 2), dp_ops(1, 2))
def test_dp_associative_p2(a, b, c):
    assert dp_mul(a, dp_mul(b, c)) == dp_mul(dp_mul(a, b), c)


@given(dp_ops(2, 3), dp_ops(2, 3), dp_ops(2, 3))
def test_dp_associative_p3(a, b, c):
    assert dp_mul(a, dp_mul(b, c)) == dp_mul(dp_mul(a, b), c)


@given(dp_ops(2, 3), dp_ops(2, 3), st.dictionaries(st.tuples(st.integers(0, 9), st.integers(0, 9)),
                                                   st.integers(0, 2), max_size=4))
def test_dp_apply_respects_mul(a, b, terms):
    f = Poly(terms, 2, 3)
    assert dp_apply(dp_mul(a, b), f) == dp_apply(a, dp_apply(b, f))


def test_level_examples():
    assert level_of(D.monomial([0], [1], 2)) == 1
    assert level_of(D.monomial([0], [2], 2)) == 2
    assert level_of(D.monomial([1], [0], 2)) == 0
    op = D.from_text("x1*D1^(4) + d1", 1, 3)
    assert level_of(op) == level_by_beta(op) == 2


@pytest.mark.parametrize("p", [2, 3])
def test_level_containments(p):
    rep = containment_checks(p, 8, 2, 2)
    assert rep["passed"], rep["failures"]


def test_frobenius_examples():
    assert frobenius_power(MonomialIdeal([(1, 1)], 2), 1, 2).gens == [(2, 2)]
    assert frobenius_power(MonomialIdeal.maximal(2), 1, 2).gens == [(0, 2), (2, 0)]
    assert frobenius_power(MonomialIdeal([(2, 0), (1, 1)], 2), 1, 3).gens == [(3, 3), (6, 0)]
    x = Poly.from_text("x + y", ["x", "y"], p=2)
    assert frobenius_power([x], 1, 2) == [Poly.from_text("x^2 + y^2", ["x", "y"], p=2)]


def test_monomial_ideal_ops():
    m = MonomialIdeal.maximal(2)
    assert MonomialIdeal([(2, 2)], 2).colon(MonomialIdeal([(1, 1)], 2)).gens == [(1, 1)]
    assert m.frobenius(2).colon(MonomialIdeal([(1, 1)], 2)).gens == [(0, 1), (1, 0)]
    assert MonomialIdeal([(1, 0), (2, 0), (1, 1)], 2).gens == [(1, 0)]


def test_splitting_examples():
    xy = named_ring("xy-hypersurface-p2")
    J = splitting_ideal(xy, 1)
    assert J.monomial == MonomialIdeal.maximal(2)
    S = named_ring("poly-ring-p2")
    for e in range(1, 4):
        assert splitting_ideal(S, e).monomial == MonomialIdeal.maximal(2).frobenius(2 ** e)
    cusp = named_ring("cusp-p5")
    assert splitting_ideal(cusp, 1).is_unit()


def test_scan_examples():
    r = f_regularity_scan(named_ring("xy-hypersurface-p2"), 4)
    assert r.f_pure and r.witness_a is None and r.stabilized_nonzero
    assert r.verdict == "F-pure, not strongly F-regular (window)"
    assert all(lv["generators"] == ["y", "x"] for lv in r.levels)
    r = f_regularity_scan(named_ring("poly-ring-p2"), 4)
    assert r.witness_a == 1 and all(r.strictly_shrinking)
    r = f_regularity_scan(named_ring("quadric-p3"), 3)
    assert r.f_pure and r.strictly_shrinking == [True, True] and r.chain_verified
    r = f_regularity_scan(named_ring("cusp-p5"), 2)
    assert not r.f_pure and r.verdict == "not F-pure"


def test_quadric_escape_monomial():
    pres = named_ring("quadric-p3")
    for e in (1, 2):
        q = 3 ** e
        u = pres.f ** (q - 1)
        key = ((q - 1) // 2, q - 1, (q - 1) // 2)
        assert u.terms.get(key, 0) != 0


@pytest.mark.parametrize("name", ["xy-hypersurface-p2", "poly-ring-p2"])
def test_brute_force_agreement(name):
    assert agrees_with_brute_force(named_ring(name), 1)


def test_brute_force_principal_p2():
    f = Poly.from_text("x^2 + y^3", ["x", "y"], p=2)
    assert agrees_with_brute_force(Presentation(2, 2, "principal", f=f), 1)
    g = Poly.from_text("x*y + x^3", ["x", "y"], p=2)
    assert agrees_with_brute_force(Presentation(2, 2, "principal", f=g), 1)


def test_presentation_roundtrip():
    pres = named_ring("quadric-p3")
    again = Presentation.from_dict(pres.to_dict())
    assert again.f == pres.f and again.p == 3
    with pytest.raises(ValueError):
        Presentation(2, 4, "monomial")
    with pytest.raises(ValueError):
        named_ring("nope")


def test_ffrt_examples():
    assert veronese_ffrt(1, 2, 3, 1)["classes"] == {0: 2, 1: 1}
    assert veronese_ffrt(2, 2, 3, 1)["classes"] == {0: 5, 1: 4}
    r = veronese_ffrt(2, 1, 3, 2)
    assert r["classes"] == {0: 81}


@given(st.integers(1, 3), st.integers(1, 5), st.sampled_from([2, 3, 5]), st.integers(0, 3))
def test_ffrt_totals(n, r, p, e):
    rep = veronese_ffrt(n, r, p, e)
    assert rep["total"] == p ** (e * n)
    if rep["gcd_q_r"] == 1:
        assert sum(rep["module_multiplicities"].values()) == p ** (e * n)


def test_ffrt_class_sets_stable():
    assert ffrt_class_sets(2, 3, 2, 4)["stable"]
