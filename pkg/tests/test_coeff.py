from math import prod

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from holofilt.coeff import (DivisionNotExact, Poly, SPoly, binom_int, binom_s, check_prime,
                            infer_names, is_prime, poly_arith, reduce_scalar)
from strategies import nonzero_polys, polys


def P(text, names=None, p=None):
    return Poly.from_text(text, names, p)


def test_binom_s_small_cases():
    assert binom_s(0) == SPoly([1])
    assert binom_s(1) == SPoly.s()
    assert binom_s(2) == SPoly([0, mpq(-1, 2), mpq(1, 2)])


@pytest.mark.parametrize("i", range(7))
@pytest.mark.parametrize("j", range(-8, 9))
def test_binom_s_matches_product_formula(i, j):
    expected = mpq(prod(j - k for k in range(i)), prod(range(1, i + 1)))
    assert binom_s(i)(j) == expected
    assert binom_int(j, i) == expected


def test_poly_arith_examples():
    x1 = P("x + 1")
    assert poly_arith("mul", x1, P("x - 1")) == P("x^2 - 1")
    xy = P("x^2*y", ["x", "y"])
    assert poly_arith("exact-divide", xy, P("x", ["x", "y"])) == P("x*y", ["x", "y"])
    with pytest.raises(DivisionNotExact):
        poly_arith("exact-divide", x1, P("x"))


def test_parser_forms():
    assert P("3/4*x^2 + (1/2)*x - 2") == Poly({(2,): mpq(3, 4), (1,): mpq(1, 2), (0,): -2}, 1)
    assert infer_names("x3 + x1") == ["x1", "x2", "x3"]
    assert infer_names("b^2 - a*c") == ["a", "b", "c"]
    f = P("x^2 - 3*x*y + 5", ["x", "y"])
    assert Poly.from_text(f.to_text(["x", "y"]), ["x", "y"]) == f
    assert Poly.from_json(f.to_json(), 2) == f


def test_exponent_guard():
    with pytest.raises(OverflowError):
        Poly({(2 ** 31,): 1}, 1)
    with pytest.raises(ValueError):
        Poly({(-1,): 1}, 1)


def test_mod_p_scalars():
    assert is_prime(65521) and not is_prime(65535)
    with pytest.raises(ValueError):
        check_prime(4)
    assert reduce_scalar(mpq(1, 2), 5) == 3
    with pytest.raises(ZeroDivisionError):
        reduce_scalar(mpq(1, 5), 5)
    f = P("x + 1", p=2)
    assert f ** 2 == P("x^2 + 1", p=2)


@given(polys(2), polys(2), polys(2))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == a.zero()


@given(polys(2), nonzero_polys(2))
def test_divmod_reconstructs(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a


@given(polys(2), nonzero_polys(2))
def test_exact_divide_of_product(a, b):
    assert (a * b).exact_divide(b) == a


@given(st.lists(st.integers(-4, 4), max_size=4), st.integers(-6, 6))
def test_spoly_evaluation_is_ring_map(cs, t):
    a = SPoly(cs)
    b = SPoly([1, 2])
    assert (a * b)(t) == a(t) * b(t)
    assert (a + b)(t) == a(t) + b(t)


@given(polys(2))
def test_diff_is_derivation(a):
    b = P("x1*x2 + 3*x1^2", ["x1", "x2"])
    assert (a * b).diff(0) == a.diff(0) * b + a * b.diff(0)
