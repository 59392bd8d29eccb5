from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from holofilt.linalg import Echelon, is_in_span, kernel, rank, solve

vectors = st.lists(st.dictionaries(st.integers(0, 5), st.integers(-3, 3).filter(bool), max_size=4),
                   max_size=6)


def combine(cols, coeffs):
    out = {}
    for j, c in coeffs.items():
        for k, v in cols[j].items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def test_rank_small():
    assert rank([{0: 1}, {1: 1}, {0: 2, 1: 2}]) == 2
    assert rank([{0: 1}, {0: 1}], p=2) == 1
    assert rank([{0: 1, 1: 1}, {0: 1, 1: 1}, {1: 1}], p=2) == 2


@given(vectors)
def test_kernel_vectors_annihilate(cols):
    for k in kernel(cols):
        assert combine(cols, k) == {}
    assert rank(cols) + len(kernel(cols)) == len(cols)


@given(vectors, st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_solve_recovers_combinations(cols, cs):
    target = combine(cols, {j: mpq(c) for j, c in enumerate(cs[:len(cols)])})
    sol = solve(cols, target)
    assert sol is not None
    assert combine(cols, sol) == target
    assert is_in_span(cols, target)


@given(vectors)
def test_mod_p_kernel(cols):
    p = 7
    e = Echelon(p, track=True)
    for c in cols:
        e.add(c)
    for k in e.kernel:
        assert {a: b % p for a, b in combine(cols, k).items() if b % p} == {}


def test_express_outside_span():
    e = Echelon(track=True)
    e.add({0: 1})
    assert e.express({1: 1}) is None
    assert e.express({0: 3}) == {0: 3}
