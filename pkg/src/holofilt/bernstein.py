"""Generalized Bernstein filtrations on the Weyl algebra of a weighted polynomial ring.

Level i of the slope-a filtration is spanned by the monomials x^alpha d^beta
with  sum alpha_j w_j + sum beta_j (a - w_j) <= i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import ceil

from gmpy2 import mpq

from .coeff import Q
from .filtration import DimSequence, FiltrationHandle
from .weyl import WeylOperator, commutator, weyl_mul


@dataclass(frozen=True)
class WeightedRingSpec:
    n: int
    weights: tuple = None
    slope: object = 2

    def __post_init__(self):
        w = tuple(int(v) for v in (self.weights or (1,) * self.n))
        if len(w) != self.n or min(w) < 1:
            raise ValueError(f"need {self.n} positive integer weights, got {w}")
        object.__setattr__(self, "weights", w)
        a = Q(self.slope)
        object.__setattr__(self, "slope", a)
        if not a > max(w):
            raise ValueError(f"slope {a} must exceed the maximal weight {max(w)}")

    @property
    def w(self):
        return max(self.weights)

    @property
    def integral(self):
        return self.slope.denominator == 1

    def gen_weights(self):
        """Filtration weights of x_1..x_n, d_1..d_n."""
        a = self.slope
        return tuple(mpq(v) for v in self.weights) + tuple(a - v for v in self.weights)

    def level(self, key):
        return sum((c * e for c, e in zip(self.gen_weights(), key)), mpq(0))

    def with_slope(self, a):
        return WeightedRingSpec(self.n, self.weights, a)

    def describe(self):
        return {"n": self.n, "weights": list(self.weights), "slope": str(self.slope)}


@dataclass
class BFLevel:
    level: int
    keys: list

    @property
    def dim(self):
        return len(self.keys)

    def operators(self, n):
        return [WeylOperator({k: 1}, n, _trusted=False) for k in self.keys]


def _enumerate(weights, bound):
    """All exponent vectors e with sum weights[k]*e[k] <= bound."""
    out = []
    m = len(weights)

    def rec(k, prefix, used):
        if k == m:
            out.append(tuple(prefix))
            return
        e = 0
        while used + e * weights[k] <= bound:
            prefix.append(e)
            rec(k + 1, prefix, used + e * weights[k])
            prefix.pop()
            e += 1

    rec(0, [], mpq(0))
    return out


def bf_basis(spec: WeightedRingSpec, i) -> BFLevel:
    gw = spec.gen_weights()
    keys = _enumerate(gw, Q(i))
    keys.sort(key=lambda k: (spec.level(k), k))
    return BFLevel(int(i) if Q(i).denominator == 1 else i, keys)


def _scaled(spec):
    den = int(spec.slope.denominator)
    return [int(v * den) for v in spec.gen_weights()], den


def knapsack_counts(weights, bound):
    """ways[t] = #{e in N^m : sum weights*e == t} for t <= bound."""
    ways = [0] * (bound + 1)
    ways[0] = 1
    for c in weights:
        for t in range(c, bound + 1):
            ways[t] += ways[t - c]
    return ways


def bf_dim_sequence(spec: WeightedRingSpec, i_max: int) -> DimSequence:
    weights, den = _scaled(spec)
    ways = knapsack_counts(weights, i_max * den)
    out, acc, t = [], 0, 0
    for i in range(i_max + 1):
        while t <= i * den:
            acc += ways[t]
            t += 1
        out.append(acc)
    return DimSequence(out, "counted")


def bf_dim(spec: WeightedRingSpec, i: int) -> int:
    return bf_dim_sequence(spec, i).values[i]


def bf_member(delta: WeylOperator, spec: WeightedRingSpec, i) -> bool:
    i = Q(i)
    return all(spec.level(k) <= i for k in delta.terms)


def op_level(delta: WeylOperator, spec: WeightedRingSpec):
    """Smallest level containing delta (None for zero)."""
    if not delta:
        return None
    return max(spec.level(k) for k in delta.terms)


def bf_handle(spec: WeightedRingSpec) -> FiltrationHandle:
    return FiltrationHandle(lambda i: [{k: 1} for k in bf_basis(spec, i).keys],
                            lambda i: bf_dim(spec, i), None, f"B(slope={spec.slope})")


def slope_witness(spec_a: WeightedRingSpec, spec_b: WeightedRingSpec, window: int = 20) -> dict:
    """C with B^b_i in B^a_i and B^a_i in B^b_{Ci}, certified for i <= window."""
    if spec_a.n != spec_b.n or spec_a.weights != spec_b.weights:
        raise ValueError("slope comparison needs the same ring")
    if spec_a.slope > spec_b.slope:
        raise ValueError("expected slope a <= slope b")
    a, b, w = spec_a.slope, spec_b.slope, spec_a.w
    C = int(ceil(b / (a - w)))
    if a == b:
        C = 1
    first_fail = None
    for i in range(window + 1):
        for k in bf_basis(spec_b, i).keys:
            if spec_a.level(k) > i:
                first_fail = ("b-in-a", i, k)
                break
        if first_fail:
            break
        for k in bf_basis(spec_a, i).keys:
            if spec_b.level(k) > C * i:
                first_fail = ("a-in-b", i, k)
                break
        if first_fail:
            break
    return {"C": C, "certified": first_fail is None, "window": window,
            "failure": None if first_fail is None else list(first_fail)}


def random_element(spec: WeightedRingSpec, i, rng: random.Random, terms=3, coeff_range=5):
    keys = bf_basis(spec, i).keys
    out = {}
    for _ in range(terms):
        k = rng.choice(keys)
        out[k] = out.get(k, 0) + rng.randint(-coeff_range, coeff_range)
    return WeylOperator(out, spec.n)


def gr_commutativity_check(spec: WeightedRingSpec, i: int, j: int, samples: int,
                           rng: random.Random | None = None, pairs=None) -> dict:
    """[B_i, B_j] lands in B_{i+j-1}: symbols commute in the associated graded ring."""
    if not spec.integral:
        raise ValueError("associated graded check needs an integral slope")
    rng = rng or random.Random(0)
    failures = []
    if pairs is None:
        pairs = ((random_element(spec, i, rng), random_element(spec, j, rng)) for _ in range(samples))
    count = 0
    for d, e in pairs:
        count += 1
        c = commutator(d, e)
        if not bf_member(c, spec, i + j - 1):
            failures.append((d.to_text(), e.to_text()))
    return {"samples": count, "i": i, "j": j, "passed": not failures, "failures": failures[:5]}


def multiplicativity_check(spec, i, j, samples, rng=None):
    """B_i B_j within B_{i+j} on random pairs."""
    rng = rng or random.Random(0)
    bad = 0
    for _ in range(samples):
        d, e = random_element(spec, i, rng), random_element(spec, j, rng)
        if not bf_member(weyl_mul(d, e), spec, i + j):
            bad += 1
    return bad == 0


def r_filtration_seq(spec: WeightedRingSpec, i_max: int) -> DimSequence:
    """dim of B_i . 1 = [R]_{<= i}, counted by weighted knapsack."""
    ways = knapsack_counts(list(spec.weights), i_max)
    out, acc = [], 0
    for i in range(i_max + 1):
        acc += ways[i]
        out.append(acc)
    return DimSequence(out, "counted")


def r_filtration_handle(spec: WeightedRingSpec) -> FiltrationHandle:
    """[R]_{<= i} as monomial coordinate vectors."""
    def spanning(i):
        return [{e: 1} for e in _enumerate([mpq(v) for v in spec.weights], mpq(i))]
    return FiltrationHandle(spanning, lambda i: r_filtration_seq(spec, i).values[i], None, "R")


def eps_and_order_domination(spec: WeightedRingSpec, window: int = 12) -> dict:
    """epsilon = a - w and C = ceil(1/epsilon) with B_i inside D^{C i}, checked on a window."""
    eps = spec.slope - spec.w
    C = int(ceil(1 / eps))
    n = spec.n
    verified = True
    for i in range(1, window + 1):
        for k in bf_basis(spec, i).keys:
            if sum(k[n:]) > C * i:
                verified = False
                break
        if not verified:
            break
    return {"epsilon": eps, "C": C, "verified": verified, "window": window}
