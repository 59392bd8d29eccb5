"""Finite matrix groups over Q acting on Q[x] and on its Weyl algebra."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from itertools import permutations
from math import factorial

from gmpy2 import mpq

from .bernstein import WeightedRingSpec, _enumerate, bf_basis
from .coeff import Poly, Q
from .filtration import dim_estimate
from .linalg import Echelon
from .weyl import (WeylOperator, apply, group_act_op, group_act_poly, mat_inverse,
                   mat_mul)


class GroupTooLarge(ValueError):
    pass


def _freeze(m):
    return tuple(tuple(Q(v) for v in row) for row in m)


def _identity(n):
    return tuple(tuple(mpq(1) if i == j else mpq(0) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class FiniteMatrixGroup:
    elements: tuple
    n: int

    @property
    def order(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_trivial(self):
        return self.order == 1

    def check_closed(self):
        elts = set(self.elements)
        if _identity(self.n) not in elts or len(elts) != len(self.elements):
            return False
        for a in self.elements:
            if _freeze(mat_inverse(a)) not in elts:
                return False
            for b in self.elements:
                if _freeze(mat_mul(a, b)) not in elts:
                    return False
        return True

    def preserves_grading(self, weights):
        return all(g[i][j] == 0 or weights[i] == weights[j]
                   for g in self.elements for i in range(self.n) for j in range(self.n))

    def to_json(self):
        return [[[str(v) for v in row] for row in g] for g in self.elements]


def group_closure(gens, max_order: int = 1000) -> FiniteMatrixGroup:
    gens = [_freeze(g) for g in gens]
    if not gens:
        raise ValueError("need at least one generator (use the identity for the trivial group)")
    n = len(gens[0])
    for g in gens:
        mat_inverse(g)
    ident = _identity(n)
    elts = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = _freeze(mat_mul(g, a))
                if b not in seen:
                    seen.add(b)
                    elts.append(b)
                    nxt.append(b)
                    if len(elts) > max_order:
                        raise GroupTooLarge(f"group order exceeds {max_order}")
        frontier = nxt
    return FiniteMatrixGroup(tuple(sorted(elts)), n)


def trivial_group(n):
    return group_closure([_identity(n)])


def named_group(spec: str) -> FiniteMatrixGroup:
    """Fixtures: trivial(n), cyclic-sign(n), perm(n), diag-signs(m1,...,mn)."""
    m = re.fullmatch(r"\s*([a-z\-]+)\s*(?:\(([^)]*)\))?\s*", spec)
    if not m:
        raise ValueError(f"unknown group fixture {spec!r}")
    name, arg = m.group(1), m.group(2) or ""
    args = [int(a) for a in arg.split(",") if a.strip()]
    if name == "trivial":
        return trivial_group(args[0] if args else 1)
    if name == "cyclic-sign":
        n = args[0] if args else 1
        return group_closure([[[-1 if i == j else 0 for j in range(n)] for i in range(n)]])
    if name == "perm":
        n = args[0] if args else 2
        gens = []
        for p in permutations(range(n)):
            gens.append([[1 if p[j] == i else 0 for j in range(n)] for i in range(n)])
        return group_closure(gens, factorial(n))
    if name == "diag-signs":
        if not args:
            raise ValueError("diag-signs needs a 0/1 mask, e.g. diag-signs(1,0)")
        return group_closure([[[(-1 if args[i] else 1) if i == j else 0 for j in range(len(args))]
                               for i in range(len(args))]])
    raise ValueError(f"unknown group fixture {spec!r}")


def group_from_json(data, max_order=1000):
    if isinstance(data, str):
        data = json.loads(data)
    return group_closure([[[Q(v) for v in row] for row in g] for g in data], max_order)


def _rank(m):
    e = Echelon()
    for row in m:
        e.add({j: v for j, v in enumerate(row) if v})
    return e.rank()


def pseudoreflections(G: FiniteMatrixGroup):
    n = G.n
    out = []
    for g in G:
        diff = [[(1 if i == j else 0) - g[i][j] for j in range(n)] for i in range(n)]
        if _rank(diff) == 1:
            out.append(g)
    return out


def reynolds_poly(G: FiniteMatrixGroup, f: Poly) -> Poly:
    acc = f.zero()
    for g in G:
        acc = acc + group_act_poly(g, f)
    return acc.scale(mpq(1, G.order))


def reynolds_op(G: FiniteMatrixGroup, delta: WeylOperator) -> WeylOperator:
    acc = WeylOperator.zero(delta.n, delta.sparam)
    for g in G:
        acc = acc + group_act_op(g, delta)
    return acc.scale(mpq(1, G.order))


def is_invariant_op(G, delta):
    return all(group_act_op(g, delta) == delta for g in G)


def is_invariant_poly(G, f):
    return all(group_act_poly(g, f) == f for g in G)


@dataclass
class InvariantOperatorSpace:
    level: object
    basis: list

    @property
    def dim(self):
        return len(self.basis)


def _bidegree(key, spec):
    n = spec.n
    w = spec.weights
    return (sum(a * b for a, b in zip(key[:n], w)), sum(a * b for a, b in zip(key[n:], w)))


def _fixed_basis(vectors_by_block, make):
    """Reduced echelon basis of the span of projected vectors, block by block."""
    basis = []
    for block in sorted(vectors_by_block):
        e = Echelon()
        for v in vectors_by_block[block]:
            if v:
                e.add(v)
        rows = _reduced_rows(e)
        basis.extend(make(r) for r in rows)
    return basis


def _reduced_rows(e: Echelon):
    """Fully reduced rows of an echelon basis, sorted by pivot."""
    pivots = sorted(e.rows)
    rows = {p: dict(e.rows[p][0]) for p in pivots}
    for p in reversed(pivots):
        r = rows[p]
        for q in pivots:
            if q != p and p in rows[q]:
                c = rows[q][p]
                for k, v in r.items():
                    t = rows[q].get(k, 0) - c * v
                    if t:
                        rows[q][k] = t
                    else:
                        rows[q].pop(k, None)
    return [rows[p] for p in pivots]


def invariant_bf_basis(G: FiniteMatrixGroup, spec: WeightedRingSpec, i) -> InvariantOperatorSpace:
    """Basis of the G-fixed part of the level-i Bernstein space (homogeneous elements)."""
    if not G.preserves_grading(spec.weights):
        raise ValueError("group does not preserve the grading")
    keys = bf_basis(spec, i).keys
    n = spec.n
    if G.is_trivial():
        return InvariantOperatorSpace(i, [WeylOperator({k: 1}, n) for k in keys])
    blocks = {}
    for k in keys:
        img = reynolds_op(G, WeylOperator({k: 1}, n))
        blocks.setdefault(_bidegree(k, spec), []).append(img.terms)
    basis = _fixed_basis(blocks, lambda r: WeylOperator(r, n))
    return InvariantOperatorSpace(i, basis)


def trace_dimension(G: FiniteMatrixGroup, spec: WeightedRingSpec, i) -> mpq:
    """(1/|G|) sum_g trace(g on B_i), by direct diagonal extraction."""
    keys = bf_basis(spec, i).keys
    n = spec.n
    total = mpq(0)
    for g in G:
        for k in keys:
            total += group_act_op(g, WeylOperator({k: 1}, n)).terms.get(k, 0)
    return total / G.order


def invariant_polys(G: FiniteMatrixGroup, weights, d: int):
    """Basis of degree-d invariant polynomials."""
    n = G.n
    mons = [e for e in _enumerate([mpq(v) for v in weights], mpq(d))
            if sum(a * b for a, b in zip(e, weights)) == d]
    vecs = [reynolds_poly(G, Poly({e: 1}, n)).terms for e in mons]
    return _fixed_basis({0: vecs}, lambda r: Poly(r, n))


def _ops_of_degree(spec, order_max, degree):
    """Monomial keys with |beta| <= order_max and weighted degree == degree."""
    n, w = spec.n, spec.weights
    out = []
    for be in _enumerate([mpq(1)] * n, mpq(order_max)):
        dbeta = sum(a * b for a, b in zip(be, w))
        target = dbeta + degree
        if target < 0:
            continue
        for al in _enumerate([mpq(v) for v in w], mpq(target)):
            if sum(a * b for a, b in zip(al, w)) == target:
                out.append(al + be)
    return out


def differential_power(G: FiniteMatrixGroup, spec: WeightedRingSpec, i: int) -> dict:
    """Graded dimensions of R^G / m^<i> via the evaluation pairing.

    Operators are the G-invariant operators on S of order <= i-1 (identified
    with operators on R^G); the pairing is (delta, f) -> constant term of
    delta(f).
    """
    if i < 1:
        raise ValueError("differential powers start at i = 1")
    n, w = spec.n, spec.weights
    graded = {}
    total_quot = 0
    total_rank = 0
    for d in range(0, spec.w * (i - 1) + 1):
        fs = invariant_polys(G, w, d)
        if not fs:
            continue
        keys = _ops_of_degree(spec, i - 1, -d)
        if G.is_trivial():
            ops = [WeylOperator({k: 1}, n) for k in keys]
        else:
            blocks = {0: [reynolds_op(G, WeylOperator({k: 1}, n)).terms for k in keys]}
            ops = _fixed_basis(blocks, lambda r: WeylOperator(r, n))
        rows = []
        for op in ops:
            row = {}
            for c, f in enumerate(fs):
                v = apply(op, f).constant_term()
                if v:
                    row[c] = v
            rows.append(row)
        e = Echelon()
        for r in rows:
            e.add(r)
        rk = e.rank()
        # right kernel: f's killed by every operator span m^<i> in degree d
        cols = [{r: rows[r][c] for r in range(len(rows)) if c in rows[r]} for c in range(len(fs))]
        ek = Echelon(track=True)
        for col in cols:
            ek.add(col)
        quot = len(fs) - len(ek.kernel)
        graded[d] = {"invariants": len(fs), "operators": len(ops), "quotient": quot, "rank": rk}
        total_quot += quot
        total_rank += rk
    return {"i": i, "graded": graded, "dim_quotient": total_quot, "pairing_rank": total_rank,
            "nondegenerate": total_quot == total_rank}


def diff_signature_estimate(G: FiniteMatrixGroup, spec: WeightedRingSpec, i_max: int,
                            window: int | None = None) -> dict:
    d = spec.n
    dims = [0] + [differential_power(G, spec, i)["dim_quotient"] for i in range(1, i_max + 1)]
    vals = [mpq(factorial(d) * dims[i], i ** d) for i in range(1, i_max + 1)]
    window = window or max(4, i_max // 2)
    tail = vals[-window:]
    out = {"dims": dims, "normalized": [str(v) for v in vals], "window_max": str(max(tail)),
           "dimension": d}
    if len(dims) >= 2 * window:
        est = dim_estimate(dims, window)
        if est.stable and est.degree == d:
            out["fitted_limsup"] = str(est.multiplicity * factorial(d))
    return out


def negative_degree_order1(G: FiniteMatrixGroup):
    """Basis of G-fixed operators in span{d_1..d_n}."""
    n = G.n
    vecs = [reynolds_op(G, WeylOperator.d(j, n)).terms for j in range(n)]
    return _fixed_basis({0: vecs}, lambda r: WeylOperator(r, n))


def summand_check(G: FiniteMatrixGroup, spec: WeightedRingSpec, probes, f: Poly | None = None,
                  samples: int = 10, level: int = 3, rng=None, ops=None) -> dict:
    """rho(delta(v)) == rho(delta)(v) for random delta and invariant probes v."""
    from .bernstein import random_element
    from .dmod import LocalizedElement, localize_act
    rng = rng or random.Random(0)
    if ops is None:
        ops = [random_element(spec, level, rng) for _ in range(samples)]
    failures = []
    checks = 0
    for delta in ops:
        rd = reynolds_op(G, delta)
        for v in probes:
            checks += 1
            if isinstance(v, LocalizedElement):
                lhs = localize_act(delta, v)
                lhs = LocalizedElement(reynolds_poly(G, lhs.num), lhs.t, lhs.f)
                rhs = localize_act(rd, v)
            else:
                lhs = reynolds_poly(G, apply(delta, v))
                rhs = apply(rd, v)
            if lhs != rhs:
                failures.append((delta.to_text(), str(v)))
    return {"checks": checks, "passed": not failures, "failures": failures[:5]}
