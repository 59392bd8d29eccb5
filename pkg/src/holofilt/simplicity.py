"""Linear-simplicity certificates: commutator reduction and span membership of 1."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from gmpy2 import mpq

from .bernstein import WeightedRingSpec, bf_basis, bf_member, op_level, _enumerate
from .coeff import Poly
from .linalg import Echelon
from .weyl import WeylOperator, apply, commutator, weyl_mul


def _gen(kind, j, n):
    return WeylOperator.d(j, n) if kind == "d" else WeylOperator.x(j, n)


@dataclass
class ReductionCertificate:
    start: WeylOperator
    moves: list
    constant: object
    verified: bool = False

    def replay(self):
        cur = self.start
        for kind, j in self.moves:
            cur = commutator(cur, _gen(kind, j, cur.n))
        return cur

    def multipliers(self):
        """Expand the brackets: [..[delta, g1], .., gm] = sum sign * L * delta * R."""
        n = self.start.n
        one = WeylOperator.const(1, n)
        terms = [(1, one, one)]
        for kind, j in self.moves:
            g = _gen(kind, j, n)
            nxt = []
            for sgn, L, R in terms:
                nxt.append((sgn, L, weyl_mul(R, g)))
                nxt.append((-sgn, weyl_mul(g, L), R))
            terms = nxt
        return terms

    def to_dict(self):
        return {"start": self.start.to_text(), "moves": [f"[.,{'d' if k == 'd' else 'x'}{j + 1}]"
                                                        for k, j in self.moves],
                "constant": str(self.constant), "verified": self.verified}


def reduce_to_unit(delta: WeylOperator, spec: WeightedRingSpec | None = None) -> ReductionCertificate:
    """Bracket with d_j (then x_j) until a nonzero constant remains.

    [x^a d^b, d_j] = -a_j x^(a-e_j) d^b, so bracketing with d_j for j of
    maximal a_j never kills the terms attaining that maximum.
    """
    if delta.sparam:
        raise ValueError("reduce_to_unit needs a scalar operator")
    if not delta:
        raise ValueError("cannot reduce the zero operator")
    n = delta.n
    spec = spec or WeightedRingSpec(n)
    if not spec.integral:
        raise ValueError("reduce_to_unit needs an integral slope")
    cur, moves = delta, []
    while True:
        keys = list(cur.terms)
        xs = [max(k[j] for k in keys) for j in range(n)]
        if max(xs) > 0:
            j = xs.index(max(xs))
            moves.append(("d", j))
        else:
            ds = [max(k[n + j] for k in keys) for j in range(n)]
            if max(ds) == 0:
                break
            j = ds.index(max(ds))
            moves.append(("x", j))
        kind, j = moves[-1]
        cur = commutator(cur, _gen(kind, j, n))
        if not cur:
            raise ArithmeticError("reduction reached zero")
    c = cur.terms[(0,) * (2 * n)]
    cert = ReductionCertificate(delta, moves, c)
    last = cert.replay()
    ok = last == WeylOperator.const(c, n) and c != 0
    for kind, j in moves:
        lev = spec.weights[j] if kind == "x" else spec.slope - spec.weights[j]
        ok = ok and bf_member(_gen(kind, j, n), spec, lev)
    cert.verified = bool(ok)
    if not ok:
        raise ArithmeticError("reduction certificate failed replay")
    return cert


def reduction_membership(cert: ReductionCertificate, spec: WeightedRingSpec, i: int, C: int) -> bool:
    """The expanded multipliers lie in B_{Ci} and reproduce the constant."""
    n = cert.start.n
    total = WeylOperator.zero(n)
    for sgn, L, R in cert.multipliers():
        if not (bf_member(L, spec, C * i) and bf_member(R, spec, C * i)):
            return False
        total = total + weyl_mul(weyl_mul(L, cert.start), R).scale(sgn)
    return total == WeylOperator.const(cert.constant, n)


def bavula_constant(spec: WeightedRingSpec) -> int:
    """max over j of max(w_j, a - w_j)."""
    return int(max(max(w, spec.slope - w) for w in spec.weights))


# ---------------------------------------------------------------------------


@dataclass
class MembershipCertificate:
    delta: WeylOperator
    i: int
    C: int
    terms: list = field(default_factory=list)   # (c, alpha, beta)
    verified: bool = False
    space: str = "full"

    def combination(self):
        n = self.delta.n
        out = WeylOperator.zero(n)
        for c, a, b in self.terms:
            out = out + weyl_mul(weyl_mul(a, self.delta), b).scale(c)
        return out

    def to_dict(self):
        return {"delta": self.delta.to_text(), "i": self.i, "C": self.C, "space": self.space,
                "verified": self.verified,
                "terms": [{"c": str(c), "alpha": a.to_text(), "beta": b.to_text()}
                          for c, a, b in self.terms]}


def _level_space(spec, level, group):
    if group is None:
        return [WeylOperator({k: 1}, spec.n) for k in bf_basis(spec, level).keys]
    from .invariants import invariant_bf_basis
    return invariant_bf_basis(group, spec, level).basis


def _probe_check(terms, delta, n) -> bool:
    """Apply the combination to every monomial of degree <= its order; must act as 1."""
    order = max((a.order() + delta.order() + b.order() for _, a, b in terms), default=0)
    for e in _enumerate([mpq(1)] * n, mpq(order)):
        m = Poly({e: 1}, n)
        acc = m.zero()
        for c, a, b in terms:
            acc = acc + apply(a, apply(delta, apply(b, m))).scale(c)
        if acc != m:
            return False
    return True


def membership_certificate(delta: WeylOperator, i: int, C: int, spec: WeightedRingSpec | None = None,
                           group=None, probe=True) -> MembershipCertificate | None:
    """Write 1 = sum c_k alpha_k delta beta_k with alpha_k, beta_k in the level-Ci basis.

    When delta is homogeneous only pairs with deg alpha + deg beta = -deg delta
    can contribute to the degree-0 part, so other pairs are skipped.
    """
    n = delta.n
    spec = spec or WeightedRingSpec(n)
    if not delta:
        raise ValueError("delta must be nonzero")
    if not bf_member(delta, spec, i):
        raise ValueError(f"delta is not in level {i}")
    if group is not None:
        from .invariants import is_invariant_op
        if not is_invariant_op(group, delta):
            raise ValueError("delta is not invariant")
    space = "full" if group is None else "invariant"
    if i == 0 or (delta.order() == 0 and delta.poly_part().degree() == 0):
        c = delta.terms[(0,) * (2 * n)]
        one = WeylOperator.const(1, n)
        cert = MembershipCertificate(delta, i, C, [(1 / mpq(c), one, one)], space=space)
        cert.verified = cert.combination() == one
        return cert
    basis = _level_space(spec, C * i, group)
    w = spec.weights
    homog = delta.is_homogeneous(w)
    target_deg = -delta.wdegree(w) if homog else None
    degs = [b.wdegree(w) if b.is_homogeneous(w) else None for b in basis]
    if homog and any(d is None for d in degs):
        homog = False
    by_deg = {}
    for idx, d in enumerate(degs):
        by_deg.setdefault(d, []).append(idx)
    dbeta = {}
    ech = Echelon(track=True)
    labels = []
    unit = {(0,) * (2 * n): mpq(1)}
    found = None
    for ia, a in enumerate(basis):
        if homog:
            partners = by_deg.get(target_deg - degs[ia], [])
        else:
            partners = range(len(basis))
        for ib in partners:
            if ib not in dbeta:
                dbeta[ib] = weyl_mul(delta, basis[ib])
            prod = weyl_mul(a, dbeta[ib])
            if prod:
                ech.add(prod.terms, label=len(labels))
                labels.append((ia, ib))
        if partners:
            found = ech.express(unit)
            if found is not None:
                break
    if found is None:
        return None
    terms = [(c, basis[labels[k][0]], basis[labels[k][1]]) for k, c in sorted(found.items())]
    cert = MembershipCertificate(delta, i, C, terms, space=space)
    ok = cert.combination() == WeylOperator.const(1, n)
    ok = ok and all(bf_member(a, spec, C * i) and bf_member(b, spec, C * i) for _, a, b in terms)
    if ok and probe:
        ok = _probe_check(terms, delta, n)
    cert.verified = bool(ok)
    if not ok:
        raise ArithmeticError("membership certificate failed verification")
    return cert


# ---------------------------------------------------------------------------


def _random_homogeneous(basis, spec, rng, terms=3):
    w = spec.weights
    by_deg = {}
    for b in basis:
        by_deg.setdefault(b.wdegree(w), []).append(b)
    d = rng.choice(sorted(by_deg))
    pool = by_deg[d]
    out = WeylOperator.zero(spec.n)
    for _ in range(terms):
        out = out + rng.choice(pool).scale(rng.choice([c for c in range(-4, 5) if c]))
    return out


def min_constant_table(spec: WeightedRingSpec, i_max: int, C_max: int, group=None,
                       random_samples: int = 0, rng: random.Random | None = None) -> dict:
    """Least certified C per sampled delta, maximized per level.

    Level 0 uses the C = 0 convention (1 is in k.delta.k).  Samples are the
    full level-i basis plus random homogeneous combinations.
    """
    rng = rng or random.Random(0)
    table = {}
    for i in range(i_max + 1):
        basis = _level_space(spec, i, group)
        if i == 0:
            table[0] = {"C": 0, "deltas": len(basis), "exceeded": []}
            continue
        # constants are certified at every level, so only nonconstant deltas count
        samples = [b for b in basis if op_level(b, spec) > 0]
        samples += [s for s in (_random_homogeneous(basis, spec, rng) for _ in range(random_samples))
                    if s and op_level(s, spec) > 0]
        worst, exceeded = 0, []
        for delta in samples:
            for C in range(1, C_max + 1):
                if membership_certificate(delta, i, C, spec, group) is not None:
                    worst = max(worst, C)
                    break
            else:
                exceeded.append(delta.to_text())
        table[i] = {"C": worst if not exceeded else None, "deltas": len(samples), "exceeded": exceeded}
    return table
