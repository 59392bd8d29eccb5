"""D-module structures on R_f and R_f[s] f^s, and a bounded Bernstein-Sato search."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .bernstein import (WeightedRingSpec, bf_basis, eps_and_order_domination,
                        r_filtration_seq)
from .coeff import Poly, SPoly, binom_int, binom_s
from .filtration import DimSequence, dim_estimate
from .linalg import Echelon
from .weyl import WeylOperator, apply, bracket_sequence, commutator, weyl_mul


class LocalizedElement:
    """num / f^t in R_f, kept with f not dividing num when t > 0."""

    __slots__ = ("num", "t", "f")

    def __init__(self, num: Poly, t: int, f: Poly, normalize=True):
        if not f:
            raise ZeroDivisionError("cannot localize at 0")
        if t < 0:
            num = num * f ** (-t)
            t = 0
        if normalize:
            while t > 0 and num:
                q, r = num.divmod(f)
                if r:
                    break
                num, t = q, t - 1
            if not num:
                t = 0
        self.num, self.t, self.f = num, t, f

    def __eq__(self, other):
        if not isinstance(other, LocalizedElement):
            return NotImplemented
        return self.num * self.f ** other.t == other.num * self.f ** self.t

    def __hash__(self):
        return hash((self.num, self.t))

    def __add__(self, other):
        t = max(self.t, other.t)
        num = self.num * self.f ** (t - self.t) + other.num * self.f ** (t - other.t)
        return LocalizedElement(num, t, self.f)

    def __neg__(self):
        return LocalizedElement(-self.num, self.t, self.f, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LocalizedElement(self.num.scale(c), self.t, self.f)

    def mul_poly(self, g: Poly):
        return LocalizedElement(self.num * g, self.t, self.f)

    def mul_f_power(self, j: int):
        """Multiply by f^j (j may be negative)."""
        return LocalizedElement(self.num, self.t - j, self.f)

    def __repr__(self):
        if self.t == 0:
            return f"LocalizedElement({self.num.to_text()})"
        return f"LocalizedElement(({self.num.to_text()})/({self.f.to_text()})^{self.t})"

    def to_text(self, names=None):
        if self.t == 0:
            return self.num.to_text(names)
        return f"({self.num.to_text(names)})/({self.f.to_text(names)})^{self.t}"


def localize_act(delta: WeylOperator, v: LocalizedElement) -> LocalizedElement:
    """delta(v / f^t) = (delta(v) - [delta, f^t](v / f^t)) / f^t, recursing on order."""
    if delta.sparam:
        raise ValueError("localize_act needs a scalar operator")
    f = v.f
    if v.t == 0 or delta.order() <= 0:
        return LocalizedElement(apply(delta, v.num), v.t, f)
    ft = WeylOperator.from_poly(f ** v.t)
    c = commutator(delta, ft)
    head = LocalizedElement(apply(delta, v.num), 0, f)
    return (head - localize_act(c, v)).mul_f_power(-v.t)


def localize_act_closed(delta: WeylOperator, v: LocalizedElement) -> LocalizedElement:
    """Same action through delta f^-t = sum_i binom(-t, i) f^(-t-i) delta^(i)."""
    f = v.f
    out = LocalizedElement(f.zero(), 0, f)
    for i, di in enumerate(bracket_sequence(delta, f)):
        term = LocalizedElement(apply(di, v.num), v.t + i, f).scale(binom_int(-v.t, i))
        out = out + term
    return out


# ---------------------------------------------------------------------------


@dataclass
class ThetaImage:
    """Theta(delta) = f^(-fpow) * num, num an s-parametric Weyl operator."""
    num: WeylOperator
    fpow: int
    f: Poly

    def to_text(self, names=None):
        return f"({self.f.to_text(names)})^-{self.fpow} * ({self.num.to_text(names)})"


def theta_hom(delta: WeylOperator, f: Poly) -> ThetaImage:
    """sum_i binom(s, i) f^(-i) delta^(i), with denominators cleared on the left."""
    chain = bracket_sequence(delta.lift() if not delta.sparam else delta, f)
    k = len(chain) - 1
    num = WeylOperator.zero(delta.n, True)
    for i, di in enumerate(chain):
        left = WeylOperator.from_poly(f ** (k - i), True)
        num = num + weyl_mul(left, di).scale(binom_s(i))
    return ThetaImage(num, k, f)


def theta_product_identity(alpha: WeylOperator, beta: WeylOperator, f: Poly) -> bool:
    """Theta(alpha beta) == Theta(alpha) Theta(beta), as an identity of D[s] operators.

    Theta(alpha)Theta(beta) = f^-a N_a f^-b N_b
                            = sum_i binom(-b, i) f^(-a-b-i) N_a^(i) N_b,
    so after multiplying both sides on the left by f^K everything is polynomial.
    """
    ta, tb, tab = theta_hom(alpha, f), theta_hom(beta, f), theta_hom(weyl_mul(alpha, beta), f)
    a, b, c = ta.fpow, tb.fpow, tab.fpow
    chain = bracket_sequence(ta.num, f)
    K = max(a + b + len(chain) - 1, c)
    n = alpha.n
    rhs = WeylOperator.zero(n, True)
    for i, ni in enumerate(chain):
        left = WeylOperator.from_poly(f ** (K - a - b - i), True)
        rhs = rhs + weyl_mul(left, weyl_mul(ni, tb.num)).scale(binom_int(-b, i))
    lhs = weyl_mul(WeylOperator.from_poly(f ** (K - c), True), tab.num)
    return lhs == rhs


# ---------------------------------------------------------------------------


class FsElement:
    """a(s) f^s with a(s) = (sum_k s^k num_k) / f^t; f^s itself is never expanded."""

    __slots__ = ("coeffs", "t", "f")

    def __init__(self, coeffs: dict, t: int, f: Poly):
        self.coeffs = {k: p for k, p in coeffs.items() if p}
        self.t = t
        self.f = f

    @classmethod
    def fs(cls, f: Poly, a: Poly | None = None):
        """a * f^s (a defaults to 1)."""
        return cls({0: a if a is not None else f.one()}, 0, f)

    def _lift(self, t):
        m = self.f ** (t - self.t)
        return {k: p * m for k, p in self.coeffs.items()}

    def __add__(self, other):
        t = max(self.t, other.t)
        a, b = self._lift(t), other._lift(t)
        for k, p in b.items():
            a[k] = a[k] + p if k in a else p
        return FsElement(a, t, self.f)

    def __eq__(self, other):
        if not isinstance(other, FsElement):
            return NotImplemented
        t = max(self.t, other.t)
        a, b = self._lift(t), other._lift(t)
        return {k: p for k, p in a.items() if p} == {k: p for k, p in b.items() if p}

    def times_spoly(self, c: SPoly):
        out = {}
        for k, p in self.coeffs.items():
            for j, a in enumerate(c.c):
                if a:
                    out[k + j] = out[k + j] + p.scale(a) if k + j in out else p.scale(a)
        return FsElement(out, self.t, self.f)

    def normalized(self):
        coeffs, t = dict(self.coeffs), self.t
        while t > 0 and coeffs:
            qs = {}
            for k, p in coeffs.items():
                q, r = p.divmod(self.f)
                if r:
                    return FsElement(coeffs, t, self.f)
                qs[k] = q
            coeffs, t = qs, t - 1
        return FsElement(coeffs, t if coeffs else 0, self.f)

    def to_text(self, names=None):
        u = self.normalized()
        if not u.coeffs:
            return "0"
        parts = []
        for k in sorted(u.coeffs, reverse=True):
            p = u.coeffs[k].to_text(names)
            s = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            parts.append(f"({p})*{s}" if s else f"({p})")
        body = " + ".join(parts)
        den = "" if u.t == 0 else f" / ({self.f.to_text(names)})^{u.t}"
        return f"[{body}]{den} * f^s"

    def __repr__(self):
        return f"FsElement({self.to_text()})"


def fs_act(delta: WeylOperator, u: FsElement) -> FsElement:
    """delta . a(s) f^s = sum_i binom(s, i) f^-i delta^(i)(a(s)) f^s, s central."""
    f = u.f
    d = delta.lift() if not delta.sparam else delta
    chain = bracket_sequence(d, f)
    out = FsElement({}, 0, f)
    for i, di in enumerate(chain):
        parts = di.s_coefficients()
        acc = FsElement({}, 0, f)
        for m, op in parts.items():
            for k, num in u.coeffs.items():
                img = localize_act(op, LocalizedElement(num, u.t, f, normalize=False))
                acc = acc + FsElement({m + k: img.num}, img.t, f)
        acc = FsElement(acc.coeffs, acc.t + i, f).times_spoly(binom_s(i))
        out = out + acc
    return out


def specialize(u: FsElement, t: int) -> LocalizedElement:
    """Substitute s -> t and fold f^t into the fraction."""
    f = u.f
    num = f.zero()
    for k, p in u.coeffs.items():
        num = num + p.scale(mpq(t) ** k)
    return LocalizedElement(num, u.t - t, f)


# ---------------------------------------------------------------------------


@dataclass
class BSResult:
    b: SPoly
    delta: WeylOperator
    verified: bool
    search_minimal: bool
    bounds: dict
    checked_t: list = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self, names=None):
        return {"b": self.b.to_text(), "b_coeffs": self.b.to_json(),
                "delta": self.delta.to_text(names), "verified": self.verified,
                "search_minimal": self.search_minimal, "search_bounds": self.bounds,
                "checked_t": self.checked_t}


def verify_functional_equation(delta: WeylOperator, b: SPoly, f: Poly, ts) -> bool:
    """apply(delta|s=t, f^(t+1)) == b(t) f^t for each integer t >= 0."""
    for t in ts:
        lhs = apply(delta.specialize(t), f ** (t + 1))
        if lhs != (f ** t).scale(b(t)):
            return False
    return True


def _column(op: WeylOperator, f: Poly, M: int):
    """s-poly * x-poly of  f^M * (op . f f^s) / f^s, keyed (s-power, x-exps)."""
    img = fs_act(op, FsElement.fs(f, f))
    vec = {}
    shift = f ** (M - img.t)
    for k, p in img.coeffs.items():
        for e, c in (p * shift).terms.items():
            vec[(k,) + e] = c
    return vec


def bs_solve(f: Poly, level: int, s_degree: int, b_degree_max: int, group=None,
             spec: WeightedRingSpec | None = None, verify_upto: int = 6) -> BSResult | None:
    """Search for monic b(s) and delta in the level-N space with delta . f f^s = b(s) f^s.

    delta ranges over the level-N Bernstein basis (or its G-invariant part)
    tensored with 1, s, ..., s^K; b runs through degrees 0..b_degree_max and
    the first solvable degree is returned.  Minimality is relative to these
    bounds only.
    """
    start = time.perf_counter()
    if not f:
        raise ValueError("f must be nonzero")
    n = f.nvars
    spec = spec or WeightedRingSpec(n)
    if group is not None:
        from .invariants import invariant_bf_basis, is_invariant_poly
        if not is_invariant_poly(group, f):
            raise ValueError("f is not invariant under the group")
        basis = invariant_bf_basis(group, spec, level).basis
    else:
        basis = [WeylOperator({k: 1}, n) for k in bf_basis(spec, level).keys]
    M = max(1, max((op.order() for op in basis), default=0))
    fM = f ** M
    ech = Echelon(track=True)
    labels = []
    for op in basis:
        col = _column(op, f, M)
        for k in range(s_degree + 1):
            ech.add({(key[0] + k,) + key[1:]: c for key, c in col.items()}, label=len(labels))
            labels.append(("op", op, k))
    bounds = {"level": level, "s_degree": s_degree, "b_degree_max": b_degree_max,
              "space": "invariant" if group is not None else "full"}
    for db in range(b_degree_max + 1):
        target = {(db,) + e: c for e, c in fM.terms.items()}
        sol = ech.express(target)
        if sol is not None:
            bco = [mpq(0)] * db + [mpq(1)]
            delta = WeylOperator.zero(n, True)
            for lab, c in sorted(sol.items()):
                kind = labels[lab]
                if kind[0] == "op":
                    delta = delta + kind[1].lift().scale(SPoly([0] * kind[2] + [c]))
                else:
                    bco[kind[1]] += c
            b = SPoly(bco)
            ts = list(range(0, max(verify_upto, s_degree + max(delta.order(), 0) + 1) + 1))
            ok = verify_functional_equation(delta, b, f, ts)
            return BSResult(b, delta, ok, True, bounds, ts, time.perf_counter() - start)
        ech.add({(db,) + e: -c for e, c in fM.terms.items()}, label=len(labels))
        labels.append(("b", db))
    return None


# ---------------------------------------------------------------------------


def holonomic_growth_report(module: str, spec: WeightedRingSpec, i_max: int, f: Poly | None = None,
                            group=None, window: int | None = None) -> dict:
    """Dimension sequence and growth fit for R (or R^G) and for R_f.

    For R_f the filtration is G~_j = f^(-Cj) [R]_{<= j(C a + 1)} where a is the
    filtration level of f and C comes from the order-domination constant.
    """
    window = window or max(4, (i_max + 1) // 2)
    if module == "R":
        if group is None:
            seq = r_filtration_seq(spec, i_max)
        else:
            from .invariants import invariant_polys
            acc, vals = 0, []
            for d in range(i_max + 1):
                acc += len(invariant_polys(group, spec.weights, d))
                vals.append(acc)
            seq = DimSequence(vals, "counted")
        params = {}
    elif module == "R_f":
        if f is None or not f.is_homogeneous(spec.weights):
            raise ValueError("R_f growth needs a homogeneous f")
        a = f.degree(spec.weights)
        C = eps_and_order_domination(spec, window=4)["C"]
        vals = []
        from .bernstein import _enumerate
        for j in range(i_max + 1):
            top = j * (C * a + 1)
            e = Echelon()
            for al in _enumerate([mpq(v) for v in spec.weights], mpq(top)):
                # common denominator f^(Cj): numerators are the monomials themselves
                el = LocalizedElement(Poly({al: 1}, spec.n), C * j, f)
                e.add(el.mul_f_power(C * j).num.terms)
            vals.append(e.rank())
        seq = DimSequence(vals, "counted")
        params = {"C": C, "f_level": a}
    else:
        raise ValueError("module must be 'R' or 'R_f'")
    est = dim_estimate(seq, window)
    return {"module": module, "dims": seq.values, "estimate": est.to_dict(), "params": params,
            "dim_R": spec.n, "matches_dim_R": bool(est.stable and est.degree == spec.n)}
