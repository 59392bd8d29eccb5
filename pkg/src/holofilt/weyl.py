"""Normal-form arithmetic in the Weyl algebra Q<x_1..x_n, d_1..d_n>.

An operator is a dict ``alpha + beta -> coefficient`` (one flat exponent
tuple of length 2n) meaning ``sum c * x^alpha * d^beta`` with every x to the
left of every d.  Coefficients are ``mpq`` or, for the s-parametric variant
``D[s]``, ``SPoly`` (s is central).
"""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import product
from math import comb, factorial

from gmpy2 import mpq

from .coeff import (Poly, Q, SPoly, binom_int, default_names, format_term,
                    join_terms, parse_terms)


@lru_cache(maxsize=None)
def _reorder_coeffs(b: int, g: int):
    """Coefficients of d^b x^g = sum_k c_k x^(g-k) d^(b-k)."""
    return tuple(comb(b, k) * comb(g, k) * factorial(k) for k in range(min(b, g) + 1))


@lru_cache(maxsize=None)
def _falling(a: int, k: int) -> int:
    r = 1
    for t in range(k):
        r *= a - t
    return r


def _is_zero(c):
    return not c


class WeylOperator:
    __slots__ = ("terms", "n", "sparam")

    def __init__(self, terms=None, n=1, sparam=False, _trusted=False):
        self.n = n
        self.sparam = sparam
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(int(a) for a in key)
            if len(key) != 2 * n or min(key, default=0) < 0:
                raise ValueError(f"bad operator exponent {key} for n={n}")
            c = SPoly._wrap(c) if sparam else Q(c)
            c = clean[key] + c if key in clean else c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self.terms = clean

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n, sparam=False):
        return cls({}, n, sparam, _trusted=True)

    @classmethod
    def const(cls, c, n, sparam=False):
        return cls({(0,) * (2 * n): c}, n, sparam)

    @classmethod
    def monomial(cls, alpha, beta, c=1, sparam=False):
        return cls({tuple(alpha) + tuple(beta): c}, len(alpha), sparam)

    @classmethod
    def x(cls, j, n, sparam=False):
        e = [0] * (2 * n)
        e[j] = 1
        return cls({tuple(e): 1}, n, sparam)

    @classmethod
    def d(cls, j, n, sparam=False):
        e = [0] * (2 * n)
        e[n + j] = 1
        return cls({tuple(e): 1}, n, sparam)

    @classmethod
    def s(cls, n):
        return cls({(0,) * (2 * n): SPoly.s()}, n, True)

    @classmethod
    def from_poly(cls, f: Poly, sparam=False):
        n = f.nvars
        return cls({e + (0,) * n: c for e, c in f.terms.items()}, n, sparam)

    def _new(self, terms, sparam=None):
        return WeylOperator(terms, self.n, self.sparam if sparam is None else sparam, _trusted=True)

    def lift(self):
        """View a scalar operator as an s-parametric one."""
        if self.sparam:
            return self
        return self._new({k: SPoly((c,)) for k, c in self.terms.items()}, True)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, WeylOperator):
            if other.n != self.n:
                raise ValueError("operators on different polynomial rings")
            if other.sparam != self.sparam:
                return other.lift() if self.sparam else other
            return other
        if isinstance(other, Poly):
            return WeylOperator.from_poly(other, self.sparam)
        return WeylOperator.const(other, self.n, self.sparam)

    def _both(self, other):
        other = self._coerce(other)
        a = self
        if other.sparam and not a.sparam:
            a = a.lift()
        return a, other

    def __add__(self, other):
        a, b = self._both(other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return a._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        if isinstance(c, SPoly) and not self.sparam:
            return self.lift().scale(c)
        if not isinstance(c, SPoly):
            c = Q(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items() if v * c})

    def __mul__(self, other):
        if not isinstance(other, (WeylOperator, Poly)):
            return self.scale(other)
        a, b = self._both(other)
        return weyl_mul(a, b)

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return weyl_mul(self._coerce(other), self)
        return self.scale(other)

    def __pow__(self, k):
        r = WeylOperator.const(1, self.n, self.sparam)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, WeylOperator):
            if self.n != other.n:
                return False
            if self.sparam == other.sparam:
                return self.terms == other.terms
            a, b = self._both(other)
            return a.terms == b.terms
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"WeylOperator({self.to_text()!r})"

    # structure --------------------------------------------------------
    def order(self) -> int:
        """Maximal total d-exponent; -1 for the zero operator."""
        n = self.n
        return max((sum(k[n:]) for k in self.terms), default=-1)

    def term_degree(self, key, weights=None):
        n = self.n
        w = weights or (1,) * n
        return sum(a * b for a, b in zip(key[:n], w)) - sum(a * b for a, b in zip(key[n:], w))

    def degrees(self, weights=None):
        return {self.term_degree(k, weights) for k in self.terms}

    def is_homogeneous(self, weights=None):
        return len(self.degrees(weights)) <= 1

    def wdegree(self, weights=None):
        """Weighted degree of a homogeneous operator (None if zero)."""
        ds = self.degrees(weights)
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError("operator is not homogeneous")
        return ds.pop()

    def homogeneous_components(self, weights=None):
        comps = {}
        for k, c in self.terms.items():
            comps.setdefault(self.term_degree(k, weights), {})[k] = c
        return {d: self._new(t) for d, t in sorted(comps.items())}

    def poly_part(self):
        """The operator as a Poly, when it has order 0."""
        n = self.n
        if self.order() > 0:
            raise ValueError("operator has positive order")
        return Poly({k[:n]: c for k, c in self.terms.items()}, n)

    def specialize(self, t):
        """Substitute s -> t in an s-parametric operator."""
        if not self.sparam:
            return self
        return WeylOperator({k: c(t) for k, c in self.terms.items()}, self.n)

    def s_coefficients(self):
        """Split sum_k s^k * op_k into {k: op_k} (scalar operators)."""
        out = {}
        for key, c in self.terms.items():
            cs = c.c if self.sparam else (c,)
            for k, a in enumerate(cs):
                if a:
                    out.setdefault(k, {})[key] = a
        return {k: WeylOperator(t, self.n) for k, t in sorted(out.items())}

    def sorted_terms(self):
        n = self.n
        return sorted(self.terms.items(),
                      key=lambda t: (-sum(t[0][n:]), -sum(t[0][:n]), tuple(-a for a in t[0])))

    # serialization ----------------------------------------------------
    def names(self, xnames=None):
        xs = xnames or default_names(self.n)
        ds = [("d" + nm[1:]) if nm.startswith("x") and nm[1:].isdigit() else "d" + nm for nm in xs]
        return xs, ds

    def to_text(self, xnames=None) -> str:
        xs, ds = self.names(xnames)
        pieces = []
        for key, c in self.sorted_terms():
            if self.sparam:
                for k in range(c.degree(), -1, -1):
                    if c.c[k]:
                        pieces.append(format_term(c.c[k], (k,) + key, ["s"] + xs + ds))
            else:
                pieces.append(format_term(c, key, xs + ds))
        return join_terms(pieces)

    @classmethod
    def from_text(cls, text, n=None, xnames=None):
        if xnames is None:
            n = n or 1
            xnames = default_names(n)
        n = len(xnames)
        tmp = cls.zero(n)
        xs, ds = tmp.names(xnames)
        terms = parse_terms(text, ["s"] + xs + ds)
        sparam = any(e[0] for _, e in terms)
        out = {}
        for c, e in terms:
            key = e[1:]
            if sparam:
                v = SPoly([0] * e[0] + [c])
                out[key] = out[key] + v if key in out else v
            else:
                out[key] = out.get(key, 0) + c
        return cls(out, n, sparam)

    def to_json(self):
        n = self.n
        out = []
        for key, c in self.sorted_terms():
            coeff = c.to_json() if self.sparam else str(c)
            out.append({"coeff": coeff, "x": list(key[:n]), "d": list(key[n:])})
        return out

    @classmethod
    def from_json(cls, data, n=None):
        if isinstance(data, str):
            data = json.loads(data)
        if n is None:
            n = len(data[0]["x"]) if data else 1
        sparam = any(isinstance(t["coeff"], list) for t in data)
        out = {}
        for t in data:
            c = SPoly([Q(a) for a in t["coeff"]]) if sparam else Q(t["coeff"])
            out[tuple(t["x"]) + tuple(t["d"])] = c
        return cls(out, n, sparam)


# ---------------------------------------------------------------------------


def weyl_mul(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    """Normal form of a*b via the closed-form reordering d^b x^g."""
    if a.n != b.n:
        raise ValueError("operators on different polynomial rings")
    if a.sparam != b.sparam:
        a, b = a.lift(), b.lift()
    n = a.n
    out = {}
    for k1, c1 in a.terms.items():
        al, be = k1[:n], k1[n:]
        for k2, c2 in b.terms.items():
            ga, de = k2[:n], k2[n:]
            c12 = c1 * c2
            ranges = [_reorder_coeffs(be[j], ga[j]) for j in range(n)]
            if all(len(r) == 1 for r in ranges):
                key = tuple(x + y for x, y in zip(al, ga)) + tuple(x + y for x, y in zip(be, de))
                v = out[key] + c12 if key in out else c12
                out[key] = v
                continue
            for ks in product(*(range(len(r)) for r in ranges)):
                w = 1
                for j, k in enumerate(ks):
                    w *= ranges[j][k]
                key = (tuple(al[j] + ga[j] - ks[j] for j in range(n))
                       + tuple(be[j] + de[j] - ks[j] for j in range(n)))
                v = c12 * w
                out[key] = out[key] + v if key in out else v
    return WeylOperator({k: c for k, c in out.items() if c}, n, a.sparam, _trusted=True)


def apply(delta: WeylOperator, f: Poly) -> Poly:
    """delta(f) for a scalar operator acting on Q[x]."""
    if delta.sparam:
        raise ValueError("apply() needs a scalar operator; specialize s first")
    n = delta.n
    if f.nvars != n:
        raise ValueError("operator and polynomial have different variable counts")
    out = {}
    for key, c in delta.terms.items():
        al, be = key[:n], key[n:]
        for g, fc in f.terms.items():
            w = 1
            for j in range(n):
                if g[j] < be[j]:
                    w = 0
                    break
                w *= _falling(g[j], be[j])
            if not w:
                continue
            e = tuple(g[j] - be[j] + al[j] for j in range(n))
            out[e] = out.get(e, 0) + c * fc * w
    return Poly({e: c for e, c in out.items() if c}, n, f.p, _trusted=True)


def apply_s(delta: WeylOperator, f: Poly):
    """Apply an s-parametric operator to a polynomial: returns {s^k: Poly}."""
    return {k: apply(op, f) for k, op in delta.s_coefficients().items()}


def commutator(a: WeylOperator, b) -> WeylOperator:
    if isinstance(b, Poly):
        b = WeylOperator.from_poly(b, a.sparam)
    return weyl_mul(a, b) - weyl_mul(b, a)


def bracket_chain(delta: WeylOperator, f, i: int) -> WeylOperator:
    """delta^(i) = [delta^(i-1), f] with delta^(0) = delta."""
    if i < 0:
        raise ValueError("bracket index must be nonnegative")
    fop = f if isinstance(f, WeylOperator) else WeylOperator.from_poly(f, delta.sparam)
    out = delta
    for _ in range(i):
        if not out:
            break
        out = commutator(out, fop)
    return out


def bracket_sequence(delta: WeylOperator, f):
    """[delta^(0), ..., delta^(ord delta)] (all later terms vanish)."""
    fop = WeylOperator.from_poly(f, delta.sparam) if isinstance(f, Poly) else f
    seq = [delta]
    while True:
        nxt = commutator(seq[-1], fop)
        if not nxt:
            return seq
        seq.append(nxt)


def verify_commute_identity(delta: WeylOperator, f: Poly, j: int, probes=()) -> bool:
    """Check delta*f^j == sum_i binom(j,i) f^(j-i) delta^(i).

    For j >= 0 the identity is checked in the Weyl algebra.  For j < 0 both
    sides are applied to each probe element of the localization R_f.
    """
    chain = bracket_sequence(delta, f)
    if j >= 0:
        fj = WeylOperator.from_poly(f ** j)
        lhs = weyl_mul(delta, fj)
        rhs = WeylOperator.zero(delta.n)
        for i, di in enumerate(chain):
            if i > j:
                break
            rhs = rhs + weyl_mul(WeylOperator.from_poly(f ** (j - i)), di).scale(comb(j, i))
        return lhs == rhs
    from .dmod import LocalizedElement, localize_act
    if not probes or not f:
        raise ValueError("negative exponents need probes and f != 0")
    for v in probes:
        v = v if isinstance(v, LocalizedElement) else LocalizedElement(v, 0, f)
        lhs = localize_act(delta, v.mul_f_power(j))
        rhs = LocalizedElement(f.zero(), 0, f)
        for i, di in enumerate(chain):
            term = localize_act(di, v).mul_f_power(j - i).scale(binom_int(j, i))
            rhs = rhs + term
        if lhs != rhs:
            return False
    return True


def contragredient(g):
    """Matrix of the induced action on d_1..d_n: d_i -> sum_k (g^-1)_{ik} d_k."""
    return mat_inverse(g)


def group_act_poly(g, f: Poly) -> Poly:
    """(g.f): substitute x_i -> sum_j g_{ji} x_j (columns of g are images of x_i)."""
    gt = [[g[j][i] for j in range(len(g))] for i in range(len(g))]
    return f.map_linear(gt)


def group_act_op(g, delta: WeylOperator) -> WeylOperator:
    """Conjugation action (g.delta)(r) = g.delta(g^-1 . r)."""
    n = delta.n
    g = [[Q(v) for v in row] for row in g]
    if len(g) != n or any(len(r) != n for r in g):
        raise ValueError("matrix size does not match the operator")
    h = mat_inverse(g)
    gt = [[g[j][i] for j in range(n)] for i in range(n)]
    out = {}
    xcache = {}
    dcache = {}
    for key, c in delta.terms.items():
        al, be = key[:n], key[n:]
        if al not in xcache:
            xcache[al] = Poly.monomial(al).map_linear(gt)
        if be not in dcache:
            dcache[be] = Poly.monomial(be).map_linear(h)
        for ea, ca in xcache[al].terms.items():
            for eb, cb in dcache[be].terms.items():
                k = ea + eb
                v = c * (ca * cb)
                out[k] = out[k] + v if k in out else v
    return WeylOperator({k: v for k, v in out.items() if v}, n, delta.sparam, _trusted=True)


def mat_inverse(g):
    """Exact inverse over Q; raises ValueError for singular input."""
    n = len(g)
    a = [[Q(v) for v in row] + [mpq(1) if i == j else mpq(0) for j in range(n)]
         for i, row in enumerate(g)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul(a, b):
    n, m, k = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(m)), mpq(0)) for j in range(k)] for i in range(n)]
