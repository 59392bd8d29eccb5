"""Prime characteristic: divided powers, Frobenius powers, splitting ideals, Veronese FFRT.

Splitting ideals are computed through the colon criterion
    r in I_e(S/I)  <=>  r * (I^[q] : I)  inside  m^[q],   q = p^e,
for monomial I and principal I = (f), where (f^q : f) = (f^(q-1)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .coeff import Poly, check_prime
from .linalg import Echelon


def lucas_binom(m: int, k: int, p: int) -> int:
    """binom(m, k) mod p by Lucas' theorem."""
    if k < 0 or k > m:
        return 0
    out = 1
    while m or k:
        a, b = m % p, k % p
        if b > a:
            return 0
        num = den = 1
        for t in range(b):
            num = num * (a - t) % p
            den = den * (t + 1) % p
        out = out * num * pow(den, -1, p) % p
        m //= p
        k //= p
    return out


def _mbinom(ms, ks, p):
    out = 1
    for m, k in zip(ms, ks):
        out = out * lucas_binom(m, k, p) % p
        if not out:
            return 0
    return out


class DividedPowerOperator:
    """sum c x^alpha D^(beta) over F_p, keys alpha + beta."""

    __slots__ = ("terms", "n", "p")

    def __init__(self, terms, n, p):
        check_prime(p)
        self.n, self.p = n, p
        self.terms = {tuple(k): c % p for k, c in terms.items() if c % p}

    @classmethod
    def monomial(cls, alpha, beta, p, c=1):
        return cls({tuple(alpha) + tuple(beta): c}, len(alpha), p)

    @classmethod
    def x_power(cls, j, k, n, p):
        a = [0] * n
        a[j] = k
        return cls.monomial(a, [0] * n, p)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return DividedPowerOperator(out, self.n, self.p)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return DividedPowerOperator({k: v * c for k, v in self.terms.items()}, self.n, self.p)

    def __eq__(self, other):
        return isinstance(other, DividedPowerOperator) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self):
        n = self.n
        return max((sum(k[n:]) for k in self.terms), default=-1)

    def to_text(self):
        if not self.terms:
            return "0"
        n = self.n
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            fac = [f"x{j + 1}^{k[j]}" if k[j] > 1 else f"x{j + 1}" for j in range(n) if k[j]]
            fac += [f"D{j + 1}^({k[n + j]})" for j in range(n) if k[n + j]]
            body = "*".join(fac)
            parts.append(body if c == 1 and body else (f"{c}*{body}" if body else str(c)))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text, n, p):
        """Terms like '3*x1^2*D1^(4)*D2^(1)' joined by '+'."""
        terms = {}
        for raw in text.replace(" ", "").split("+"):
            if not raw:
                continue
            c, a, b = 1, [0] * n, [0] * n
            for fac in raw.split("*"):
                if fac.startswith("D"):
                    j, e = fac[1:].split("^(")
                    b[int(j) - 1] += int(e.rstrip(")"))
                elif fac.startswith("d"):
                    j, _, e = fac[1:].partition("^")
                    # plain derivative d_j^k = k! D_j^(k)
                    k = int(e or 1)
                    fact = 1
                    for t in range(2, k + 1):
                        fact *= t
                    c *= fact
                    b[int(j) - 1] += k
                elif fac.startswith("x"):
                    j, _, e = fac[1:].partition("^")
                    a[int(j) - 1] += int(e or 1)
                else:
                    c *= int(fac)
            key = tuple(a) + tuple(b)
            terms[key] = terms.get(key, 0) + c
        return cls(terms, n, p)


def dp_mul(a: DividedPowerOperator, b: DividedPowerOperator) -> DividedPowerOperator:
    """Normal form of a*b using D^(u) x^g = sum_k binom(g,k) x^(g-k) D^(u-k)
    and D^(u) D^(v) = binom(u+v, u) D^(u+v)."""
    if a.p != b.p or a.n != b.n:
        raise ValueError("operators over different rings")
    n, p = a.n, a.p
    out = {}
    for ka, ca in a.terms.items():
        al, be = ka[:n], ka[n:]
        for kb, cb in b.terms.items():
            ga, de = kb[:n], kb[n:]
            ranges = [range(min(be[j], ga[j]) + 1) for j in range(n)]
            for k in product(*ranges):
                c = _mbinom(ga, k, p)
                if not c:
                    continue
                rest = [be[j] - k[j] for j in range(n)]
                dd = [rest[j] + de[j] for j in range(n)]
                c = c * _mbinom(dd, rest, p) % p
                if not c:
                    continue
                key = tuple(al[j] + ga[j] - k[j] for j in range(n)) + tuple(dd)
                out[key] = (out.get(key, 0) + ca * cb * c) % p
    return DividedPowerOperator(out, n, p)


def dp_apply(delta: DividedPowerOperator, f: Poly) -> Poly:
    """x^a D^(b) sends x^m to binom(m, b) x^(a + m - b)."""
    n, p = delta.n, delta.p
    if f.p != p or f.nvars != n:
        raise ValueError("polynomial lives in a different ring")
    out = {}
    for k, c in delta.terms.items():
        al, be = k[:n], k[n:]
        for m, fc in f.terms.items():
            if any(mi < bi for mi, bi in zip(m, be)):
                continue
            bc = _mbinom(m, be, p)
            if bc:
                e = tuple(al[j] + m[j] - be[j] for j in range(n))
                out[e] = (out.get(e, 0) + c * fc * bc) % p
    return Poly(out, n, p)


def _ceil_log(v, p):
    """Least e with v <= p^e."""
    e, q = 0, 1
    while q < v:
        q *= p
        e += 1
    return e


def level_by_beta(delta: DividedPowerOperator) -> int:
    """ceil(log_p(max beta_j + 1))."""
    n = delta.n
    mb = max((max(k[n:], default=0) for k in delta.terms), default=0)
    return _ceil_log(mb + 1, delta.p)


def commutes_with_frobenius_powers(delta: DividedPowerOperator, e: int) -> bool:
    n, p = delta.n, delta.p
    for j in range(n):
        xq = DividedPowerOperator.x_power(j, p ** e, n, p)
        if dp_mul(delta, xq) != dp_mul(xq, delta):
            return False
    return True


def level_of(delta: DividedPowerOperator) -> int:
    """Least e with delta linear over S^(p^e); cross-checked against the beta bound."""
    e = 0
    while not commutes_with_frobenius_powers(delta, e):
        e += 1
    if e != level_by_beta(delta):
        raise ArithmeticError("level characterizations disagree")
    return e


def containment_checks(p: int, i_max: int = 8, n_max: int = 2, e_max: int = 2) -> dict:
    """Order i lies in level ceil(log_p(i+1)); level e lies in order n(p^e - 1)."""
    fails = []
    count2 = count3 = 0
    for n in range(1, n_max + 1):
        for i in range(i_max + 1):
            for beta in product(range(i + 1), repeat=n):
                if sum(beta) > i:
                    continue
                op = DividedPowerOperator.monomial([0] * n, beta, p)
                count2 += 1
                if level_of(op) > _ceil_log(i + 1, p):
                    fails.append(("order-in-level", n, i, beta))
        for e in range(e_max + 1):
            for beta in product(range(p ** e), repeat=n):
                op = DividedPowerOperator.monomial([0] * n, beta, p)
                count3 += 1
                if level_of(op) > e or op.order() > n * (p ** e - 1):
                    fails.append(("level-in-order", n, e, beta))
    return {"p": p, "checked_order_in_level": count2, "checked_level_in_order": count3,
            "passed": not fails, "failures": fails[:5]}


# ---------------------------------------------------------------------------


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


class MonomialIdeal:
    """Monomial ideal by minimal generators (exponent tuples)."""

    def __init__(self, gens, n):
        self.n = n
        gens = sorted(set(tuple(g) for g in gens), key=lambda g: (sum(g), g))
        mins = []
        for g in gens:
            if not any(_divides(h, g) for h in mins):
                mins.append(g)
        self.gens = mins

    @classmethod
    def maximal(cls, n):
        return cls([tuple(1 if i == j else 0 for i in range(n)) for j in range(n)], n)

    @classmethod
    def unit(cls, n):
        return cls([(0,) * n], n)

    def is_unit(self):
        return self.gens == [(0,) * self.n]

    def contains_monomial(self, e):
        return any(_divides(g, e) for g in self.gens)

    def contains(self, f: Poly):
        return all(self.contains_monomial(e) for e in f.terms)

    def frobenius(self, q):
        return MonomialIdeal([tuple(q * a for a in g) for g in self.gens], self.n)

    def colon_monomial(self, u):
        return MonomialIdeal([tuple(max(a - b, 0) for a, b in zip(g, u)) for g in self.gens], self.n)

    def intersect(self, other):
        return MonomialIdeal([tuple(max(a, b) for a, b in zip(g, h))
                              for g in self.gens for h in other.gens], self.n)

    def colon(self, other):
        out = MonomialIdeal.unit(self.n)
        for u in other.gens:
            out = out.intersect(self.colon_monomial(u))
        return out

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and self.gens == other.gens

    def to_text(self, names=None):
        names = names or [f"x{j + 1}" for j in range(self.n)]
        out = []
        for g in self.gens:
            fac = [nm if a == 1 else f"{nm}^{a}" for nm, a in zip(names, g) if a]
            out.append("*".join(fac) or "1")
        return "(" + ", ".join(out) + ")"


def frobenius_power(gens, e: int, p: int):
    """Generator-wise p^e-th powers; monomial ideals stay monomial."""
    q = p ** e
    if isinstance(gens, MonomialIdeal):
        return gens.frobenius(q)
    return [g ** q for g in gens]


# ---------------------------------------------------------------------------


@dataclass
class Presentation:
    """S/I with S = F_p[x_1..x_n] and I monomial (gens) or principal (f)."""
    n: int
    p: int
    kind: str                 # "monomial" or "principal"
    monomials: list = field(default_factory=list)
    f: Poly | None = None
    names: list | None = None
    name: str = ""

    def __post_init__(self):
        check_prime(self.p)
        if self.kind not in ("monomial", "principal"):
            raise ValueError("presentation must be monomial or principal")
        if self.kind == "principal" and (self.f is None or not self.f):
            raise ValueError("principal presentation needs a nonzero f")
        self.names = self.names or [f"x{j + 1}" for j in range(self.n)]

    def ideal_contains(self, g: Poly) -> bool:
        if self.kind == "monomial":
            return MonomialIdeal(self.monomials, self.n).contains(g) if self.monomials else not g
        return self.f.divides(g)

    def to_dict(self):
        d = {"n": self.n, "p": self.p, "kind": self.kind, "name": self.name, "names": self.names}
        if self.kind == "monomial":
            d["monomials"] = [list(m) for m in self.monomials]
        else:
            d["f"] = self.f.to_text(self.names)
        return d

    @classmethod
    def from_dict(cls, d):
        n, p = int(d["n"]), int(d["p"])
        names = d.get("names")
        if d["kind"] == "principal":
            f = Poly.from_text(d["f"], names, p=p)
            return cls(n, p, "principal", f=f, names=names, name=d.get("name", ""))
        return cls(n, p, "monomial", [tuple(m) for m in d.get("monomials", [])], names=names,
                   name=d.get("name", ""))


def named_ring(name: str) -> Presentation:
    if name == "xy-hypersurface-p2":
        return Presentation(2, 2, "monomial", [(1, 1)], names=["x", "y"], name=name)
    if name == "poly-ring-p2":
        return Presentation(2, 2, "monomial", [], names=["x", "y"], name=name)
    if name == "quadric-p3":
        names = ["a", "b", "c"]
        return Presentation(3, 3, "principal", f=Poly.from_text("b^2 - a*c", names, p=3),
                            names=names, name=name)
    if name == "cusp-p5":
        names = ["x", "y"]
        return Presentation(2, 5, "principal", f=Poly.from_text("x^2 + y^3", names, p=5),
                            names=names, name=name)
    if name == "eg62-p2":
        names = ["s", "t", "u", "v", "w", "x", "y", "z"]
        f = Poly.from_text("s*u^2*x^2 + s*v^2*y^2 + t*u*x*v*y + t*w^2*z^2", names, p=2)
        return Presentation(8, 2, "principal", f=f, names=names, name=name)
    raise ValueError(f"unknown ring fixture {name!r}")


RING_FIXTURES = ("xy-hypersurface-p2", "poly-ring-p2", "quadric-p3", "cusp-p5", "eg62-p2")


def _box_filter(terms, q):
    return {e: c for e, c in terms.items() if max(e) < q}


class SplittingIdeal:
    """Preimage J_e of I_e(R) in S:  J_e = K_e + m^[q], K_e spanned by box polynomials."""

    def __init__(self, pres: Presentation, e: int):
        self.pres, self.e = pres, e
        p, n = pres.p, pres.n
        self.q = q = p ** e
        if pres.kind == "monomial":
            I = MonomialIdeal(pres.monomials, n)
            colon = I.frobenius(q).colon(I) if pres.monomials else MonomialIdeal.unit(n)
            self.colon_gens = [Poly({g: 1}, n, p) for g in colon.gens]
            J = MonomialIdeal.maximal(n).frobenius(q).colon(colon)
            self.monomial = J
            self.kbasis = [Poly({g: 1}, n, p) for g in product(range(q), repeat=n)
                           if J.contains_monomial(g)]
        else:
            self.colon_gens = [pres.f ** (q - 1)]
            self.monomial = None
            self.kbasis = self._kernel()

    def _kernel(self):
        """Box polynomials r with r * f^(q-1) free of box monomials, by connected blocks."""
        p, n, q = self.pres.p, self.pres.n, self.q
        u = self.colon_gens[0]
        shifts = list(u.terms.items())
        box = list(product(range(q), repeat=n))
        parent = {g: g for g in box}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        cols = {}
        for g in box:
            col = {}
            for s, c in shifts:
                t = tuple(a + b for a, b in zip(g, s))
                if max(t) < q:
                    col[t] = c
            cols[g] = col
        owner = {}
        for g, col in cols.items():
            for t in col:
                if t in owner:
                    ra, rb = find(owner[t]), find(g)
                    if ra != rb:
                        parent[ra] = rb
                else:
                    owner[t] = g
        blocks = {}
        for g in box:
            blocks.setdefault(find(g), []).append(g)
        out = []
        for root in sorted(blocks):
            members = sorted(blocks[root])
            ech = Echelon(p, track=True)
            for idx, g in enumerate(members):
                ech.add(cols[g], label=idx)
            for combo in ech.kernel:
                out.append(Poly({members[i]: c for i, c in combo.items()}, n, p))
        out.sort(key=lambda r: (r.degree(), sorted(r.terms)))
        return out

    def generators(self):
        n, p, q = self.pres.n, self.pres.p, self.q
        if self.monomial is not None:
            return [Poly({g: 1}, n, p) for g in self.monomial.gens]
        brackets = [Poly({tuple(q if i == j else 0 for i in range(n)): 1}, n, p) for j in range(n)]
        return self.kbasis + brackets

    def contains(self, g: Poly) -> bool:
        q = self.q
        for u in self.colon_gens:
            if _box_filter((g * u).terms, q):
                return False
        return True

    def contains_ideal(self, other: "SplittingIdeal") -> bool:
        if self.q > other.q:
            return all(self.contains(g) for g in other.generators())
        # generators of other beyond self's box lie in m^[q] already
        q = self.q
        for g in other.generators():
            g = Poly(_box_filter(g.terms, q), g.nvars, g.p)
            if g and not self.contains(g):
                return False
        return True

    def is_unit(self):
        return self.contains(Poly.const(1, self.pres.n, self.pres.p))

    def inside_maximal(self):
        return all((0,) * self.pres.n not in g.terms for g in self.generators())

    def summary(self, limit=12):
        gens = self.generators()
        names = self.pres.names
        return {"e": self.e, "q": self.q, "box_dim": len(self.kbasis), "unit": self.is_unit(),
                "generators": [g.to_text(names) for g in gens[:limit]],
                "generator_count": len(gens),
                "classified_above_degree": self.pres.n * (self.q - 1)}


def splitting_ideal(pres: Presentation, e: int) -> SplittingIdeal:
    if e < 0:
        raise ValueError("e must be nonnegative")
    return SplittingIdeal(pres, e)


def in_power_plus_ideal(pres: Presentation, g: Poly, N: int) -> bool:
    """g in m^N + I, tested in S / m^N."""
    trunc = {e: c for e, c in g.terms.items() if sum(e) < N}
    if not trunc:
        return True
    n, p = pres.n, pres.p
    if pres.kind == "monomial":
        I = MonomialIdeal(pres.monomials, n)
        return all(pres.monomials and I.contains_monomial(e) for e in trunc)
    f = pres.f
    ech = Echelon(p)
    for a in product(range(N), repeat=n):
        if sum(a) >= N:
            continue
        row = {e: c for e, c in (Poly({a: 1}, n, p) * f).terms.items() if sum(e) < N}
        if row:
            ech.add(row)
    return ech.contains(trunc)


def _ideal_in_power(pres, J: SplittingIdeal, N: int) -> bool:
    return all(in_power_plus_ideal(pres, g, N) for g in J.generators())


def _ideal_in_I(pres, J: SplittingIdeal) -> bool:
    return all(pres.ideal_contains(g) for g in J.generators())


@dataclass
class SplittingReport:
    ring: dict
    e_max: int
    levels: list
    f_pure: bool
    chain_verified: bool
    strictly_shrinking: list
    witness_a: int | None
    stabilized_nonzero: bool
    verdict: str

    def to_dict(self):
        return {"ring": self.ring, "e_max": self.e_max, "levels": self.levels, "f_pure": self.f_pure,
                "chain_verified": self.chain_verified, "strictly_shrinking": self.strictly_shrinking,
                "witness_a": self.witness_a, "stabilized_nonzero_intersection": self.stabilized_nonzero,
                "verdict": self.verdict}


def f_regularity_scan(pres: Presentation, e_max: int) -> SplittingReport:
    """Compute I_1..I_emax and look for a with I_(a+e) in m^(p^e), or a stable nonzero chain."""
    if e_max < 1:
        raise ValueError("e_max must be at least 1")
    Js = {e: splitting_ideal(pres, e) for e in range(1, e_max + 1)}
    chain = all(Js[e].contains_ideal(Js[e + 1]) for e in range(1, e_max))
    if not chain:
        raise ArithmeticError("splitting chain failed membership verification")
    shrinking = [not Js[e + 1].contains_ideal(Js[e]) for e in range(1, e_max)]
    f_pure = not Js[1].is_unit()
    witness = None
    if f_pure:
        for a in range(1, e_max):
            if all(_ideal_in_power(pres, Js[a + e], pres.p ** e) for e in range(0, e_max - a + 1)):
                witness = a
                break
    stable = (e_max >= 2 and not shrinking[-1] and not _ideal_in_I(pres, Js[e_max]))
    if not f_pure:
        verdict = "not F-pure"
    elif witness is not None:
        verdict = f"F-pure, strongly F-regular evidence (witness a={witness}, window)"
    elif stable:
        verdict = "F-pure, not strongly F-regular (window)"
    else:
        verdict = "F-pure, undecided on window"
    return SplittingReport(pres.to_dict(), e_max, [Js[e].summary() for e in range(1, e_max + 1)],
                           f_pure, chain, shrinking, witness, stable, verdict)


def _trace_constant(u: Poly, q: int) -> int:
    """Constant term of Phi(u), Phi the generator of Hom(S^(1/q), S)."""
    n = u.nvars
    return u.terms.get((q - 1,) * n, 0)


def brute_force_splitting(pres: Presentation, e: int = 1) -> list:
    """Box polynomials r with phi(r^(1/q)) in m for all phi, by enumeration (tiny fields only).

    phi runs over all maps r^(1/q) -> Phi(u r) with u an F_p-combination of
    the box-translates of the colon generators; Phi(u r) lies in m exactly
    when its constant term vanishes.
    """
    p, n = pres.p, pres.n
    q = p ** e
    J = SplittingIdeal(pres, e)
    box = list(product(range(q), repeat=n))
    us = []
    for g in J.colon_gens:
        for mu in box:
            v = Poly({mu: 1}, n, p) * g
            if v:
                us.append(v)
    if p ** len(box) > 1 << 16 or p ** len(us) > 1 << 16:
        raise ValueError("brute force enumeration too large")
    phis = []
    for coeffs in product(range(p), repeat=len(us)):
        u = Poly({}, n, p)
        for c, v in zip(coeffs, us):
            if c:
                u = u + v.scale(c)
        phis.append(u)
    members = []
    for coeffs in product(range(p), repeat=len(box)):
        r = Poly({g: c for g, c in zip(box, coeffs) if c}, n, p)
        if all(_trace_constant(u * r, q) == 0 for u in phis):
            members.append(r)
    return members


def agrees_with_brute_force(pres: Presentation, e: int = 1) -> bool:
    """The colon-criterion box space equals the enumerated one."""
    J = SplittingIdeal(pres, e)
    brute = brute_force_splitting(pres, e)
    ech = Echelon(pres.p)
    for r in J.kbasis:
        ech.add(r.terms)
    if len(brute) != pres.p ** ech.rank():
        return False
    return all(ech.contains(r.terms) for r in brute)


# ---------------------------------------------------------------------------


def veronese_ffrt(n: int, r: int, p: int, e: int) -> dict:
    """Class counts of gamma in [0,q)^n by sum mod r, plus the module labels M_j.

    x^((q nu + gamma)/q) = x^nu x^(gamma/q) lies in R^(1/q) iff r divides
    q|nu| + |gamma|, so gamma contributes the summands M_j with
    q j = -|gamma| mod r (none when gcd(q, r) does not divide |gamma|).
    """
    check_prime(p)
    if n < 1 or r < 1 or e < 0:
        raise ValueError("need n >= 1, r >= 1, e >= 0")
    q = p ** e
    counts = [1] + [0] * (r - 1)
    for _ in range(n):
        nxt = [0] * r
        for j, c in enumerate(counts):
            if c:
                for g in range(q):
                    nxt[(j + g) % r] += c
        counts = nxt
    classes = {j: c for j, c in enumerate(counts) if c}
    g = gcd(q, r)
    modules = {}
    for s, c in classes.items():
        if s % g:
            continue
        for j in range(r):
            if (q * j + s) % r == 0:
                modules[j] = modules.get(j, 0) + c
    return {"n": n, "r": r, "p": p, "e": e, "classes": classes, "total": sum(classes.values()),
            "expected_total": q ** n, "module_multiplicities": dict(sorted(modules.items())),
            "gcd_q_r": g}


def ffrt_class_sets(n, r, p, e_max):
    """Summand classes per e; equal sets across e witness finitely many types."""
    sets = [sorted(veronese_ffrt(n, r, p, e)["module_multiplicities"]) for e in range(1, e_max + 1)]
    return {"per_e": sets, "stable": all(s == sets[0] for s in sets)}
