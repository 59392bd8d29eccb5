"""Exact scalars and sparse polynomials.

Rationals are ``gmpy2.mpq`` (always in lowest terms).  Polynomials over a
prime field F_p store plain ints in ``[0, p)``.  ``SPoly`` is a dense
univariate polynomial over Q in the formal variable ``s``.
"""

from __future__ import annotations

import json
import re
from math import factorial

from gmpy2 import mpq

EXP_LIMIT = 2 ** 31
MAX_PRIME = 2 ** 16


class DivisionNotExact(ArithmeticError):
    pass


def Q(x) -> mpq:
    """Coerce int / str / Fraction / mpq to an exact rational."""
    if isinstance(x, str):
        return mpq(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p):
    if p is None:
        return None
    p = int(p)
    if not is_prime(p) or p >= MAX_PRIME:
        raise ValueError(f"characteristic must be a prime below {MAX_PRIME}, got {p}")
    return p


def reduce_scalar(c, p):
    """Normalize a scalar into the coefficient field (Q if p is None)."""
    if p is None:
        return Q(c)
    c = Q(c)
    num, den = int(c.numerator), int(c.denominator)
    if den % p == 0:
        raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
    return num * pow(den, -1, p) % p


def scalar_str(c) -> str:
    return str(c)


def _check_exps(e):
    for a in e:
        if a < 0:
            raise ValueError(f"negative exponent in {e}")
        if a >= EXP_LIMIT:
            raise OverflowError(f"exponent {a} exceeds 2^31")


# ---------------------------------------------------------------------------
# text form shared by polynomials and operators


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\)))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        pos = m.end()
        kinds = ("int", "name", "^", "*", "/", "+", "-", "(", ")")
        for kind, g in zip(kinds, m.groups()):
            if g is not None:
                out.append((kind, g))
                break
    return out


def parse_terms(text: str, names: list[str]) -> list[tuple[mpq, tuple[int, ...]]]:
    """Parse ``c*v1^a1*... + ...`` into (coefficient, exponent vector) pairs.

    Coefficients may be written ``3``, ``3/4``, ``(3/4)`` or ``-3/4``.
    Repeated variables in a term multiply (commutatively); callers that care
    about operator ordering must write terms in normal form.
    """
    index = {nm: k for k, nm in enumerate(names)}
    toks = _tokenize(text)
    pos = 0
    terms = []

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def number():
        nonlocal pos
        kind, val = peek()
        if kind == "(":
            pos += 1
            sign = 1
            if peek()[0] == "-":
                sign = -1
                pos += 1
            c = number()
            if peek()[0] != ")":
                raise ValueError(f"unbalanced parenthesis in {text!r}")
            pos += 1
            return sign * c
        if kind != "int":
            raise ValueError(f"expected number in {text!r}")
        pos += 1
        c = mpq(int(val))
        if peek()[0] == "/":
            pos += 1
            k2, v2 = peek()
            if k2 != "int":
                raise ValueError(f"bad fraction in {text!r}")
            pos += 1
            c = c / int(v2)
        return c

    if not toks:
        return []
    sign = 1
    if peek()[0] in "+-":
        sign = -1 if peek()[0] == "-" else 1
        pos += 1
    while True:
        coeff = mpq(sign)
        exps = [0] * len(names)
        first = True
        while True:
            kind, val = peek()
            if kind in ("int", "("):
                coeff *= number()
            elif kind == "name":
                if val not in index:
                    raise ValueError(f"unknown variable {val!r}; expected one of {names}")
                pos += 1
                e = 1
                if peek()[0] == "^":
                    pos += 1
                    k2, v2 = peek()
                    if k2 != "int":
                        raise ValueError(f"bad exponent in {text!r}")
                    pos += 1
                    e = int(v2)
                exps[index[val]] += e
            else:
                if first:
                    raise ValueError(f"empty term in {text!r}")
                break
            first = False
            if peek()[0] == "*":
                pos += 1
                continue
            break
        terms.append((coeff, tuple(exps)))
        kind, _ = peek()
        if kind is None:
            break
        if kind not in "+-":
            raise ValueError(f"unexpected token {toks[pos][1]!r} in {text!r}")
        sign = -1 if kind == "-" else 1
        pos += 1
    return terms


def format_term(c, exps, names) -> str:
    factors = []
    for nm, e in zip(names, exps):
        if e == 1:
            factors.append(nm)
        elif e > 1:
            factors.append(f"{nm}^{e}")
    if not factors:
        return str(c)
    if c == 1:
        return "*".join(factors)
    if c == -1:
        return "-" + "*".join(factors)
    return str(c) + "*" + "*".join(factors)


def join_terms(pieces) -> str:
    if not pieces:
        return "0"
    out = pieces[0]
    for t in pieces[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def default_names(n):
    return [f"x{k + 1}" for k in range(n)]


def infer_names(text: str) -> list[str]:
    """Variable names appearing in a polynomial string, ordered x1<x2<... or alphabetically."""
    found = sorted(set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text)))
    if found and all(re.fullmatch(r"x\d+", nm) for nm in found):
        top = max(int(nm[1:]) for nm in found)
        return default_names(top)
    return found


# ---------------------------------------------------------------------------


class Poly:
    """Sparse polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("terms", "nvars", "p")

    def __init__(self, terms=None, nvars=1, p=None, _trusted=False):
        self.nvars = nvars
        self.p = p
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            _check_exps(e)
            c = reduce_scalar(c, p)
            if c:
                c = clean.get(e, 0) + c
                if p is not None:
                    c %= p
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        self.terms = clean

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, nvars, p=None):
        return cls({(0,) * nvars: c}, nvars, p)

    @classmethod
    def var(cls, j, nvars, p=None):
        e = [0] * nvars
        e[j] = 1
        return cls({tuple(e): 1}, nvars, p)

    @classmethod
    def monomial(cls, exps, c=1, p=None):
        return cls({tuple(exps): c}, len(exps), p)

    def _new(self, terms):
        return Poly(terms, self.nvars, self.p, _trusted=True)

    def zero(self):
        return self._new({})

    def one(self):
        return self._new({(0,) * self.nvars: self._one()})

    def _one(self):
        return 1 if self.p is not None else mpq(1)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars or other.p != self.p:
                raise ValueError("polynomials live in different rings")
            return other
        return Poly.const(other, self.nvars, self.p)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p is not None:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        if self.p is None:
            return self._new({e: -c for e, c in self.terms.items()})
        return self._new({e: (-c) % self.p for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = reduce_scalar(c, self.p)
        if not c:
            return self.zero()
        if self.p is None:
            return self._new({e: v * c for e, v in self.terms.items()})
        return self._new({e: v * c % self.p for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        out = {}
        p = self.p
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if p is None:
            out = {e: c for e, c in out.items() if c}
        else:
            out = {e: c % p for e, c in out.items() if c % p}
        for e in out:
            _check_exps(e)
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.p == other.p and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self.to_text()!r})"

    # structure --------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self, weights=None) -> int:
        if not self.terms:
            return -1
        w = weights or (1,) * self.nvars
        return max(sum(a * b for a, b in zip(e, w)) for e in self.terms)

    def min_degree(self, weights=None) -> int:
        if not self.terms:
            return -1
        w = weights or (1,) * self.nvars
        return min(sum(a * b for a, b in zip(e, w)) for e in self.terms)

    def is_homogeneous(self, weights=None) -> bool:
        return self.degree(weights) == self.min_degree(weights)

    def homogeneous_part(self, d, weights=None):
        w = weights or (1,) * self.nvars
        return self._new({e: c for e, c in self.terms.items()
                          if sum(a * b for a, b in zip(e, w)) == d})

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def diff(self, j: int, k: int = 1):
        """k-th partial derivative in variable j (ordinary, not divided)."""
        out = {}
        for e, c in self.terms.items():
            a = e[j]
            if a < k:
                continue
            f = 1
            for t in range(k):
                f *= a - t
            v = c * f
            if self.p is not None:
                v %= self.p
            if v:
                e2 = list(e)
                e2[j] = a - k
                out[tuple(e2)] = v
        return self._new(out)

    def evaluate(self, point):
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, a in zip(point, e):
                t *= x ** a
            total += t
        if self.p is not None:
            return total % self.p
        return total

    def leading(self):
        """Lex-largest (exponent, coefficient)."""
        e = max(self.terms)
        return e, self.terms[e]

    def divmod(self, other):
        """Multivariate division by a single divisor in lex order."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        le, lc = other.leading()
        inv = pow(lc, -1, self.p) if self.p is not None else 1 / lc
        rem = dict(self.terms)
        quo = {}
        rest = {}
        p = self.p
        while rem:
            e = max(rem)
            c = rem.pop(e)
            if all(a >= b for a, b in zip(e, le)):
                qe = tuple(a - b for a, b in zip(e, le))
                qc = c * inv
                if p is not None:
                    qc %= p
                quo[qe] = qc
                for oe, oc in other.terms.items():
                    if oe == le:
                        continue
                    te = tuple(a + b for a, b in zip(qe, oe))
                    v = rem.get(te, 0) - qc * oc
                    if p is not None:
                        v %= p
                    if v:
                        rem[te] = v
                    else:
                        rem.pop(te, None)
            else:
                rest[e] = c
        return self._new(quo), self._new(rest)

    def exact_divide(self, other):
        q, r = self.divmod(other)
        if r.terms:
            raise DivisionNotExact(f"{other.to_text()} does not divide {self.to_text()}")
        return q

    def divides(self, other) -> bool:
        """True iff self divides other."""
        return not other.divmod(self)[1].terms

    def map_linear(self, matrix):
        """Substitute x_i -> sum_j matrix[i][j] * x_j."""
        n = self.nvars
        images = [Poly({tuple(1 if k == j else 0 for k in range(n)): matrix[i][j]
                        for j in range(n) if matrix[i][j]}, n, self.p) for i in range(n)]
        out = self.zero()
        cache = {}
        for e, c in self.terms.items():
            t = Poly.const(c, n, self.p)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in cache:
                        cache[key] = images[i] ** a
                    t = t * cache[key]
            out = out + t
        return out

    def sorted_terms(self):
        """Terms in decreasing total degree, then decreasing lex (canonical order)."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-a for a in t[0])))

    # serialization ----------------------------------------------------
    def to_text(self, names=None) -> str:
        names = names or default_names(self.nvars)
        return join_terms([format_term(c, e, names) for e, c in self.sorted_terms()])

    @classmethod
    def from_text(cls, text, names=None, p=None):
        names = names or infer_names(text)
        terms = {}
        for c, e in parse_terms(text, names):
            terms[e] = terms.get(e, 0) + c
        return cls(terms, len(names), p)

    def to_json(self):
        return [{"coeff": str(c), "exps": list(e)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, nvars=None, p=None):
        if isinstance(data, str):
            data = json.loads(data)
        if nvars is None:
            nvars = len(data[0]["exps"]) if data else 1
        return cls({tuple(t["exps"]): Q(t["coeff"]) for t in data}, nvars, p)


# ---------------------------------------------------------------------------


class SPoly:
    """Dense polynomial over Q in the central indeterminate s (low degree first)."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Q(a) for a in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def s(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, a):
        return cls((a,))

    @staticmethod
    def _wrap(x):
        return x if isinstance(x, SPoly) else SPoly((x,))

    def degree(self):
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, SPoly):
            return self.c == other.c
        try:
            return self.c == SPoly((other,)).c
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        o = self._wrap(other).c
        a = self.c
        m = max(len(a), len(o))
        return SPoly([(a[k] if k < len(a) else 0) + (o[k] if k < len(o) else 0) for k in range(m)])

    __radd__ = __add__

    def __neg__(self):
        return SPoly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, SPoly):
            other = Q(other)
            return SPoly([a * other for a in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return SPoly()
        out = [mpq(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return SPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        r = SPoly((1,))
        for _ in range(k):
            r = r * self
        return r

    def __call__(self, t):
        acc = mpq(0)
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def monic(self):
        if not self.c:
            return self
        return self * (1 / self.c[-1])

    def to_text(self) -> str:
        pieces = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a:
                pieces.append(format_term(a, (k,), ["s"]))
        return join_terms(pieces)

    @classmethod
    def from_text(cls, text):
        terms = parse_terms(text, ["s"])
        deg = max((e[0] for _, e in terms), default=0)
        c = [mpq(0)] * (deg + 1)
        for a, e in terms:
            c[e[0]] += a
        return cls(c)

    def to_json(self):
        return [str(a) for a in self.c]

    def __repr__(self):
        return f"SPoly({self.to_text()!r})"


def binom_s(i: int) -> SPoly:
    """s(s-1)...(s-i+1)/i! as a polynomial in s."""
    if i < 0:
        raise ValueError("binom_s needs i >= 0")
    r = SPoly((1,))
    for t in range(i):
        r = r * SPoly((-t, 1))
    return r * mpq(1, factorial(i))


def binom_int(j: int, i: int):
    """Generalized binomial j(j-1)...(j-i+1)/i! for any integer j."""
    if i < 0:
        return 0
    num = 1
    for t in range(i):
        num *= j - t
    return num // factorial(i)


def poly_arith(op: str, a: Poly, b):
    """Dispatcher over add / mul / scalar-mul / exact-divide."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scalar-mul":
        return a.scale(b)
    if op == "exact-divide":
        return a.exact_divide(b)
    raise ValueError(f"unknown operation {op!r}")
