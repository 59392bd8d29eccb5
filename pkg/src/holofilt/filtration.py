"""Dimension sequences, growth estimates and filtration comparisons.

Dimension and multiplicity are asymptotic invariants; everything here works
on a finite window and says so.  A ``GrowthEstimate`` is only ``stable``
when the trailing window is matched exactly by one quasi-polynomial.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import factorial
from typing import Callable

import gmpy2
from gmpy2 import mpq

from .coeff import Q
from .linalg import Echelon

MAX_PERIOD = 6


@dataclass
class DimSequence:
    values: list
    provenance: str = "counted"

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "dim"])
        for i, v in enumerate(self.values):
            w.writerow([i, v])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, provenance="external"):
        rows = list(csv.reader(io.StringIO(text)))
        if rows and rows[0] and rows[0][0].strip() == "i":
            rows = rows[1:]
        vals = {}
        for r in rows:
            if r:
                vals[int(r[0])] = int(r[1])
        if sorted(vals) != list(range(len(vals))):
            raise ValueError("CSV rows must cover i = 0..N without gaps")
        return cls([vals[i] for i in range(len(vals))], provenance)

    def is_nondecreasing(self):
        return all(a <= b for a, b in zip(self.values, self.values[1:]))


@dataclass
class GrowthEstimate:
    degree: object
    multiplicity: object
    stable: bool
    window: tuple
    period: int | None = None
    window_max: object = None
    note: str = ""

    def to_dict(self):
        d = asdict(self)
        for k in ("degree", "multiplicity", "window_max"):
            if d[k] is not None:
                d[k] = str(d[k])
        d["window"] = list(self.window)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _fit_class(points):
    """Exact polynomial fit of an equally spaced run; (degree, leading diff) or None."""
    diffs = [mpq(v) for v in points]
    d = 0
    while True:
        nxt = [b - a for a, b in zip(diffs, diffs[1:])]
        if len(nxt) < 2:
            return None
        if not any(nxt):
            return d, diffs[0]
        diffs = nxt
        d += 1


def dim_estimate(seq, window: int) -> GrowthEstimate:
    """Fit degree and multiplicity on the trailing window of a dimension sequence.

    Tries periods 1..6; a residue class is fitted only when its finite
    differences vanish with at least two confirming entries.  The reported
    multiplicity is the largest leading coefficient over residue classes
    (the limsup of dim/i^d for a quasi-polynomial); ``window_max`` is the
    raw maximum of dim_i / i^d over the window.
    """
    vals = list(seq.values if isinstance(seq, DimSequence) else seq)
    if window < 4 or len(vals) < 2 * window:
        raise ValueError(f"need window >= 4 and at least {2 * window} entries, got {len(vals)}")
    N = len(vals) - 1
    lo = N - window + 1
    win = (lo, N)
    for p in range(1, MAX_PERIOD + 1):
        fits = []
        for r in range(p):
            start = lo + ((r - lo) % p)
            pts = vals[start:N + 1:p]
            f = _fit_class(pts)
            if f is None:
                break
            fits.append(f)
        else:
            d = max(f[0] for f in fits)
            leads = [f[1] / (factorial(d) * p ** d) if f[0] == d else mpq(0) for f in fits]
            mult = max(leads)
            wmax = max(mpq(vals[i]) / (i ** d) for i in range(max(lo, 1), N + 1))
            return GrowthEstimate(mpq(d), mult, True, win, p, wmax)
    # no quasi-polynomial: log-log slope over the window, flagged unstable
    a, b = max(lo, 1), N
    va, vb = vals[a], vals[b]
    if va <= 0 or vb <= 0 or a == b:
        deg = Fraction(0)
    else:
        deg = Fraction(math.log(vb / va) / math.log(b / a)).limit_denominator(12)
    d = mpq(deg.numerator, deg.denominator)
    wmax = max(vals[i] / (i ** float(d)) for i in range(a, N + 1))
    wmax = Q(Fraction(wmax).limit_denominator(10 ** 6))
    return GrowthEstimate(d, wmax, False, win, None, wmax,
                          "no quasi-polynomial of period <= 6 matches the window")


# ---------------------------------------------------------------------------


class FiltrationHandle:
    """Indexed family of spanning sets in a common sparse coordinate space.

    ``spanning(i)`` returns sparse vectors (dicts) spanning level i.  An
    optional ``dim(i)`` gives a fast exact count; otherwise the rank of the
    spanning set is used.
    """

    def __init__(self, spanning: Callable, dim: Callable | None = None, p=None, name=""):
        self._spanning = spanning
        self._dim = dim
        self.p = p
        self.name = name

    def spanning(self, i):
        if i < 0:
            return []
        return self._spanning(i)

    def dim(self, i):
        if i < 0:
            return 0
        if self._dim is not None:
            return self._dim(i)
        e = Echelon(self.p)
        for v in self.spanning(i):
            e.add(v)
        return e.rank()

    def echelon(self, i):
        e = Echelon(self.p)
        for v in self.spanning(i):
            e.add(v)
        return e

    def dim_sequence(self, i_max):
        return DimSequence([self.dim(i) for i in range(i_max + 1)], "counted")

    def check_ascending(self, i_max):
        """Level i lies in the span of level i+1, for i < i_max."""
        for i in range(i_max):
            e = self.echelon(i + 1)
            for v in self.spanning(i):
                if not e.contains(v):
                    return False
        return True


@dataclass
class DominationCertificate:
    kind: str
    bound: int
    verified_upto: int
    ok: bool
    failure: tuple | None = None

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"kind": self.kind, "bound": self.bound, "ok": self.ok,
                "verified_upto": self.verified_upto,
                "failure": None if self.failure is None else
                [self.failure[0], {str(k): str(v) for k, v in self.failure[1].items()}]}


def check_domination(F: FiltrationHandle, G: FiltrationHandle, kind: str, bound: int,
                     window: int) -> DominationCertificate:
    """Check F_i within G_{i+bound} ("shift") or G_{bound*i} ("linear") for i <= window."""
    if kind not in ("shift", "linear"):
        raise ValueError("kind must be 'shift' or 'linear'")
    cache = {}
    for i in range(window + 1):
        j = i + bound if kind == "shift" else bound * i
        if j not in cache:
            cache[j] = G.echelon(j)
        for v in F.spanning(i):
            if not cache[j].contains(v):
                return DominationCertificate(kind, bound, i - 1, False, (i, v))
    return DominationCertificate(kind, bound, window, True)


def floor_power(i: int, s) -> int:
    """floor(i^s) for rational s >= 0, exactly."""
    s = Q(s)
    num, den = int(s.numerator), int(s.denominator)
    r, _ = gmpy2.iroot(gmpy2.mpz(i) ** num, den)
    return int(r)


def reindex_power(F, s):
    """G_i = F_{floor(i^s)}; accepts a FiltrationHandle or a DimSequence-like callable."""
    s = Q(s)
    if s < 1:
        raise ValueError("reindexing exponent must be >= 1")
    if isinstance(F, FiltrationHandle):
        dim = (lambda i: F.dim(floor_power(i, s))) if F._dim is not None else None
        return FiltrationHandle(lambda i: F.spanning(floor_power(i, s)), dim, F.p,
                                f"{F.name}^reindex({s})")
    if callable(F):
        return lambda i: F(floor_power(i, s))
    raise TypeError("reindex_power expects a FiltrationHandle or a dimension function")


def standard_module_filtration(F: FiltrationHandle, gens, act: Callable, to_vec: Callable = dict,
                               p=None) -> FiltrationHandle:
    """G_i = span F_i . {v_1..v_l}; ``act(b, v)`` applies an algebra element to a generator."""
    gens = list(gens)

    def spanning(i):
        out = []
        for b in F.spanning(i):
            for v in gens:
                w = to_vec(act(b, v))
                if w:
                    out.append(w)
        return out

    return FiltrationHandle(spanning, None, p, f"{F.name}.gens")


# ---------------------------------------------------------------------------


def bernstein_check(F_seq, G_seq, window: int, C: int | None = None) -> dict:
    """Compare fitted degrees against Dim(G) >= Dim(F)/2 and the multiplicity bound."""
    ef = dim_estimate(F_seq, window)
    eg = dim_estimate(G_seq, window)
    report = {"F": ef.to_dict(), "G": eg.to_dict()}
    if not (ef.stable and eg.stable):
        report.update(verdict=None, note="unstable growth estimate; no verdict")
        return report
    holds = eg.degree >= ef.degree / 2
    report.update(verdict=bool(holds), equality=bool(eg.degree == ef.degree / 2))
    if C is not None and eg.degree == ef.degree / 2:
        theta = eg.degree
        # e(G) >= sqrt(e(F)) / ((C+1)(C+2))^(theta/2), compared after squaring
        if theta.denominator == 1:
            scale = mpq((C + 1) * (C + 2)) ** int(theta)
            report["multiplicity_bound"] = {
                "eG_squared": str(eg.multiplicity ** 2),
                "eF_over_scale": str(ef.multiplicity / scale),
                "holds": bool(eg.multiplicity ** 2 >= ef.multiplicity / scale),
            }
    return report


def length_bound(eG, eF, C: int, theta):
    """eG^2 (C+1)^theta (C+2)^theta / eF."""
    eG, eF, theta = Q(eG), Q(eF), Q(theta)
    if eF <= 0:
        raise ValueError("multiplicity of the algebra filtration must be positive")
    if theta.denominator == 1:
        t = int(theta)
        return eG ** 2 * mpq(C + 1) ** t * mpq(C + 2) ** t / eF
    val = float(eG) ** 2 * (C + 1) ** float(theta) * (C + 2) ** float(theta) / float(eF)
    return Q(Fraction(val).limit_denominator(10 ** 9))
