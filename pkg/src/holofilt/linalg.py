"""Sparse exact Gaussian elimination over Q (mpq) or F_p.

Vectors are dicts ``key -> value`` with orderable keys.  ``Echelon`` keeps an
incrementally built row-echelon basis; with ``track=True`` every stored row
also remembers which inserted vectors it is a combination of, which gives
kernels and explicit solutions for free.
"""

from __future__ import annotations

import heapq

from gmpy2 import mpq


class Echelon:
    def __init__(self, p=None, track=False):
        self.p = p
        self.track = track
        self.rows = {}      # pivot key -> (row dict, combo dict or None)
        self.count = 0      # number of vectors inserted so far
        self.kernel = []    # combos of inserted vectors that reduced to zero

    def _inv(self, c):
        if self.p is None:
            return 1 / mpq(c)
        return pow(int(c), -1, self.p)

    def _axpy(self, target, source, factor):
        """target -= factor * source (in place)."""
        p = self.p
        for k, v in source.items():
            t = target.get(k, 0) - factor * v
            if p is not None:
                t %= p
            if t:
                target[k] = t
            else:
                target.pop(k, None)

    def reduce(self, vec, combo=None):
        """Reduce a copy of vec against the basis; returns (residual, combo)."""
        v = dict(vec)
        rows = self.rows
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen:
                continue
            seen.add(k)
            c = v.get(k)
            if not c:
                continue
            row, rcombo = rows[k]
            before = set(v)
            self._axpy(v, row, c)
            if combo is not None and rcombo is not None:
                self._axpy(combo, rcombo, c)
            for k2 in v.keys() - before:
                if k2 in rows and k2 not in seen:
                    heapq.heappush(heap, k2)
        return v, combo

    def add(self, vec, label=None):
        """Insert a vector; returns True if it enlarged the span."""
        idx = self.count if label is None else label
        self.count += 1
        combo = {idx: (1 if self.p is not None else mpq(1))} if self.track else None
        v, combo = self.reduce(vec, combo)
        if not v:
            if self.track:
                self.kernel.append(combo)
            return False
        piv = min(v)
        inv = self._inv(v[piv])
        p = self.p
        if p is None:
            v = {k: x * inv for k, x in v.items()}
            if combo is not None:
                combo = {k: x * inv for k, x in combo.items()}
        else:
            v = {k: x * inv % p for k, x in v.items()}
            if combo is not None:
                combo = {k: x * inv % p for k, x in combo.items()}
        self.rows[piv] = (v, combo)
        return True

    def rank(self):
        return len(self.rows)

    def contains(self, vec):
        return not self.reduce(vec)[0]

    def express(self, vec):
        """Coefficients (by inserted label) writing vec in the span, or None."""
        if not self.track:
            raise ValueError("express needs track=True")
        zero = {}
        res, combo = self.reduce(vec, zero)
        if res:
            return None
        # reduce() subtracted: vec - sum combo_rows = 0, so vec = -combo
        if self.p is None:
            return {k: -c for k, c in combo.items() if c}
        return {k: (-c) % self.p for k, c in combo.items() if c}


def rank(vectors, p=None):
    e = Echelon(p)
    for v in vectors:
        e.add(v)
    return e.rank()


def kernel(columns, p=None):
    """Basis of {c : sum_j c_j * columns[j] = 0}, as dicts index -> value."""
    e = Echelon(p, track=True)
    for col in columns:
        e.add(col)
    return e.kernel


def solve(columns, target, p=None):
    """One solution c with sum_j c_j * columns[j] == target, or None.

    Deterministic: columns are inserted in order, so pivots favour earlier
    columns and the particular solution uses only pivot columns.
    """
    e = Echelon(p, track=True)
    for col in columns:
        e.add(col)
    return e.express(target)


def is_in_span(vectors, target, p=None):
    e = Echelon(p)
    for v in vectors:
        e.add(v)
    return e.contains(target)
