"""Exact rank computations over Q for sparse vectors."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping


def _integral(vec: Mapping[Hashable, object]) -> dict:
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    out = {k: int(c * den) for k, c in vec.items() if c}
    g = 0
    for c in out.values():
        g = gcd(g, c)
    if g > 1:
        out = {k: c // g for k, c in out.items()}
    return out


class RowSpace:
    """Incrementally maintained echelon form; fraction-free integer elimination."""

    def __init__(self):
        self._col: dict[Hashable, int] = {}
        self._pivots: dict[int, dict[int, int]] = {}

    def _index(self, key) -> int:
        i = self._col.get(key)
        if i is None:
            i = self._col[key] = len(self._col)
        return i

    def reduce(self, vec: Mapping[Hashable, object]) -> dict[int, int]:
        row = {self._index(k): c for k, c in _integral(vec).items()}
        while row:
            lead = min(row)
            piv = self._pivots.get(lead)
            if piv is None:
                return row
            a, b = piv[lead], row[lead]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: c * fa for k, c in row.items()}
            for k, c in piv.items():
                x = new.get(k, 0) - c * fb
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            row = _integral(new)
        return row

    def add(self, vec: Mapping[Hashable, object]) -> bool:
        """Insert vec; True if it enlarged the span."""
        row = self.reduce(vec)
        if not row:
            return False
        self._pivots[min(row)] = row
        return True

    def contains(self, vec: Mapping[Hashable, object]) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self._pivots)


def rank(vectors: Iterable[Mapping[Hashable, object]]) -> int:
    rs = RowSpace()
    for v in vectors:
        rs.add(v)
    return rs.rank


def kernel_basis(matrix: list[list[object]]) -> list[list[Fraction]]:
    """Basis of {x : matrix x = 0} over Q (dense Gauss-Jordan)."""
    if not matrix:
        return []
    m = [[Fraction(x) for x in row] for row in matrix]
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -m[i][f]
        basis.append(x)
    return basis
