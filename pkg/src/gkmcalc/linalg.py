"""Exact linear algebra over the rationals: echelon forms, ranks, kernels.

Everything here works on plain lists of Fractions (or ints) and never
normalizes through floats.  Pivoting is deterministic: first nonzero
column, row of least index.
"""

from __future__ import annotations

from bisect import insort
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def row_primitive(row: Sequence[Fraction | int]) -> list[int]:
    """Scale a rational row to coprime integers, keeping the sign pattern."""
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


class RankTracker:
    """Incremental rank of a growing pile of rational rows.

    Rows are reduced against a stored integer echelon basis; stored rows are
    kept primitive so cross-multiplication does not blow up coefficients.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        # sorted list of (pivot column, primitive integer row)
        self._rows: list[tuple[int, list[int]]] = []

    def add(self, row: Sequence[Fraction | int]) -> bool:
        """Reduce ``row`` against the basis; return True if rank grew."""
        if len(row) != self.ncols:
            raise ValueError("row length mismatch")
        r = row_primitive(row)
        for pivot, base in self._rows:
            if r[pivot]:
                a, b = base[pivot], r[pivot]
                r = [x * a - y * b for x, y in zip(r, base)]
        piv = next((i for i, v in enumerate(r) if v), None)
        if piv is None:
            return False
        insort(self._rows, (piv, row_primitive(r)))
        return True

    @property
    def rank(self) -> int:
        return len(self._rows)


def rank(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> int:
    tracker = RankTracker(ncols)
    for row in rows:
        tracker.add(row)
    return tracker.rank


def rref(
    rows: Sequence[Sequence[Fraction | int]], ncols: int
) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(m)) if m[i][c]), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def kernel_basis(
    rows: Sequence[Sequence[Fraction | int]], ncols: int
) -> list[list[Fraction]]:
    """Echelonized basis of the right kernel, one vector per free column.

    Each basis vector is scaled to a primitive integer vector whose entry at
    its free column is positive, so the output is canonical.
    """
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: list[list[Fraction]] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -reduced[i][free]
        prim = row_primitive(v)
        if prim[free] < 0:
            prim = [-x for x in prim]
        basis.append([Fraction(x) for x in prim])
    return basis


def solve(
    rows: Sequence[Sequence[Fraction | int]],
    rhs: Sequence[Fraction | int],
    ncols: int,
) -> list[Fraction] | None:
    """One solution of ``rows . x = rhs`` (free variables 0), or None."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None  # inconsistent: pivot in the rhs column
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = reduced[i][ncols]
    return x


def invert(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]] | None:
    """Inverse of a square rational matrix, or None if singular."""
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    reduced, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in reduced]
