"""Exact linear algebra over Q(q).

Rank computations run fraction-free over Z[q] (python-flint ``fmpz_poly``):
each row is scaled to integer polynomial entries, reduced against the pivot
rows found so far, and divided by the gcd of its entries to keep coefficient
growth in check.  Rows are processed in the order given, so the independent
rows reported are the first ones in that order.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Hashable, Mapping, Sequence

from flint import fmpz_poly

from .coeff import QLaurent, QRat

Row = Mapping[Hashable, "QLaurent | QRat"]


def _row_to_zpoly(row: Mapping[int, QRat | QLaurent]) -> dict[int, fmpz_poly]:
    """Scale a sparse row by a nonzero element of Q(q) so all entries lie in Z[q]."""
    items = [(k, v if isinstance(v, QRat) else QRat(v)) for k, v in row.items()]
    items = [(k, v) for k, v in items if not v.is_zero()]
    if not items:
        return {}
    # common denominator: product of distinct denominators (they are usually 1)
    dens = []
    for _, v in items:
        _, den, _ = v.poly_parts()
        if den != 1 and den not in dens:
            dens.append(den)
    common = reduce(lambda a, b: a * b, dens) if dens else None
    lo = min(v.poly_parts()[2] for _, v in items)
    scaled = []
    for k, v in items:
        num, den, shift = v.poly_parts()
        p = num
        if common is not None:
            p = (p * common) // den  # exact, den divides common
        if shift > lo:
            p = p * (fmpz_poly([0, 1]) ** (shift - lo))
        scaled.append((k, p))
    qden = reduce(lcm, (int(c.q) for _, p in scaled for c in p.coeffs()), 1)
    out = {}
    for k, p in scaled:
        zp = fmpz_poly([int(c.p) * (qden // int(c.q)) for c in p.coeffs()])
        out[k] = zp
    return _primitive(out)


def _primitive(row: dict[int, fmpz_poly]) -> dict[int, fmpz_poly]:
    g = None
    for p in row.values():
        g = p if g is None else g.gcd(p)
        if g.degree() == 0 and abs(int(g[0])) == 1:
            return row
    if g is None:
        return row
    if g.degree() <= 0 and int(g[0]) < 0:
        g = -g
    return {k: p // g for k, p in row.items()}


class Echelon:
    """Incremental row echelon form over Z[q].

    Columns are arbitrary hashable keys; the pivot of a row is its first
    nonzero column in ``column_order``.
    """

    def __init__(self, column_order: Sequence[Hashable]):
        self.col_index = {c: i for i, c in enumerate(column_order)}
        self.rows: list[tuple[int, dict[int, fmpz_poly]]] = []  # (pivot col, row)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, row: Row) -> bool:
        """Reduce ``row`` against the current pivots; keep it if independent."""
        r = _row_to_zpoly({self.col_index[k]: v for k, v in row.items()})
        for pc, prow in self.rows:
            a = r.get(pc)
            if a is None:
                continue
            b = prow[pc]
            g = a.gcd(b)
            ma, mb = b // g, a // g
            out = {}
            for k, v in r.items():
                out[k] = v * ma
            for k, v in prow.items():
                w = out.get(k)
                w = -(v * mb) if w is None else w - v * mb
                if w == 0:
                    out.pop(k, None)
                else:
                    out[k] = w
            r = _primitive(out) if out else {}
            if not r:
                return False
        if not r:
            return False
        self.rows.append((min(r), r))
        return True

    @property
    def pivot_columns(self) -> list[int]:
        return [pc for pc, _ in self.rows]


def rank_and_basis(rows: Sequence[tuple[Hashable, Row]], columns: Sequence[Hashable]):
    """Return ``(rank, keys of the first independent rows)``."""
    ech = Echelon(columns)
    basis = [key for key, row in rows if ech.add(row)]
    return ech.rank, basis


def rank(rows: Sequence[Row], columns: Sequence[Hashable]) -> int:
    ech = Echelon(columns)
    for row in rows:
        ech.add(row)
    return ech.rank


def fraction_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a matrix of rationals (used for specializations of q)."""
    M = [[Fraction(x) for x in row] for row in matrix]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    return r


def qrat_inverse(M: Sequence[Sequence[QRat]]) -> list[list[QRat]]:
    """Gauss-Jordan inverse over Q(q); raises ``ZeroDivisionError`` if singular."""
    n = len(M)
    A = [[QRat(x) for x in row] + [QRat(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((i for i in range(c, n) if not A[i][c].is_zero()), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular over Q(q)")
        A[c], A[p] = A[p], A[c]
        inv = A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def qrat_matmul(A: Sequence[Sequence[QRat]], B: Sequence[Sequence[QRat]]) -> list[list[QRat]]:
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), QRat(0)) for j in range(len(B[0]))]
            for i in range(len(A))]
