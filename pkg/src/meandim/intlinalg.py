"""Exact integer and rational linear algebra: Smith normal form with
transforms, fraction-free Bareiss rank, dense rational elimination, and a
sparse rational rank for the large structured systems built downstream.
No floating point anywhere."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Returns (U, D, V) with U, V unimodular, D = U M V diagonal and each
    diagonal entry dividing the next.  Exact big-integer arithmetic."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    D = [[int(x) for x in row] for row in M]
    if any(len(row) != cols for row in D):
        raise ValueError("matrix rows have inconsistent lengths")
    U = _identity(rows)
    V = _identity(cols)

    def row_op(i, j, a, b, c, d):
        # (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
        for k in range(cols):
            D[i][k], D[j][k] = a * D[i][k] + b * D[j][k], c * D[i][k] + d * D[j][k]
        for k in range(rows):
            U[i][k], U[j][k] = a * U[i][k] + b * U[j][k], c * U[i][k] + d * U[j][k]

    def col_op(i, j, a, b, c, d):
        for k in range(rows):
            D[k][i], D[k][j] = a * D[k][i] + b * D[k][j], c * D[k][i] + d * D[k][j]
        for k in range(cols):
            V[k][i], V[k][j] = a * V[k][i] + b * V[k][j], c * V[k][i] + d * V[k][j]

    def bezout(a, b):
        # unimodular (p, q, r, s) with p a + q b = g and r a + s b = 0
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        g = old_r
        if g < 0:
            g, old_s, old_t = -g, -old_s, -old_t
        return old_s, old_t, -(b // g) if g else 0, (a // g) if g else 1

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # choose a pivot of smallest absolute value in the remaining block
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if D[i][j] != 0 and (pivot is None
                                     or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            row_op(t, pi, 0, 1, 1, 0)
        if pj != t:
            col_op(t, pj, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, rows):
                if D[i][t]:
                    p, q, r, s = bezout(D[t][t], D[i][t])
                    row_op(t, i, p, q, r, s)
            if any(D[t][j] for j in range(t + 1, cols)):
                for j in range(t + 1, cols):
                    if D[t][j]:
                        p, q, r, s = bezout(D[t][t], D[t][j])
                        col_op(t, j, p, q, r, s)
                if not any(D[i][t] for i in range(t + 1, rows)):
                    break
            else:
                break
        # divisibility fix-up: fold a non-multiple into the pivot's column
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if D[t][t] and D[i][j] % D[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, 1, 1, 0, 1)
            continue
        t += 1
    for i in range(limit):
        if D[i][i] < 0:
            for k in range(cols):
                D[i][k] = -D[i][k]
            for k in range(rows):
                U[i][k] = -U[i][k]
    return U, D, V


def snf_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def bareiss_rank(M: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals via fraction-free Bareiss elimination."""
    A = [[int(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    rank = 0
    prev = 1
    col = 0
    while rank < rows and col < cols:
        pivot_row = next((i for i in range(rank, rows) if A[i][col]), None)
        if pivot_row is None:
            col += 1
            continue
        if pivot_row != rank:
            A[rank], A[pivot_row] = A[pivot_row], A[rank]
        pivot = A[rank][col]
        for i in range(rank + 1, rows):
            for j in range(col + 1, cols):
                A[i][j] = (pivot * A[i][j] - A[i][col] * A[rank][j]) // prev
            A[i][col] = 0
        prev = pivot
        rank += 1
        col += 1
    return rank


def fraction_gauss_rank(M: Sequence[Sequence]) -> int:
    """Dense textbook Gaussian elimination over Fraction; independent of
    the Bareiss and sparse routes."""
    A = [[Fraction(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    rank = 0
    for col in range(cols):
        pivot_row = next((i for i in range(rank, rows) if A[i][col] != 0), None)
        if pivot_row is None:
            continue
        A[rank], A[pivot_row] = A[pivot_row], A[rank]
        inv = 1 / A[rank][col]
        A[rank] = [x * inv for x in A[rank]]
        for i in range(rows):
            if i != rank and A[i][col] != 0:
                factor = A[i][col]
                A[i] = [x - factor * y for x, y in zip(A[i], A[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


class SparseEchelon:
    """Incremental sparse echelon form over Fraction keyed by column.

    Rows are dicts column -> nonzero coefficient.  Feeding rows one at a
    time keeps only the pivot rows, so rank extraction of a large very
    sparse system stays cheap."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = {c: Fraction(v) for c, v in row.items() if v}
        while row:
            lead = min(row)
            pivot = self.pivots.get(lead)
            if pivot is None:
                return row
            factor = row[lead]
            for c, v in pivot.items():
                new = row.get(c, Fraction(0)) - factor * v
                if new:
                    row[c] = new
                else:
                    row.pop(c, None)
        return row

    def add(self, row: dict[int, Fraction]) -> bool:
        """Insert a row; returns True when it increased the rank."""
        reduced = self.reduce(row)
        if not reduced:
            return False
        lead = min(reduced)
        inv = 1 / reduced[lead]
        self.pivots[lead] = {c: v * inv for c, v in reduced.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def sparse_rank(rows) -> int:
    ech = SparseEchelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def quotient_image_rank(generator_rows, relation_rows) -> int:
    """rank of the image of the generators in the quotient by the span of
    the relations: rank(relations + generators) - rank(relations)."""
    ech = SparseEchelon()
    for row in relation_rows:
        ech.add(row)
    base = ech.rank
    for row in generator_rows:
        ech.add(row)
    return ech.rank - base


def matrix_product(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        for k in range(inner):
            a = Ai[k]
            if a:
                Bk = B[k]
                row = out[i]
                for j in range(cols):
                    row[j] += a * Bk[j]
    return out


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1
