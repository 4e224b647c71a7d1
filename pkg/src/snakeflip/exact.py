"""Exact integer and rational linear algebra helpers."""
from __future__ import annotations

from fractions import Fraction


class BudgetError(RuntimeError):
    """Raised when an enumeration exceeds its state budget."""


def det_int(matrix):
    """Determinant of an integer matrix by fraction-free elimination."""
    m = [[int(x) for x in row] for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError('determinant needs a square matrix')
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank_int(matrix):
    """Rank of an integer matrix over the rationals."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][c] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = pr[c]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                factor = rows[r][c] / inv
                rows[r] = [a - factor * b for a, b in zip(rows[r], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def lp_maximize(A, b, c):
    """Maximize c.x subject to A x = b, x >= 0, in exact rational arithmetic.

    Two-phase simplex with Bland's rule. Returns (status, value, x) where
    status is 'optimal', 'infeasible', or 'unbounded'; value and x are set
    only when optimal.
    """
    m = len(A)
    n = len(c)
    if any(len(row) != n for row in A):
        raise ValueError('constraint rows must match the objective length')
    rows = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in b]
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    tableau = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]]
               for i in range(m)]
    basis = list(range(n, n + m))

    def pivot(row, col):
        piv = tableau[row][col]
        tableau[row] = [v / piv for v in tableau[row]]
        for r in range(m):
            if r != row and tableau[r][col]:
                factor = tableau[r][col]
                tableau[r] = [a - factor * p for a, p in zip(tableau[r], tableau[row])]
        basis[row] = col

    def run_phase(objective, allowed):
        while True:
            lam = [objective[basis[i]] for i in range(m)]
            entering = -1
            for j in range(allowed):
                if j in basis:
                    continue
                reduced = sum(lam[i] * tableau[i][j] for i in range(m)) - objective[j]
                if reduced < 0:
                    entering = j
                    break
            if entering < 0:
                return True
            leaving = -1
            best = None
            for i in range(m):
                if tableau[i][entering] > 0:
                    ratio = tableau[i][-1] / tableau[i][entering]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                        best = ratio
                        leaving = i
            if leaving < 0:
                return False
            pivot(leaving, entering)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run_phase(phase1, n + m)
    if sum(tableau[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return 'infeasible', None, None
    for i in range(m):  # drive leftover zero-level artificials out of the basis
        if basis[i] >= n:
            for j in range(n):
                if tableau[i][j] != 0:
                    pivot(i, j)
                    break
    live = [i for i in range(m) if basis[i] < n or any(tableau[i][j] for j in range(n))]
    if len(live) < m:
        tableau[:] = [tableau[i] for i in live]
        basis[:] = [basis[i] for i in live]
        m = len(live)
    phase2 = [Fraction(v) for v in c] + [Fraction(0)] * (len(tableau[0]) - 1 - n)
    if not run_phase(phase2, n):
        return 'unbounded', None, None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return 'optimal', value, x


def kernel_vector(columns):
    """A nonzero rational dependence among the given integer columns, or None.

    Returns coefficients c with sum c_i * columns[i] = 0, normalized so the
    last nonzero coefficient is 1, or None when the columns are independent.
    """
    if not columns:
        return None
    height = len(columns[0])
    k = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(k)] for i in range(height)]
    pivots = {}
    rank = 0
    for c in range(k):
        pivot = None
        for r in range(rank, height):
            if rows[r][c] != 0:
                pivot = r
                break
        if pivot is None:
            coeffs = [Fraction(0)] * k
            coeffs[c] = Fraction(1)
            for cc, rr in pivots.items():
                coeffs[cc] = -rows[rr][c]
            return coeffs
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][c]
        rows[rank] = [a / inv for a in rows[rank]]
        for r in range(height):
            if r != rank and rows[r][c] != 0:
                factor = rows[r][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        pivots[c] = rank
        rank += 1
    return None
