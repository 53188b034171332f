"""Exact dense linear algebra over rationals.

Matrices are lists of lists of backend rationals.  Sizes here are
desk-scale (a few hundred), so plain Gaussian elimination with exact
pivoting is both simplest and fully rigorous.
"""

from __future__ import annotations

from ._backend import R, ZERO


def mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    out = [[ZERO] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        row = out[i]
        for k in range(inner):
            a = Ai[k]
            if a == 0:
                continue
            Bk = B[k]
            for j in range(cols):
                if Bk[j] != 0:
                    row[j] += a * Bk[j]
    return out


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def max_abs(A, rows=None):
    """Largest |entry|, optionally over a subset of row indices."""
    out = ZERO
    idx = range(len(A)) if rows is None else rows
    for i in idx:
        for v in A[i]:
            if abs(v) > out:
                out = abs(v)
    return out


def rank(A) -> int:
    """Exact rank via fraction-exact Gaussian elimination."""
    if not A:
        return 0
    M = [[R(v) for v in row] for row in A]
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def in_column_span(A, b) -> bool:
    """True when b is an exact linear combination of the columns of A."""
    base = rank(A)
    augmented = [row + [v] for row, v in zip(A, b)]
    return rank(augmented) == base
