"""Exact integer matrix utilities: determinants, inverses of unimodular
matrices, Smith normal form, and unimodular completion of primitive columns.

Everything here runs over Python ints (arbitrary precision); numpy arrays
are accepted and converted.  Sizes are desk scale (n <= 8), so the simple
cubic algorithms are fine.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeMismatch, SingularMatrix


def as_int_matrix(M) -> np.ndarray:
    A = np.asarray(M)
    if A.ndim != 2:
        raise ShapeMismatch("expected a matrix, got ndim=%d" % A.ndim)
    if not np.issubdtype(A.dtype, np.integer):
        B = np.rint(A).astype(np.int64)
        if not np.array_equal(B, A):
            raise ShapeMismatch("matrix entries are not integers")
        A = B
    return A.astype(np.int64)


def int_det(M) -> int:
    """Determinant by fraction-free (Bareiss) elimination, exact."""
    A = [[int(x) for x in row] for row in as_int_matrix(M)]
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ShapeMismatch("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def unimodular_inverse(M) -> np.ndarray:
    """Exact inverse of an integer matrix with determinant +-1."""
    A = as_int_matrix(M)
    n = A.shape[0]
    d = int_det(A)
    if d not in (1, -1):
        raise SingularMatrix("matrix is not unimodular (det=%d)" % d)
    # adjugate via cofactors; n <= 8 keeps this cheap
    adj = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(A, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * int_det(minor)
    return adj * d


def _xgcd(a: int, b: int):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def smith_normal_form(M) -> list[int]:
    """Elementary divisors of an integer matrix (nonzero ones, in order)."""
    A = [[int(x) for x in row] for row in as_int_matrix(M)]
    rows, cols = len(A), len(A[0]) if A else 0
    divisors = []
    top = 0
    while top < min(rows, cols):
        # find a nonzero pivot
        pivot = None
        for i in range(top, rows):
            for j in range(top, cols):
                if A[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        A[top], A[pi] = A[pi], A[top]
        for row in A:
            row[top], row[pj] = row[pj], row[top]
        while True:
            # clear the pivot column with gcd row operations
            for i in range(top + 1, rows):
                a, b = A[top][top], A[i][top]
                if b == 0:
                    continue
                if b % a == 0:
                    q = b // a
                    for j in range(top, cols):
                        A[i][j] -= q * A[top][j]
                else:
                    x, y, g = _xgcd(a, b)
                    aa, bb = a // g, b // g
                    for j in range(top, cols):
                        u, v = A[top][j], A[i][j]
                        A[top][j] = x * u + y * v
                        A[i][j] = -bb * u + aa * v
            # clear the pivot row with gcd column operations
            for j in range(top + 1, cols):
                a, b = A[top][top], A[top][j]
                if b == 0:
                    continue
                if b % a == 0:
                    q = b // a
                    for i in range(top, rows):
                        A[i][j] -= q * A[i][top]
                else:
                    x, y, g = _xgcd(a, b)
                    aa, bb = a // g, b // g
                    for i in range(top, rows):
                        u, v = A[i][top], A[i][j]
                        A[i][top] = x * u + y * v
                        A[i][j] = -bb * u + aa * v
            if all(A[i][top] == 0 for i in range(top + 1, rows)) and all(
                A[top][j] == 0 for j in range(top + 1, cols)
            ):
                break
        divisors.append(abs(A[top][top]))
        top += 1
    # enforce the divisibility chain
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            a, b = divisors[i], divisors[j]
            g = _xgcd(a, b)[2]
            divisors[i], divisors[j] = g, a * b // g if g else 0
    return [d for d in divisors if d != 0]


def is_primitive_columns(V) -> bool:
    """True iff the columns generate a primitive full-rank sublattice
    (all Smith elementary divisors equal 1)."""
    V = as_int_matrix(V)
    if V.shape[1] == 0:
        return True
    divs = smith_normal_form(V)
    return len(divs) == V.shape[1] and all(d == 1 for d in divs)


def unimodular_completion(V) -> np.ndarray:
    """Columns extending the primitive n x m matrix V to a unimodular n x n
    matrix; returns the n x (n-m) block of new columns."""
    V = as_int_matrix(V)
    n, m = V.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    if not is_primitive_columns(V):
        raise SingularMatrix("columns do not span a primitive sublattice")
    # reduce V to [T; 0] with unimodular row operations tracked in U
    A = [[int(x) for x in row] for row in V]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def rowop(i, k, x, y, aa, bb):
        for j in range(m):
            u, v = A[i][j], A[k][j]
            A[i][j] = x * u + y * v
            A[k][j] = -bb * u + aa * v
        for j in range(n):
            u, v = U[i][j], U[k][j]
            U[i][j] = x * u + y * v
            U[k][j] = -bb * u + aa * v

    for col in range(m):
        # bring a nonzero entry to the diagonal position
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            raise SingularMatrix("columns are linearly dependent")
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            U[col], U[piv] = U[piv], U[col]
        for i in range(col + 1, n):
            if A[i][col] == 0:
                continue
            a, b = A[col][col], A[i][col]
            x, y, g = _xgcd(a, b)
            rowop(col, i, x, y, a // g, b // g)
    Uinv = unimodular_inverse(np.array(U, dtype=np.int64))
    return Uinv[:, m:]
