"""Dense linear algebra over the prime field F_p.

Matrices are numpy integer arrays with entries in ``range(p)``.  The
elimination kernel is compiled with numba; everything else is thin numpy.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit


@lru_cache(maxsize=None)
def _rref_kernel(p: int):
    """Gauss-Jordan elimination compiled with p as a constant (fast modular reduction)."""

    @njit
    def kernel(M, inv_table, ncols):
        rows, cols = M.shape
        pivots = np.empty(min(rows, ncols), np.int64)
        r = 0
        for c in range(ncols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    t = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = t
            inv = inv_table[M[r, c]]
            if inv != 1:
                for j in range(c, cols):
                    M[r, j] = (M[r, j] * inv) % p
            for i in range(rows):
                if i != r:
                    f = M[i, c]
                    if f != 0:
                        g = p - f
                        for j in range(c, cols):
                            M[i, j] = (M[i, j] + g * M[r, j]) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r]

    return kernel


def inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def as_fp(M, p: int) -> np.ndarray:
    return np.mod(np.asarray(M, dtype=np.int64), p)


def rref(M, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over F_p.

    Only the first ``ncols`` columns are eligible as pivots (default: all),
    which lets callers row-reduce augmented matrices.  Returns the nonzero
    rows of the echelon form and the pivot column list.
    """
    A = as_fp(M, p).copy()
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if A.shape[0] == 0 or A.shape[1] == 0:
        return A[:0], []
    if ncols is None:
        ncols = A.shape[1]
    r, piv = _rref_kernel(p)(A, inverse_table(p), ncols)
    return A[:r], [int(c) for c in piv]


def rank(M, p: int) -> int:
    A = np.asarray(M)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis (as rows, in reduced echelon form) of ``{x : M x = 0}``."""
    A = as_fp(M, p)
    n = A.shape[1]
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, c in enumerate(piv):
            basis[k, c] = (-R[row, f]) % p
    if len(basis):
        basis, _ = rref(basis, p)
    return basis


def left_nullspace(M, p: int) -> np.ndarray:
    return nullspace(np.asarray(M).T, p)


def row_space(M, p: int) -> np.ndarray:
    return rref(M, p)[0]


def matmul(A, B, p: int) -> np.ndarray:
    """Exact product mod p; float64 BLAS is exact while n*(p-1)^2 < 2**53."""
    A = np.asarray(A)
    B = np.asarray(B)
    prod = np.asarray(A, dtype=np.float64) @ np.asarray(B, dtype=np.float64)
    return np.mod(np.rint(prod).astype(np.int64), p)


def matpow(A, e: int, p: int) -> np.ndarray:
    n = A.shape[0]
    result = np.eye(n, dtype=np.int64)
    base = as_fp(A, p)
    while e:
        if e & 1:
            result = matmul(result, base, p)
        e >>= 1
        if e:
            base = matmul(base, base, p)
    return result


def solve(M, b, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``M x = b`` over F_p, or None if inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (columns).
    """
    A = as_fp(M, p)
    B = as_fp(b, p)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    n = A.shape[1]
    R, piv = rref(np.hstack([A, B]), p, ncols=n)
    if any(c >= n for c in piv):
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for row, c in enumerate(piv):
        X[c] = R[row, n:]
    return X[:, 0] if vec else X


def inverse(M, p: int) -> np.ndarray:
    A = as_fp(M, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p, ncols=n)
    if piv != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular mod p")
    return R[:, n:]


def intersect_dim(U, V, p: int) -> int:
    """dim(U ∩ V) for row spaces U, V."""
    U = np.asarray(U)
    V = np.asarray(V)
    if U.size == 0 or V.size == 0:
        return 0
    return rank(U, p) + rank(V, p) - rank(np.vstack([U, V]), p)


def reduce_against(vectors, basis, pivots, p: int) -> np.ndarray:
    """Reduce row vectors modulo a row space given in reduced echelon form."""
    V = as_fp(vectors, p)
    if len(pivots) == 0:
        return V
    B = np.asarray(basis)
    return np.mod(V - matmul(V[:, pivots], B, p), p)
