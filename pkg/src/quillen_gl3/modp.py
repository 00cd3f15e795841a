"""Dense linear algebra over F_p with numpy int64.

Entries stay in [0, p); products fit in int64 for any p < 2**31.
"""

from __future__ import annotations

import numpy as np


def as_mod(M, p: int) -> np.ndarray:
    return np.asarray(M, dtype=np.int64) % p


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = as_mod(M, p).copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M, p: int) -> int:
    A = np.asarray(M)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(A, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis of {x : Mx = 0} as columns of an (ncols x k) matrix."""
    A = np.asarray(M, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, pc in enumerate(piv):
            N[pc, j] = -R[i, f] % p
    return N


def left_nullspace(M, p: int) -> np.ndarray:
    """Rows y with y M = 0, as a (k x nrows) matrix."""
    return nullspace(np.asarray(M).T, p).T


def column_basis(M, p: int) -> list[int]:
    """Indices of a maximal independent set of columns (pivot columns)."""
    A = np.asarray(M)
    if A.size == 0:
        return []
    return rref(A, p)[1]


def solve(B, v, p: int) -> np.ndarray:
    """Coordinates x with B x = v; B must have independent columns and v in its span."""
    B = as_mod(B, p)
    v = as_mod(v, p).reshape(B.shape[0], -1)
    aug = np.hstack([B, v])
    R, piv = rref(aug, p)
    k = B.shape[1]
    if any(c >= k for c in piv):
        raise ValueError("vector not in the column span")
    if len(piv) != k:
        raise ValueError("basis columns are dependent")
    return R[:k, k:]


def in_span(B, v, p: int) -> bool:
    B = np.asarray(B)
    if B.size == 0:
        return not np.any(as_mod(v, p))
    return rank(np.hstack([B, np.asarray(v).reshape(B.shape[0], -1)]), p) == rank(B, p)
