"""SVD-based rank, kernel and subspace comparisons shared by the symbol and moduli code."""
from __future__ import annotations

import numpy as np

RANK_TOL = 1e-9


def rank(matrix: np.ndarray, tol: float = RANK_TOL) -> int:
    """Number of singular values above ``tol * sigma_max``; the zero matrix has rank 0."""
    if tol <= 0:
        raise ValueError("rank tolerance must be positive")
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def range_basis(matrix: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space."""
    if matrix.size == 0:
        return np.zeros((matrix.shape[0], 0), dtype=matrix.dtype)
    u, s, _ = np.linalg.svd(matrix, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return u[:, :r]


def kernel_basis(matrix: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the null space."""
    n = matrix.shape[1]
    if matrix.shape[0] == 0 or n == 0:
        return np.eye(n, dtype=matrix.dtype if matrix.size else float)
    _, s, vh = np.linalg.svd(matrix, full_matrices=True)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return vh[r:].conj().T


def containment_angle(sub: np.ndarray, sup: np.ndarray) -> float:
    """Largest principal angle between span(sub) and its projection into span(sup).

    Both arguments are orthonormal column bases.  Zero iff span(sub) lies in span(sup).
    """
    if sub.shape[1] == 0:
        return 0.0
    resid = sub - sup @ (sup.conj().T @ sub)
    s = np.linalg.norm(resid, 2)
    return float(np.arcsin(min(1.0, s)))
