"""
Tolerance aware subspace helpers.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ._config import get_config


def _rank_cut(s: np.ndarray, tol: float) -> int:
    # floored at unit scale so that a matrix of round-off residuals has rank zero
    if s.size == 0:
        return 0
    return int((s > tol * max(1.0, float(s[0]))).sum())


def orth(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    """
    Orthonormal basis of the column span of ``M`` (coordinate inner product).
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M[:, None]
    if M.shape[1] == 0 or M.shape[0] == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    tol = get_config().tol_eig if tol is None else tol
    U, s, _ = scipy.linalg.svd(M, full_matrices=False)
    return U[:, : _rank_cut(s, tol)]


def null_space(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    """
    Orthonormal basis of ``{x : M x = 0}``.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=complex)
    tol = get_config().tol_eig if tol is None else tol
    _, s, Vh = scipy.linalg.svd(M, full_matrices=True)
    r = _rank_cut(s, tol)
    return Vh[r:].conj().T


def complement(Q: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis of the orthogonal complement of an orthonormal column set.
    """
    n = Q.shape[0]
    if Q.shape[1] == 0:
        return np.eye(n, dtype=complex)
    return null_space(Q.conj().T)


def rank(M: np.ndarray, tol: float | None = None) -> int:
    return orth(M, tol).shape[1]


def in_span(Q: np.ndarray, V: np.ndarray, tol: float | None = None) -> bool:
    """
    Whether every column of ``V`` lies in the span of the orthonormal columns of ``Q``.
    """
    V = np.asarray(V, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    if V.size == 0:
        return True
    tol = get_config().tol_alg if tol is None else tol
    resid = V - Q @ (Q.conj().T @ V)
    return bool(np.abs(resid).max() <= tol * max(1.0, float(np.abs(V).max())) * max(1, V.shape[0]))


def close(x: np.ndarray, y: np.ndarray, tol: float | None = None) -> bool:
    """
    Entrywise comparison scaled by the magnitude of the operands.
    """
    x, y = np.asarray(x), np.asarray(y)
    if x.size == 0:
        return True
    tol = get_config().tol_alg if tol is None else tol
    scale = max(1.0, float(np.abs(x).max()), float(np.abs(y).max()))
    return bool(np.abs(x - y).max() <= tol * scale * max(1, int(np.sqrt(x.size))))


def worst(x: np.ndarray, y: np.ndarray) -> tuple:
    """Index of the largest entrywise deviation."""
    d = np.abs(np.asarray(x) - np.asarray(y))
    return tuple(int(i) for i in np.unravel_index(int(np.argmax(d)), d.shape))
