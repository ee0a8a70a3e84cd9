"""Cyclic Jacobi eigendecomposition for Hermitian matrices.

Dimensions here are desk scale, so a dependency-free Jacobi sweep is plenty:
each off-diagonal entry is annihilated by a phase rotation followed by a real
Givens rotation, and sweeps repeat until the off-diagonal mass is gone.  The
same kernel backs signal extraction, PSD projection and all spectral metrics,
which keeps timing comparisons between methods like-for-like.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import NonHermitianInput


@njit(cache=True)
def _jacobi_sweeps(A, V, scale, tol, max_sweeps):
    n = A.shape[0]
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += abs(A[p, q]) ** 2
        if np.sqrt(2.0 * off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                h = abs(apq)
                if h <= tol * scale / n:
                    continue
                # phase rotation on index q makes A[p, q] real positive
                g = np.conj(apq) / h
                for i in range(n):
                    A[i, q] *= g
                for i in range(n):
                    A[q, i] *= np.conj(g)
                for i in range(n):
                    V[i, q] *= g
                # real Givens rotation zeroing the (p, q) entry
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * h)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    aip = A[i, p]
                    aiq = A[i, q]
                    A[i, p] = c * aip - s * aiq
                    A[i, q] = s * aip + c * aiq
                for i in range(n):
                    api = A[p, i]
                    aqi = A[q, i]
                    A[p, i] = c * api - s * aqi
                    A[q, i] = s * api + c * aqi
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = complex(A[p, p].real, 0.0)
                A[q, q] = complex(A[q, q].real, 0.0)
                for i in range(n):
                    vip = V[i, p]
                    viq = V[i, q]
                    V[i, p] = c * vip - s * viq
                    V[i, q] = s * vip + c * viq


def jacobi_eigh(H: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100):
    """Eigenvalues (descending) and eigenvectors of a Hermitian matrix.

    Returns ``(w, V)`` with ``w`` real in descending order and ``V`` unitary,
    columns matching ``w``.  For real symmetric input ``V`` is real.
    """
    H = np.asarray(H)
    n = H.shape[0]
    if np.max(np.abs(H - H.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(H))):
        raise NonHermitianInput("jacobi_eigh expects a Hermitian matrix")
    real_input = not np.iscomplexobj(H)
    A = np.ascontiguousarray(H, dtype=np.complex128).copy()
    V = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(A))
    if scale > 0.0 and n > 1:
        _jacobi_sweeps(A, V, scale, tol, max_sweeps)
    w = A.diagonal().real.copy()
    order = np.argsort(w)[::-1]
    w = w[order]
    V = V[:, order]
    return w, (V.real if real_input else V)


def eigvals_hermitian(H: np.ndarray) -> np.ndarray:
    """Descending real eigenvalues of a Hermitian matrix."""
    w, _ = jacobi_eigh(H)
    return w


def spectral_radius(H: np.ndarray) -> float:
    """Largest absolute eigenvalue."""
    w = eigvals_hermitian(H)
    return float(np.max(np.abs(w)))
