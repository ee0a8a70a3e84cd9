"""Real isometric coordinates for Hermitian matrices and rank-one lifts.

Every solver in this package works on real coordinate vectors.  A Hermitian
n x n matrix H is embedded as

    [diag(H); sqrt(2) * Re(upper(H)); sqrt(2) * Im(upper(H))]

(the imaginary block only in the complex model), which makes the Euclidean
inner product of two coordinate vectors equal to Re Tr(H1 H2) and the
Euclidean norm equal to the Frobenius norm.  Row norms and sampling
probabilities of the projection solver therefore coincide with the
Frobenius-space quantities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput

SQRT2 = np.sqrt(2.0)

HERMITIAN_TOL = 1e-12


class SignalModel(Enum):
    REAL = "real"
    COMPLEX = "complex"


def lifted_dim(n: int, model: SignalModel) -> int:
    """Length of the real coordinate vector for an n x n Hermitian matrix."""
    if model is SignalModel.REAL:
        return n * (n + 1) // 2
    return n * n


def _upper_indices(n):
    return np.triu_indices(n, k=1)


def embed(H: np.ndarray, model: SignalModel) -> np.ndarray:
    """Map a Hermitian matrix to its real isometric coordinates."""
    H = np.asarray(H)
    n = H.shape[0]
    if H.shape != (n, n):
        raise DimensionMismatch(f"expected square matrix, got {H.shape}")
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_TOL:
        raise NonHermitianInput("matrix is not Hermitian within 1e-12")
    iu, ju = _upper_indices(n)
    coords = np.empty(lifted_dim(n, model))
    coords[:n] = H.diagonal().real
    upper = H[iu, ju]
    k = iu.size
    coords[n:n + k] = SQRT2 * upper.real
    if model is SignalModel.COMPLEX:
        coords[n + k:] = SQRT2 * np.imag(upper)
    elif np.iscomplexobj(H) and np.max(np.abs(H.imag)) > HERMITIAN_TOL:
        raise NonHermitianInput("real model requires a real symmetric matrix")
    return coords


def decode(coords: np.ndarray, n: int, model: SignalModel) -> np.ndarray:
    """Inverse of :func:`embed`; always returns an exactly Hermitian matrix."""
    coords = np.asarray(coords, dtype=float)
    d = lifted_dim(n, model)
    if coords.shape != (d,):
        raise DimensionMismatch(f"expected coords of length {d}, got {coords.shape}")
    iu, ju = _upper_indices(n)
    k = iu.size
    if model is SignalModel.REAL:
        H = np.zeros((n, n))
        upper = coords[n:n + k] / SQRT2
    else:
        H = np.zeros((n, n), dtype=complex)
        upper = (coords[n:n + k] + 1j * coords[n + k:]) / SQRT2
    H[iu, ju] = upper
    H += H.conj().T
    H[np.diag_indices(n)] = coords[:n]
    return H


def lift_row(a: np.ndarray, model: SignalModel) -> np.ndarray:
    """Coordinates of the rank-one lift a a^H of a sensing vector."""
    a = np.asarray(a)
    return lift_rows(a[None, :], model)[0]


def lift_rows(A: np.ndarray, model: SignalModel) -> np.ndarray:
    """Vectorized lift of every row of the m x n sensing matrix."""
    A = np.asarray(A)
    m, n = A.shape
    iu, ju = _upper_indices(n)
    k = iu.size
    out = np.empty((m, lifted_dim(n, model)))
    out[:, :n] = np.abs(A) ** 2
    cross = A[:, iu] * np.conj(A[:, ju])
    out[:, n:n + k] = SQRT2 * cross.real
    if model is SignalModel.COMPLEX:
        out[:, n + k:] = SQRT2 * np.imag(cross)
    return out


def trace_from_coords(coords: np.ndarray, n: int) -> float:
    """Trace of the decoded matrix; diagonal entries are stored unscaled."""
    return float(np.sum(coords[:n]))


def identity_coords(n: int, model: SignalModel) -> np.ndarray:
    coords = np.zeros(lifted_dim(n, model))
    coords[:n] = 1.0
    return coords


@dataclass(frozen=True)
class SignalVector:
    """Ground-truth signal x, real or complex."""

    entries: np.ndarray
    model: SignalModel

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 1 or entries.size < 1:
            raise DimensionMismatch("signal must be a nonempty vector")
        if self.model is SignalModel.REAL and np.any(entries.imag != 0.0):
            raise DimensionMismatch("real model signal has nonzero imaginary part")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.size

    def lifted(self) -> "LiftedMatrix":
        """Coordinates of the rank-one truth x x^H."""
        return LiftedMatrix(lift_row(self.entries, self.model), self.n, self.model)


@dataclass(frozen=True)
class LiftedMatrix:
    """Hermitian iterate stored in Frobenius-isometric real coordinates."""

    coords: np.ndarray
    n: int
    model: SignalModel

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (lifted_dim(self.n, self.model),):
            raise DimensionMismatch("coords length does not match (n, model)")
        object.__setattr__(self, "coords", coords)

    def matrix(self) -> np.ndarray:
        return decode(self.coords, self.n, self.model)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def trace(self) -> float:
        return trace_from_coords(self.coords, self.n)

    @classmethod
    def zero(cls, n: int, model: SignalModel) -> "LiftedMatrix":
        return cls(np.zeros(lifted_dim(n, model)), n, model)

    @classmethod
    def from_matrix(cls, H: np.ndarray, model: SignalModel) -> "LiftedMatrix":
        H = np.asarray(H)
        return cls(embed(H, model), H.shape[0], model)


@dataclass(frozen=True)
class SensingEnsemble:
    """Sensing rows a_j together with their precomputed rank-one lifts."""

    rows: np.ndarray
    lifted_rows: np.ndarray
    row_sq_norms: np.ndarray = field(repr=False)
    total_sq_norm: float
    model: SignalModel

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    @classmethod
    def from_rows(cls, rows: np.ndarray, model: SignalModel) -> "SensingEnsemble":
        rows = np.asarray(rows)
        if model is SignalModel.REAL:
            rows = rows.real.astype(float)
        else:
            rows = rows.astype(complex)
        lifted = lift_rows(rows, model)
        sq = np.einsum("ij,ij->i", lifted, lifted)
        return cls(rows, lifted, sq, float(sq.sum()), model)
