"""Linear inequality system induced by one-bit sign data.

Each record r_j, tau_j contributes the half-space
r_j * (<v_j, x> - tau_j^2) >= 0 in lifted coordinates, stored pre-negated in
the single convention c_j . x <= b_j so the solver never branches on signs:

    c_j = -r_j * v_j,      b_j = -r_j * tau_j^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .bounds import min_samples_dimension
from .errors import DimensionMismatch, NegativeThreshold
from .lifting import SensingEnsemble, SignalModel, lifted_dim
from .sampling import SignData

KIND_LE = 0
KIND_EQ = 1


@dataclass(frozen=True)
class InequalitySystem:
    """Rows c_j, right-hand sides b_j and per-row kind (<= or =)."""

    rows: np.ndarray
    rhs: np.ndarray
    kinds: np.ndarray
    n: int
    model: SignalModel
    row_sq_norms: np.ndarray
    total_sq_norm: float
    meets_dimension_bound: bool = True

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    @classmethod
    def from_rows(cls, rows, rhs, kinds, n, model, meets_dimension_bound=True):
        rows = np.ascontiguousarray(rows, dtype=float)
        rhs = np.ascontiguousarray(rhs, dtype=float)
        kinds = np.ascontiguousarray(kinds, dtype=np.int8)
        if rows.ndim != 2 or rhs.shape != (rows.shape[0],) or kinds.shape != rhs.shape:
            raise DimensionMismatch("inconsistent system shapes")
        if rows.shape[1] != lifted_dim(n, model):
            raise DimensionMismatch("row length does not match lifted dimension")
        sq = np.einsum("ij,ij->i", rows, rows)
        return cls(rows, rhs, kinds, n, model, sq, float(sq.sum()),
                   meets_dimension_bound)


def build_system(records: SignData, ensemble: SensingEnsemble) -> InequalitySystem:
    """Polyhedron rows for a batch of sign records over a sensing ensemble."""
    if records.m != ensemble.m:
        raise DimensionMismatch("record count does not match sensing rows")
    if np.any(records.thresholds < 0.0):
        raise NegativeThreshold("polyhedron construction needs thresholds >= 0")
    signs = records.signs
    rows = -signs[:, None] * ensemble.lifted_rows
    rhs = -signs * records.thresholds ** 2
    kinds = np.zeros(records.m, dtype=np.int8)
    meets = records.m >= min_samples_dimension(ensemble.n)
    if not meets:
        warnings.warn(
            f"m={records.m} is below the finite-volume floor "
            f"{min_samples_dimension(ensemble.n)} for n={ensemble.n}",
            stacklevel=2)
    return InequalitySystem.from_rows(rows, rhs, kinds, ensemble.n,
                                      ensemble.model, meets)


def residuals(system: InequalitySystem, coords: np.ndarray) -> np.ndarray:
    """Per-row feasibility gaps; all zero exactly on the feasible set."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (system.d,):
        raise DimensionMismatch("coords length does not match system")
    gap = system.rows @ coords - system.rhs
    le = system.kinds == KIND_LE
    out = np.where(le, np.maximum(gap, 0.0), np.abs(gap))
    return out


def save_system(system: InequalitySystem, path) -> None:
    """Textual row-major dump for cross-implementation checks.

    First line: ``m d n model``; then one line per row with the d coefficients
    followed by the right-hand side and the row kind.
    """
    with open(path, "w") as fh:
        fh.write(f"{system.m} {system.d} {system.n} {system.model.value}\n")
        for j in range(system.m):
            vals = " ".join(f"{v:.17g}" for v in system.rows[j])
            fh.write(f"{vals} {system.rhs[j]:.17g} {int(system.kinds[j])}\n")


def load_system(path) -> InequalitySystem:
    with open(path) as fh:
        header = fh.readline().split()
        m, d, n = int(header[0]), int(header[1]), int(header[2])
        model = SignalModel(header[3])
        rows = np.empty((m, d))
        rhs = np.empty(m)
        kinds = np.empty(m, dtype=np.int8)
        for j in range(m):
            parts = fh.readline().split()
            if len(parts) != d + 2:
                raise DimensionMismatch(f"malformed system row {j}")
            rows[j] = [float(v) for v in parts[:d]]
            rhs[j] = float(parts[d])
            kinds[j] = int(parts[d + 1])
    meets = m >= min_samples_dimension(n)
    return InequalitySystem.from_rows(rows, rhs, kinds, n, model, meets)
