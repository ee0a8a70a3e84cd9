"""Projected-gradient reference methods for trace-relaxation recovery.

Three variants share one loop: a least-squares fit to high-resolution squared
magnitudes, a hinge penalty on violated sign inequalities, and the negated
sign-data likelihood.  Each adds alpha * Tr(X) and projects onto the PSD cone
every step by clipping negative eigenvalues with the same Jacobi kernel the
rest of the package uses, so CPU-time comparisons are like-for-like.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .eigensolver import jacobi_eigh
from .errors import DimensionMismatch
from .lifting import (LiftedMatrix, SensingEnsemble, SignalModel, decode,
                      embed, identity_coords, lifted_dim)
from .likelihood import LikelihoodModel, grad_loglik, loglik
from .polyhedron import InequalitySystem, build_system
from .sampling import SignData


def psd_project(coords: np.ndarray, n: int, model: SignalModel) -> np.ndarray:
    """Frobenius-nearest PSD matrix: clip negative eigenvalues to zero."""
    w, V = jacobi_eigh(decode(coords, n, model))
    if w.size and w[-1] >= 0.0:
        return np.asarray(coords, dtype=float).copy()
    w = np.maximum(w, 0.0)
    H = (V * w) @ V.conj().T
    H = (H + H.conj().T) / 2.0
    return embed(H, model)


@dataclass(frozen=True)
class PgConfig:
    """Projected-gradient budget and stopping rules."""

    alpha: float = 1e-2
    max_iters: int = 3000
    tol: float = 1e-8
    step: Optional[float] = None
    oracle_coords: Optional[np.ndarray] = None
    oracle_eps: Optional[float] = None


@dataclass(frozen=True)
class PgResult:
    matrix: LiftedMatrix
    iterations_used: int
    converged: bool
    objective: float
    data_residual: float


def _power_lambda_max(rows: np.ndarray, sweeps: int = 40) -> float:
    d = rows.shape[1]
    v = np.ones(d) / math.sqrt(d)
    for _ in range(sweeps):
        v = rows.T @ (rows @ v)
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return 0.0
        v /= nv
    return float(v @ (rows.T @ (rows @ v)))


def _projected_gradient(grad: Callable[[np.ndarray], np.ndarray],
                        objective: Callable[[np.ndarray], float],
                        n: int, model: SignalModel, step: float,
                        cfg: PgConfig, x0: Optional[np.ndarray]) -> Tuple[np.ndarray, int, bool, float]:
    d = lifted_dim(n, model)
    x = psd_project(np.zeros(d) if x0 is None else np.array(x0, dtype=float),
                    n, model)
    it = 0
    converged = False
    for it in range(1, cfg.max_iters + 1):
        x_new = psd_project(x - step * grad(x), n, model)
        move = float(np.linalg.norm(x_new - x))
        x = x_new
        if cfg.oracle_coords is not None:
            if float(np.sum((x - cfg.oracle_coords) ** 2)) <= cfg.oracle_eps:
                converged = True
                break
        elif move <= cfg.tol * (1.0 + float(np.linalg.norm(x))):
            converged = True
            break
    return x, it, converged, objective(x)


def phaselift(y_squared: np.ndarray, ensemble: SensingEnsemble,
              cfg: PgConfig = PgConfig(), x0=None) -> PgResult:
    """Trace-penalized least squares on high-resolution squared magnitudes."""
    y_squared = np.asarray(y_squared, dtype=float)
    if y_squared.shape != (ensemble.m,):
        raise DimensionMismatch("y_squared length does not match ensemble")
    L = ensemble.lifted_rows
    m = ensemble.m
    tr_dir = identity_coords(ensemble.n, ensemble.model)

    def grad(x):
        return L.T @ (L @ x - y_squared) / m + cfg.alpha * tr_dir

    def objective(x):
        return 0.5 * float(np.sum((L @ x - y_squared) ** 2)) / m \
            + cfg.alpha * float(x[:ensemble.n].sum())

    step = cfg.step if cfg.step is not None else m / _power_lambda_max(L)
    x, it, conv, obj = _projected_gradient(grad, objective, ensemble.n,
                                           ensemble.model, step, cfg, x0)
    resid = float(np.linalg.norm(L @ x - y_squared)) / math.sqrt(m)
    return PgResult(LiftedMatrix(x, ensemble.n, ensemble.model), it, conv,
                    obj, resid)


def onebit_phaselift(records: SignData, ensemble: SensingEnsemble,
                     cfg: PgConfig = PgConfig(), x0=None) -> PgResult:
    """Trace minimization with a squared hinge on violated sign inequalities."""
    system = build_system(records, ensemble)
    C, b = system.rows, system.rhs
    m = system.m
    tr_dir = identity_coords(ensemble.n, ensemble.model)

    def grad(x):
        viol = np.maximum(C @ x - b, 0.0)
        return C.T @ viol / m + cfg.alpha * tr_dir

    def objective(x):
        viol = np.maximum(C @ x - b, 0.0)
        return 0.5 * float(viol @ viol) / m + cfg.alpha * float(x[:ensemble.n].sum())

    step = cfg.step if cfg.step is not None else m / _power_lambda_max(C)
    x, it, conv, obj = _projected_gradient(grad, objective, ensemble.n,
                                           ensemble.model, step, cfg, x0)
    viol = np.maximum(C @ x - b, 0.0)
    return PgResult(LiftedMatrix(x, ensemble.n, ensemble.model), it, conv,
                    obj, float(np.max(viol, initial=0.0)))


def satisfied_fraction(system: InequalitySystem, coords: np.ndarray,
                       tol: float = 1e-9) -> float:
    """Share of inequality rows the coordinates satisfy within tolerance."""
    gap = system.rows @ coords - system.rhs
    return float(np.mean(gap <= tol))


def noisy_phaselift(records: SignData, ensemble: SensingEnsemble, sigma: float,
                    cfg: PgConfig = PgConfig(), x0=None) -> PgResult:
    """PSD-projected likelihood ascent with a trace penalty."""
    model = LikelihoodModel.from_records(records, ensemble, sigma)
    m = ensemble.m
    tr_dir = identity_coords(ensemble.n, ensemble.model)

    def grad(x):
        return -grad_loglik(model, x) / m + cfg.alpha * tr_dir

    def objective(x):
        return -loglik(model, x) / m + cfg.alpha * float(x[:ensemble.n].sum())

    if cfg.step is not None:
        step = cfg.step
    else:
        step = m * sigma ** 2 / _power_lambda_max(ensemble.lifted_rows)
    x, it, conv, obj = _projected_gradient(grad, objective, ensemble.n,
                                           ensemble.model, step, cfg, x0)
    return PgResult(LiftedMatrix(x, ensemble.n, ensemble.model), it, conv,
                    obj, float(np.linalg.norm(grad(x))))
