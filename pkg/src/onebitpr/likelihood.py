"""Probit log-likelihood of noisy sign data and its concave maximization.

With Gaussian measurement noise, a +1 sign occurs with probability
Phi((mu_j - lambda_j) / sigma) where mu_j is the lifted linear measurement.
The log-CDF and the phi/Phi ratio are evaluated through scipy's stable
complementary-error-function forms; a naive log(Phi) underflows exactly in
the saturated regime where sign data carries the most information.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import log_ndtr

from .errors import DimensionMismatch
from .lifting import LiftedMatrix, SensingEnsemble, SignalModel, lifted_dim
from .sampling import SignData

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


@dataclass(frozen=True)
class LikelihoodModel:
    """Sign data, thresholds and lifted sensing rows under Gaussian noise."""

    signs: np.ndarray
    thresholds: np.ndarray
    lifted_rows: np.ndarray
    sigma: float
    n: int
    model: SignalModel

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError(
                "sigma must be positive; noiseless data belongs to the "
                "polyhedron solver")
        if not (self.signs.shape == self.thresholds.shape
                and self.lifted_rows.shape[0] == self.signs.size):
            raise DimensionMismatch("inconsistent likelihood model shapes")
        if self.lifted_rows.shape[1] != lifted_dim(self.n, self.model):
            raise DimensionMismatch("lifted rows do not match (n, model)")

    @classmethod
    def from_records(cls, records: SignData, ensemble: SensingEnsemble,
                     sigma: float) -> "LikelihoodModel":
        return cls(records.signs, records.thresholds, ensemble.lifted_rows,
                   float(sigma), ensemble.n, ensemble.model)

    @property
    def m(self) -> int:
        return self.signs.size

    def _scaled_margins(self, coords: np.ndarray) -> np.ndarray:
        mu = self.lifted_rows @ coords
        return self.signs * (mu - self.thresholds) / self.sigma


def loglik(model: LikelihoodModel, coords: np.ndarray) -> float:
    """Sign-data log-likelihood at the given lifted coordinates."""
    t = model._scaled_margins(np.asarray(coords, dtype=float))
    return float(np.sum(log_ndtr(t)))


def grad_loglik(model: LikelihoodModel, coords: np.ndarray) -> np.ndarray:
    """Closed-form gradient through the linear measurement map.

    d/dmu_j of the per-row term is r_j * mills(r_j t_j) / sigma where
    mills = phi/Phi, evaluated as exp(log phi - log Phi) so it stays finite
    far into the left tail.
    """
    t = model._scaled_margins(np.asarray(coords, dtype=float))
    mills = np.exp(-0.5 * t * t - _LOG_SQRT_2PI - log_ndtr(t))
    weights = model.signs * mills / model.sigma
    return model.lifted_rows.T @ weights


@dataclass(frozen=True)
class MleConfig:
    """Quasi-Newton settings for the likelihood maximization."""

    max_iters: int = 5000
    tol: float = 1e-6
    history: int = 30


@dataclass(frozen=True)
class MleResult:
    matrix: LiftedMatrix
    iterations_used: int
    converged: bool
    final_grad_norm: float
    final_loglik: float


def solve_mle(model: LikelihoodModel, x0: Optional[np.ndarray] = None,
              cfg: MleConfig = MleConfig()) -> MleResult:
    """Maximize the concave sign-data likelihood.

    Runs limited-memory BFGS on the negated objective; the Wolfe line search
    keeps accepted iterates monotone in the likelihood.  Convergence means
    relative first-order stationarity against the gradient at the start;
    hitting the iteration cap is reported through ``converged=False``, not
    an exception.
    """
    from scipy.optimize import minimize

    d = model.lifted_rows.shape[1]
    x_start = np.zeros(d) if x0 is None else np.array(x0, dtype=float)
    g0_norm = float(np.linalg.norm(grad_loglik(model, x_start)))
    res = minimize(
        lambda c: -loglik(model, c),
        x_start,
        jac=lambda c: -grad_loglik(model, c),
        method="L-BFGS-B",
        options=dict(maxiter=cfg.max_iters, maxcor=cfg.history,
                     ftol=1e-16, gtol=min(1e-12, cfg.tol)),
    )
    g_norm = float(np.linalg.norm(res.jac))
    converged = g_norm <= cfg.tol * (1.0 + g0_norm)
    return MleResult(LiftedMatrix(res.x, model.n, model.model), int(res.nit),
                     converged, g_norm, float(-res.fun))
