"""Recovery-quality metrics and polyhedron-distance diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.special import ndtr

from .bounds import min_samples_dimension
from .eigensolver import eigvals_hermitian
from .errors import DimensionMismatch, ZeroReference
from .lifting import LiftedMatrix, SensingEnsemble


def spectral_radius_of(X: LiftedMatrix) -> float:
    w = eigvals_hermitian(X.matrix())
    return float(np.max(np.abs(w)))


def metric_mse_spectral(pairs: Sequence[Tuple[LiftedMatrix, LiftedMatrix]]) -> float:
    """Mean squared spectral-radius error over (truth, estimate) trials."""
    if len(pairs) < 1:
        raise DimensionMismatch("need at least one trial")
    errs = [(spectral_radius_of(t) - spectral_radius_of(e)) ** 2
            for t, e in pairs]
    return float(np.mean(errs))


def metric_nmse(truth: LiftedMatrix, estimate: LiftedMatrix) -> float:
    """Squared Frobenius error normalized by the truth's squared norm."""
    ref = float(np.sum(truth.coords ** 2))
    if ref == 0.0:
        raise ZeroReference("NMSE undefined for a zero reference matrix")
    return float(np.sum((truth.coords - estimate.coords) ** 2)) / ref


def nondominant_eigenvalue_mean(X: LiftedMatrix) -> float:
    """Mean absolute eigenvalue excluding the dominant one."""
    w = eigvals_hermitian(X.matrix())
    if w.size < 2:
        return 0.0
    drop = int(np.argmax(np.abs(w)))
    rest = np.delete(w, drop)
    return float(np.mean(np.abs(rest)))


def hellinger_sq(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Entry-wise squared Hellinger distance between Bernoulli parameters."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    q = np.clip(np.asarray(q, dtype=float), 0.0, 1.0)
    return (np.sqrt(p) - np.sqrt(q)) ** 2 + (np.sqrt(1 - p) - np.sqrt(1 - q)) ** 2


def metric_hellinger(truth: LiftedMatrix, estimate: LiftedMatrix,
                     ensemble: SensingEnsemble,
                     thresholds: np.ndarray) -> float:
    """Mean squared Hellinger distance between sign-probability vectors.

    Probabilities are Phi(mu_j - lambda_j) under the true and the estimated
    lifted matrix, with Phi the standard normal CDF; this keeps the link
    slope fixed across noise levels so the metric tracks the measurement
    error itself.
    """
    mu_true = ensemble.lifted_rows @ truth.coords
    mu_est = ensemble.lifted_rows @ estimate.coords
    p = ndtr(mu_true - thresholds)
    q = ndtr(mu_est - thresholds)
    return float(np.mean(hellinger_sq(p, q)))


def snr_from_instance(truth: LiftedMatrix, ensemble: SensingEnsemble,
                      sigma: float) -> float:
    """Mean squared lifted measurement over the noise variance."""
    mu = ensemble.lifted_rows @ truth.coords
    return float(np.mean(mu ** 2)) / sigma ** 2


@dataclass(frozen=True)
class DistanceDiagnostics:
    """Average hyperplane distances around the truth at the final iterate."""

    t_ave: float
    subset_average: float
    subset_size: int


def distance_diagnostics(truth: LiftedMatrix, estimate: LiftedMatrix,
                         ensemble: SensingEnsemble) -> DistanceDiagnostics:
    """Per-row measurement gaps |<v_j, estimate - truth>| averaged two ways.

    ``t_ave`` averages over all rows; ``subset_average`` over the first
    finite-volume-floor many rows.
    """
    gaps = np.abs(ensemble.lifted_rows @ (estimate.coords - truth.coords))
    k = min(min_samples_dimension(ensemble.n), ensemble.m)
    return DistanceDiagnostics(float(np.mean(gaps)), float(np.mean(gaps[:k])), k)
