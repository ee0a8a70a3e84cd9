"""End-to-end sign-data recovery and the adaptive threshold refinement loop."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import kaczmarz
from .bounds import min_samples_dimension
from .eigensolver import jacobi_eigh
from .errors import ClampingDominates, InsufficientSamples, NonPositiveLeadEigenvalue
from .kaczmarz import RkaConfig, RkaResult
from .lifting import LiftedMatrix, SensingEnsemble, SignalModel, SignalVector
from .polyhedron import build_system
from .sampling import SignData, magnitudes, quantize


def recover_from_signs(records: SignData, ensemble: SensingEnsemble,
                       cfg: RkaConfig = RkaConfig(),
                       x0: Optional[np.ndarray] = None,
                       allow_underdetermined: bool = False
                       ) -> Tuple[LiftedMatrix, RkaResult]:
    """Solve the sign-data polyhedron and return the recovered lifted matrix.

    Below the finite-volume sample floor no bounded feasible set can exist,
    so the call refuses (with the bound in the message) unless explicitly
    overridden.
    """
    floor = min_samples_dimension(ensemble.n)
    if records.m < floor and not allow_underdetermined:
        raise InsufficientSamples(
            f"m={records.m} < {floor}: too few sign measurements to bound a "
            f"finite volume at n={ensemble.n}; pass allow_underdetermined=True "
            "to run anyway")
    system = build_system(records, ensemble)
    result = kaczmarz.solve(system, x0, cfg)
    return LiftedMatrix(result.coords, ensemble.n, ensemble.model), result


def extract_signal(X: LiftedMatrix, rank_tol: float = 0.0) -> SignalVector:
    """De-lift: scaled dominant eigenvector, with the global phase fixed.

    The returned vector has its largest-magnitude entry real positive; ties
    go to the largest index.
    """
    w, V = jacobi_eigh(X.matrix())
    lead = w[0]
    if lead <= rank_tol:
        raise NonPositiveLeadEigenvalue(
            f"dominant eigenvalue {lead} is not positive")
    vec = np.sqrt(lead) * V[:, 0]
    mags = np.abs(vec)
    k = vec.size - 1 - int(np.argmax(mags[::-1]))
    if mags[k] > 0.0:
        phase = vec[k] / mags[k]
        vec = vec * np.conj(phase)
    if X.model is SignalModel.REAL:
        vec = vec.real.astype(complex)
    return SignalVector(vec, X.model)


@dataclass(frozen=True)
class AdaptiveConfig:
    """Outer-loop tolerance and per-round solver budget."""

    delta: float = 1e-3
    max_outer: int = 20
    inner: RkaConfig = field(default_factory=RkaConfig)

    def __post_init__(self):
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")


@dataclass(frozen=True)
class AdaptiveTrace:
    """Per-outer-round telemetry of the threshold refinement."""

    threshold_deltas: List[float]
    clamp_fractions: List[float]
    oracle_errors: List[float]


def refine_thresholds(x_truth: SignalVector, ensemble: SensingEnsemble,
                      tau0: np.ndarray, cfg: AdaptiveConfig = AdaptiveConfig()
                      ) -> Tuple[np.ndarray, LiftedMatrix, AdaptiveTrace]:
    """Iteratively move each threshold halfway toward the current iterate.

    One round: solve the current polyhedron, halve every row's signed slack
    by updating the squared threshold to the midpoint of tau^2 and the
    iterate's measurement value, clamp at tau^2 >= 0, then re-quantize the
    frozen truth at the new thresholds.  Stops when the threshold change
    drops below delta or after max_outer rounds.
    """
    tau = np.asarray(tau0, dtype=float).copy()
    if np.any(tau < 0.0):
        raise ValueError("initial thresholds must be nonnegative")
    y = magnitudes(x_truth, ensemble)
    truth = x_truth.lifted().coords
    coords = None
    deltas, clamps, errors = [], [], []
    for k in range(cfg.max_outer):
        records = quantize(y, tau)
        system = build_system(records, ensemble)
        inner = _reseeded(cfg.inner, k)
        result = kaczmarz.solve(system, coords, inner)
        coords = result.coords
        mu = ensemble.lifted_rows @ coords
        # midpoint update in the squared domain; slack halves where no clamp
        tau_sq_new = 0.5 * (mu + tau ** 2)
        clamped = tau_sq_new < 0.0
        tau_sq_new[clamped] = 0.0
        frac = float(np.mean(clamped))
        if frac > 0.5:
            warnings.warn(f"{frac:.0%} of squared-threshold updates clamped to 0",
                          ClampingDominates, stacklevel=2)
        tau_new = np.sqrt(tau_sq_new)
        change = float(np.linalg.norm(tau_new - tau))
        deltas.append(change)
        clamps.append(frac)
        errors.append(float(np.sum((coords - truth) ** 2)))
        tau = tau_new
        if change <= cfg.delta:
            break
    matrix = LiftedMatrix(coords, ensemble.n, ensemble.model)
    return tau, matrix, AdaptiveTrace(deltas, clamps, errors)


def _reseeded(inner: RkaConfig, round_index: int) -> RkaConfig:
    # distinct solver stream per outer round, still a pure function of the seed
    return RkaConfig(max_iters=inner.max_iters, stop_gap=inner.stop_gap,
                     oracle_coords=inner.oracle_coords, oracle_eps=inner.oracle_eps,
                     seed=inner.seed * 1000 + round_index,
                     report_every=inner.report_every)
