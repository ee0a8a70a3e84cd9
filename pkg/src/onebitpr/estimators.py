"""Estimator-style wrappers over the functional recovery API.

Thin adapters with the familiar fit/predict surface: ``fit`` consumes a
sensing ensemble plus sign data (or noisy sign data) and stores the
recovered lifted matrix; ``predict`` maps new sensing rows to predicted
measurement magnitudes.  The functional modules stay the primary API; these
exist for pipeline-style composition and parameter search tooling.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from . import kaczmarz
from .kaczmarz import RkaConfig
from .lifting import LiftedMatrix, SensingEnsemble, SignalModel, lift_rows
from .likelihood import LikelihoodModel, MleConfig, solve_mle
from .polyhedron import build_system
from .recovery import extract_signal
from .sampling import SignData


class _LiftedRecovery(BaseEstimator):
    """Shared post-fit surface: lifted matrix, de-lifted signal, prediction."""

    matrix_: LiftedMatrix
    signal_: np.ndarray

    def _finish(self, matrix: LiftedMatrix) -> "_LiftedRecovery":
        self.matrix_ = matrix
        self.signal_ = extract_signal(matrix).entries
        return self

    def predict(self, rows: np.ndarray) -> np.ndarray:
        """Predicted measurement magnitudes |a_j^H x| for new sensing rows."""
        if not hasattr(self, "matrix_"):
            raise AttributeError("estimator is not fitted")
        lifted = lift_rows(np.asarray(rows), self.matrix_.model)
        return np.sqrt(np.maximum(lifted @ self.matrix_.coords, 0.0))


class SignPolyhedronRecovery(_LiftedRecovery):
    """Randomized row-projection recovery from noiseless sign data."""

    def __init__(self, max_iters: int = 2_000_000, stop_gap: float = 1e-10,
                 seed: int = 0):
        self.max_iters = max_iters
        self.stop_gap = stop_gap
        self.seed = seed

    def fit(self, ensemble: SensingEnsemble, records: SignData,
            x0: Optional[np.ndarray] = None) -> "SignPolyhedronRecovery":
        system = build_system(records, ensemble)
        cfg = RkaConfig(max_iters=self.max_iters, stop_gap=self.stop_gap,
                        seed=self.seed, report_every=5000)
        result = kaczmarz.solve(system, x0, cfg)
        self.result_ = result
        return self._finish(LiftedMatrix(result.coords, ensemble.n,
                                         ensemble.model))


class NoisySignLikelihoodRecovery(_LiftedRecovery):
    """Probit maximum-likelihood recovery from noisy sign data."""

    def __init__(self, sigma: float = 0.5, max_iters: int = 5000,
                 tol: float = 1e-6):
        self.sigma = sigma
        self.max_iters = max_iters
        self.tol = tol

    def fit(self, ensemble: SensingEnsemble, records: SignData
            ) -> "NoisySignLikelihoodRecovery":
        model = LikelihoodModel.from_records(records, ensemble, self.sigma)
        result = solve_mle(model, cfg=MleConfig(max_iters=self.max_iters,
                                                tol=self.tol))
        self.result_ = result
        return self._finish(result.matrix)
