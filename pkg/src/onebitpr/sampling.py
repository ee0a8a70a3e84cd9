"""Ground-truth signals, Gaussian sensing ensembles, thresholds and sign data.

All randomness is drawn from counter-based Philox streams keyed by
(component, seed), so the simulator, the solver's row sampling and the
measurement noise never share a stream and every experiment is reproducible
from its seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, NegativeThreshold
from .lifting import SensingEnsemble, SignalModel, SignalVector

_STREAMS = {
    "signal": 0x51,
    "sensing": 0x5E,
    "threshold": 0x7A,
    "noise": 0x20,
    "solver": 0x50,
}


def component_rng(component: str, seed: int) -> np.random.Generator:
    """Independent counter-based generator for one (component, seed) pair."""
    key = _STREAMS[component]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([key, seed])))


@dataclass(frozen=True)
class ThresholdSpec:
    """How per-measurement comparison levels are produced."""

    kind: str = "lognormal"  # lognormal | gaussian | fixed
    values: Optional[np.ndarray] = None

    def draw(self, m: int, seed: int) -> np.ndarray:
        if self.kind == "lognormal":
            return component_rng("threshold", seed).lognormal(0.0, 1.0, m)
        if self.kind == "gaussian":
            return component_rng("threshold", seed).standard_normal(m)
        if self.kind == "fixed":
            values = np.asarray(self.values, dtype=float)
            if values.shape != (m,):
                raise DimensionMismatch("fixed thresholds have wrong length")
            return values.copy()
        raise ValueError(f"unknown threshold kind {self.kind!r}")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian measurement noise; disabled means exactly zero."""

    sigma: float = 0.0
    enabled: bool = False

    def __post_init__(self):
        if self.sigma < 0.0:
            raise ValueError("noise sigma must be nonnegative")


@dataclass(frozen=True)
class SignData:
    """One-bit measurement batch stored as flat arrays.

    ``hidden_magnitudes`` is the experiment-only oracle of the unquantized
    values; solvers never read it.
    """

    signs: np.ndarray
    thresholds: np.ndarray
    hidden_magnitudes: Optional[np.ndarray] = None

    def __post_init__(self):
        signs = np.asarray(self.signs, dtype=float)
        thresholds = np.asarray(self.thresholds, dtype=float)
        if signs.shape != thresholds.shape:
            raise DimensionMismatch("signs and thresholds differ in length")
        if not np.all(np.abs(signs) == 1.0):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "thresholds", thresholds)

    @property
    def m(self) -> int:
        return self.signs.size

    def __len__(self) -> int:
        return self.m

    def __getitem__(self, j: int) -> "OneBitRecord":
        hidden = None if self.hidden_magnitudes is None else float(self.hidden_magnitudes[j])
        return OneBitRecord(int(self.signs[j]), float(self.thresholds[j]), hidden)


@dataclass(frozen=True)
class OneBitRecord:
    sign: int
    threshold: float
    hidden_magnitude: Optional[float] = None


def gen_instance(n: int, m: int, model: SignalModel, seed: int):
    """Standard-normal ground truth and sensing ensemble, per-seed deterministic."""
    if n < 1 or m < 1:
        raise DimensionMismatch("need n >= 1 and m >= 1")
    rng_x = component_rng("signal", seed)
    rng_a = component_rng("sensing", seed)
    if model is SignalModel.REAL:
        x = rng_x.standard_normal(n).astype(complex)
        A = rng_a.standard_normal((m, n))
    else:
        x = rng_x.standard_normal(n) + 1j * rng_x.standard_normal(n)
        A = rng_a.standard_normal((m, n)) + 1j * rng_a.standard_normal((m, n))
    return SignalVector(x, model), SensingEnsemble.from_rows(A, model)


def magnitudes(x: SignalVector, ensemble: SensingEnsemble) -> np.ndarray:
    """Noise-free measurement magnitudes |a_j^H x|."""
    if ensemble.n != x.n:
        raise DimensionMismatch("signal and sensing dimensions differ")
    return np.abs(np.conj(ensemble.rows) @ x.entries)


def quantize(y: np.ndarray, thresholds: np.ndarray,
             noise: NoiseSpec = NoiseSpec(), seed: int = 0) -> SignData:
    """Compare (possibly noisy) magnitudes against thresholds.

    Sign is +1 exactly when y_j + z_j >= threshold_j; the boundary goes to +1.
    Noiseless thresholds must be nonnegative, otherwise the squared-domain
    inequalities the polyhedron is built from would not be equivalent.
    """
    y = np.asarray(y, dtype=float)
    thresholds = np.asarray(thresholds, dtype=float)
    if y.shape != thresholds.shape:
        raise DimensionMismatch("magnitudes and thresholds differ in length")
    if noise.enabled:
        z = noise.sigma * component_rng("noise", seed).standard_normal(y.size)
    else:
        if np.any(thresholds < 0.0):
            raise NegativeThreshold("noiseless thresholds must be nonnegative")
        z = 0.0
    signs = np.where(y + z >= thresholds, 1.0, -1.0)
    return SignData(signs, thresholds, hidden_magnitudes=y.copy())
