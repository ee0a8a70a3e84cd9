"""Sample-size bound calculators and the empirical penalty-tail fitter."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import InfeasibleTarget, TailNotDecaying


def min_samples_dimension(n: int) -> int:
    """Fewest half-spaces that can bound a finite volume around the truth.

    The cone of symmetric PSD matrices has dimension (n^2 + n) / 2 and a
    finite-volume region in a d-dimensional space needs at least d + 1
    bounding hyperplanes.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n * n + n) // 2 + 1


@dataclass(frozen=True)
class PenaltyTailFit:
    """Exponential tail model eps0 * exp(-gamma1 * m) fitted to an error curve."""

    eps0: float
    gamma1: float
    m_fit_start: int
    residual: float


def fit_penalty_tail(error_curve: Sequence[Tuple[float, float]],
                     q_hat: float, iterations: int, omega0: float,
                     m_fit_start: Optional[float] = None) -> PenaltyTailFit:
    """Least-squares fit of the decaying tail of a mean-error-vs-m curve.

    The iteration-limited floor ``q_hat**iterations * omega0`` is subtracted
    before taking logs; points at or below the floor are dropped.  By default
    the fit starts at the first sample size from which the curve decreases
    strictly to the end.
    """
    curve = sorted((float(m), float(e)) for m, e in error_curve)
    if len(curve) < 3:
        raise TailNotDecaying("need at least 3 points to fit a tail")
    ms = np.array([c[0] for c in curve])
    errs = np.array([c[1] for c in curve])

    if m_fit_start is None:
        start = len(ms) - 1
        for i in range(len(ms) - 1, 0, -1):
            if errs[i - 1] > errs[i]:
                start = i - 1
            else:
                break
        m_fit_start = ms[start]
    mask = ms >= m_fit_start
    floor = (q_hat ** iterations) * omega0
    tail = errs[mask] - floor
    mt = ms[mask]
    keep = tail > 0.0
    mt, tail = mt[keep], tail[keep]
    if mt.size < 3:
        raise TailNotDecaying("fewer than 3 usable points above the error floor")
    logs = np.log(tail)
    coeffs, res = np.polyfit(mt, logs, 1, full=True)[:2]
    slope, intercept = coeffs
    gamma1 = -slope
    if gamma1 <= 0.0:
        raise TailNotDecaying("fitted tail rate is not positive")
    residual = float(res[0]) if len(res) else 0.0
    return PenaltyTailFit(float(math.exp(intercept)), float(gamma1),
                          int(m_fit_start), residual)


def min_samples_error_bound(eps0: float, gamma1: float, eps1: float,
                            q: float, iterations: int, omega0: float) -> float:
    """Sample count needed for the fitted error model to meet a target.

    The model is ``q**i * omega0 + eps0 * exp(-gamma1 * m) <= eps1``; solving
    for m gives ``(1 / gamma1) * ln(eps0 / (eps1 - q**i * omega0))``.
    """
    floor = (q ** iterations) * omega0
    if eps1 <= floor:
        raise InfeasibleTarget(
            f"target {eps1} is at or below the iteration floor {floor}")
    if gamma1 <= 0.0 or eps0 <= 0.0:
        raise ValueError("eps0 and gamma1 must be positive")
    return (1.0 / gamma1) * math.log(eps0 / (eps1 - floor))
