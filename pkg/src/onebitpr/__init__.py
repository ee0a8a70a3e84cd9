"""Phase retrieval from one-bit (sign-only) phaseless measurements.

Simulates sign comparisons of |a_j^H x| against known thresholds, rebuilds
the lifted rank-one matrix x x^H by solving the induced polyhedron of linear
inequalities with a randomized row-projection solver, and ships adaptive
threshold refinement, a probit maximum-likelihood variant for noisy signs,
projected-gradient trace-relaxation baselines, sample-size bound calculators
and a seeded experiment harness.
"""

from .bounds import (PenaltyTailFit, fit_penalty_tail, min_samples_dimension,
                     min_samples_error_bound)
from .baselines import (PgConfig, PgResult, noisy_phaselift, onebit_phaselift,
                        phaselift, psd_project, satisfied_fraction)
from .eigensolver import eigvals_hermitian, jacobi_eigh, spectral_radius
from .errors import (ClampingDominates, DimensionMismatch, EmptySystem,
                     InfeasibleTarget, InsufficientSamples, NegativeThreshold,
                     NonHermitianInput, NonPositiveLeadEigenvalue,
                     OneBitPrError, TailNotDecaying, UnknownPreset,
                     ZeroNormRow, ZeroReference)
from .experiments import ExperimentReport, PRESETS, SweepSpec, run_sweep
from .kaczmarz import RkaConfig, RkaResult, build_alias, solve
from .lifting import (LiftedMatrix, SensingEnsemble, SignalModel, SignalVector,
                      decode, embed, lift_row, lift_rows, lifted_dim)
from .likelihood import (LikelihoodModel, MleConfig, MleResult, grad_loglik,
                         loglik, solve_mle)
from .metrics import (DistanceDiagnostics, distance_diagnostics, hellinger_sq,
                      metric_hellinger, metric_mse_spectral, metric_nmse,
                      nondominant_eigenvalue_mean, snr_from_instance,
                      spectral_radius_of)
from .polyhedron import (InequalitySystem, build_system, load_system,
                         residuals, save_system)
from .recovery import (AdaptiveConfig, AdaptiveTrace, extract_signal,
                       recover_from_signs, refine_thresholds)
from .sampling import (NoiseSpec, SignData, ThresholdSpec, component_rng,
                       gen_instance, magnitudes, quantize)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
