"""Seeded batch harness: preset sweeps, CSV metric tables, JSON manifests.

Each preset fixes a method set and an (n, m, sigma) grid; every trial owns
one seed and is a pure function of it, so the metrics CSV is byte-identical
across runs.  Wall-clock is measured around the solver call only and lands
in a separate timing CSV, keeping the deterministic table clean.
"""

from __future__ import annotations

import dataclasses
import json
import os
import time
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import kaczmarz
from .baselines import PgConfig, noisy_phaselift, onebit_phaselift, phaselift
from .errors import UnknownPreset
from .kaczmarz import RkaConfig
from .lifting import LiftedMatrix, SignalModel
from .likelihood import LikelihoodModel, MleConfig, solve_mle
from .metrics import (distance_diagnostics, metric_hellinger, metric_nmse,
                      nondominant_eigenvalue_mean, snr_from_instance,
                      spectral_radius_of)
from .polyhedron import build_system
from .recovery import AdaptiveConfig, refine_thresholds
from .sampling import NoiseSpec, ThresholdSpec, gen_instance, magnitudes, quantize

METRIC_COLUMNS = (
    "preset", "method", "n", "m", "sigma", "seed",
    "mse_spectral", "nmse", "abs_error", "eigen_profile", "hellinger", "snr",
    "t_ave", "subset_distance", "iterations", "converged",
)
TIMING_COLUMNS = ("preset", "method", "n", "m", "sigma", "seed", "cpu_seconds")


@dataclass(frozen=True)
class ExperimentReport:
    """One trial of one method: metrics plus solver telemetry."""

    preset: str
    method: str
    n: int
    m: int
    sigma: float
    seed: int
    mse_spectral: float
    nmse: float
    abs_error: float
    eigen_profile: float
    hellinger: float
    snr: float
    t_ave: float
    subset_distance: float
    iterations: int
    converged: bool
    cpu_seconds: float

    def metric_row(self) -> List[str]:
        return [self.preset, self.method, str(self.n), str(self.m),
                _fmt(self.sigma), str(self.seed),
                _fmt(self.mse_spectral), _fmt(self.nmse), _fmt(self.abs_error),
                _fmt(self.eigen_profile), _fmt(self.hellinger), _fmt(self.snr),
                _fmt(self.t_ave), _fmt(self.subset_distance),
                str(self.iterations), str(int(self.converged))]

    def timing_row(self) -> List[str]:
        return [self.preset, self.method, str(self.n), str(self.m),
                _fmt(self.sigma), str(self.seed), _fmt(self.cpu_seconds)]


@dataclass(frozen=True)
class SweepSpec:
    """Grid and solver budgets for one preset."""

    methods: Tuple[str, ...]
    n: int = 10
    model: SignalModel = SignalModel.REAL
    m_values: Tuple[int, ...] = (1000,)
    sigmas: Tuple[float, ...] = ()     # empty means noiseless
    trials: int = 10
    threshold: str = "lognormal"
    seed0: int = 0
    rka_max_iters: int = 2_000_000
    # relative oracle stop: run until ||x - x*||^2 <= stop_eps * ||x*||_F^2
    stop_eps: Optional[float] = None
    pl_alpha: float = 1e-4
    pl_max_iters: int = 20_000
    adaptive_delta: float = 1e-3
    adaptive_max_outer: int = 20
    mle_max_iters: int = 5000


PRESETS: Dict[str, SweepSpec] = {
    # m-sweeps of sign-polyhedron recovery with random thresholds
    "fig2-real": SweepSpec(methods=("rka",), model=SignalModel.REAL,
                           m_values=(1000, 5000, 10000, 50000, 100000),
                           trials=10),
    "fig2-complex": SweepSpec(methods=("rka",), model=SignalModel.COMPLEX,
                              m_values=(1000, 5000, 10000, 50000, 100000),
                              trials=10),
    # CPU time to a fixed relative error, row-action solver vs hinge
    # projected gradient; the PG budget is capped so its per-iteration
    # O(m) cost, not seed-level iteration scatter, sets the trend
    "timing": SweepSpec(methods=("rka", "onebit-phaselift"),
                        m_values=(1000, 3000, 5000, 10000), trials=5,
                        stop_eps=1e-2, pl_max_iters=6000),
    # adaptive refinement vs random thresholds, samples-to-criterion
    "table1": SweepSpec(methods=("adaptive", "rka"),
                        m_values=(500, 1000, 2000, 5000), trials=5,
                        rka_max_iters=5_000_000),
    # noise-level sweep of the likelihood methods
    "noisy": SweepSpec(methods=("mle", "noisy-phaselift"),
                       sigmas=(0.1, 0.2, 0.4, 0.5, 0.7, 1.0),
                       m_values=(5000, 10000), trials=5,
                       threshold="gaussian", pl_max_iters=5000),
    # fixed noise floor, m-sweep with numeric targets
    "table2": SweepSpec(methods=("mle", "noisy-phaselift"), sigmas=(0.5,),
                        m_values=(5000, 10000, 20000), trials=5,
                        threshold="gaussian", pl_max_iters=5000),
}


def run_trial(spec: SweepSpec, preset: str, method: str, m: int,
              sigma: float, seed: int) -> ExperimentReport:
    """One (method, m, sigma, seed) cell; timing wraps the solver call only."""
    x, ens = gen_instance(spec.n, m, spec.model, seed)
    y = magnitudes(x, ens)
    truth = x.lifted()
    ref = float(np.sum(truth.coords ** 2))
    eps = None if spec.stop_eps is None else spec.stop_eps * ref

    hell = snr = float("nan")
    if method == "rka":
        tau = ThresholdSpec(spec.threshold).draw(m, seed)
        records = quantize(y, tau)
        system = build_system(records, ens)
        cfg = RkaConfig(max_iters=spec.rka_max_iters, seed=seed,
                        report_every=5000,
                        oracle_coords=None if eps is None else truth.coords,
                        oracle_eps=eps)
        t0 = time.perf_counter()
        res = kaczmarz.solve(system, None, cfg)
        cpu = time.perf_counter() - t0
        est = LiftedMatrix(res.coords, ens.n, ens.model)
        iters, conv = res.iterations_used, res.converged
    elif method == "adaptive":
        tau = ThresholdSpec(spec.threshold).draw(m, seed)
        inner = RkaConfig(max_iters=spec.rka_max_iters // spec.adaptive_max_outer,
                          seed=seed, report_every=5000)
        cfg = AdaptiveConfig(delta=spec.adaptive_delta,
                             max_outer=spec.adaptive_max_outer, inner=inner)
        t0 = time.perf_counter()
        _, est, trace = refine_thresholds(x, ens, tau, cfg)
        cpu = time.perf_counter() - t0
        iters = len(trace.threshold_deltas)
        conv = trace.threshold_deltas[-1] <= spec.adaptive_delta
    elif method == "onebit-phaselift":
        tau = ThresholdSpec(spec.threshold).draw(m, seed)
        records = quantize(y, tau)
        cfg = PgConfig(alpha=spec.pl_alpha, max_iters=spec.pl_max_iters,
                       oracle_coords=None if eps is None else truth.coords,
                       oracle_eps=eps)
        t0 = time.perf_counter()
        res = onebit_phaselift(records, ens, cfg)
        cpu = time.perf_counter() - t0
        est, iters, conv = res.matrix, res.iterations_used, res.converged
    elif method == "phaselift":
        cfg = PgConfig(alpha=spec.pl_alpha, max_iters=spec.pl_max_iters,
                       oracle_coords=None if eps is None else truth.coords,
                       oracle_eps=eps)
        t0 = time.perf_counter()
        res = phaselift(y ** 2, ens, cfg)
        cpu = time.perf_counter() - t0
        est, iters, conv = res.matrix, res.iterations_used, res.converged
    elif method in ("mle", "noisy-phaselift"):
        # noisy comparisons happen in the squared (lifted-linear) domain
        lam = ThresholdSpec(spec.threshold).draw(m, seed)
        records = quantize(y ** 2, lam, NoiseSpec(sigma, enabled=True), seed)
        if method == "mle":
            model = LikelihoodModel.from_records(records, ens, sigma)
            t0 = time.perf_counter()
            res = solve_mle(model, cfg=MleConfig(max_iters=spec.mle_max_iters))
            cpu = time.perf_counter() - t0
            est, iters, conv = res.matrix, res.iterations_used, res.converged
        else:
            cfg = PgConfig(alpha=spec.pl_alpha, max_iters=spec.pl_max_iters)
            t0 = time.perf_counter()
            res = noisy_phaselift(records, ens, sigma, cfg)
            cpu = time.perf_counter() - t0
            est, iters, conv = res.matrix, res.iterations_used, res.converged
        hell = metric_hellinger(truth, est, ens, records.thresholds)
        snr = snr_from_instance(truth, ens, sigma)
    else:
        raise UnknownPreset(f"unknown method {method!r}")

    nmse = metric_nmse(truth, est)
    diag = distance_diagnostics(truth, est, ens)
    return ExperimentReport(
        preset=preset, method=method, n=spec.n, m=m, sigma=sigma, seed=seed,
        mse_spectral=(spectral_radius_of(truth) - spectral_radius_of(est)) ** 2,
        nmse=nmse, abs_error=nmse * ref,
        eigen_profile=nondominant_eigenvalue_mean(est),
        hellinger=hell, snr=snr,
        t_ave=diag.t_ave, subset_distance=diag.subset_average,
        iterations=iters, converged=conv, cpu_seconds=cpu)


def run_sweep(preset: str, overrides: Optional[Mapping[str, object]] = None,
              out_dir: Optional[str] = None) -> List[ExperimentReport]:
    """Run a preset grid (trials sorted by seed) and optionally write reports.

    ``overrides`` replaces SweepSpec fields by name, e.g. ``{"trials": 2}``.
    When ``out_dir`` is given, writes ``metrics.csv`` (deterministic),
    ``timing.csv`` (wall-clock, machine-dependent) and ``manifest.json``.
    """
    if preset not in PRESETS:
        raise UnknownPreset(
            f"unknown preset {preset!r}; available: {sorted(PRESETS)}")
    spec = PRESETS[preset]
    if overrides:
        spec = dataclasses.replace(spec, **dict(overrides))
    sigmas = spec.sigmas if spec.sigmas else (0.0,)
    reports = []
    for method in spec.methods:
        for m in spec.m_values:
            for sigma in sigmas:
                for t in range(spec.trials):
                    reports.append(run_trial(spec, preset, method, m, sigma,
                                             spec.seed0 + t))
    if out_dir is not None:
        write_reports(reports, spec, preset, out_dir)
    return reports


def write_reports(reports: Sequence[ExperimentReport], spec: SweepSpec,
                  preset: str, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    write_metrics_csv(reports, os.path.join(out_dir, "metrics.csv"))
    write_timing_csv(reports, os.path.join(out_dir, "timing.csv"))
    _write_manifest(spec, preset, os.path.join(out_dir, "manifest.json"))


def write_metrics_csv(reports: Sequence[ExperimentReport], path: str) -> None:
    """Deterministic table: identical seeds give identical bytes."""
    lines = [",".join(METRIC_COLUMNS)]
    lines += [",".join(r.metric_row()) for r in reports]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_timing_csv(reports: Sequence[ExperimentReport], path: str) -> None:
    lines = [",".join(TIMING_COLUMNS)]
    lines += [",".join(r.timing_row()) for r in reports]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_manifest(spec: SweepSpec, preset: str, path: str) -> None:
    import numba
    import scipy

    spec_dict = dataclasses.asdict(spec)
    spec_dict["model"] = spec.model.name
    manifest = {
        "preset": preset,
        "spec": spec_dict,
        "seeds": list(range(spec.seed0, spec.seed0 + spec.trials)),
        "versions": {
            "onebitpr": _package_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "numba": numba.__version__,
        },
        "files": {"metrics": "metrics.csv", "timing": "timing.csv"},
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _package_version() -> str:
    try:
        from importlib.metadata import version
        return version("onebitpr")
    except Exception:
        return "unknown"


def _fmt(value: float) -> str:
    return "%.17g" % value
