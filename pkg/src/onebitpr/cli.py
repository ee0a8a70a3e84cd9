"""Command-line front end for simulation, recovery and batch sweeps.

Every flag can also come from a plain ``key = value`` config file
(``--config``); explicit command-line values win over the file, the file
wins over defaults.  Single-run commands print a short human summary and,
with ``--out``, drop CSV artifacts next to a JSON manifest.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Dict, List, Optional

import numpy as np

from . import kaczmarz
from .baselines import PgConfig, noisy_phaselift, onebit_phaselift, phaselift
from .bounds import min_samples_dimension, min_samples_error_bound
from .errors import OneBitPrError
from .experiments import PRESETS, run_sweep
from .kaczmarz import RkaConfig, write_trace_csv
from .lifting import SignalModel
from .likelihood import LikelihoodModel, MleConfig, solve_mle
from .metrics import metric_nmse
from .polyhedron import build_system, save_system
from .recovery import AdaptiveConfig, refine_thresholds
from .sampling import NoiseSpec, ThresholdSpec, gen_instance, magnitudes, quantize

_DEFAULTS = {
    "n": 10,
    "m": 1000,
    "model": "real",
    "seed": 0,
    "trials": None,          # preset decides unless set
    "sigma": 0.5,
    "threshold": "lognormal",
    "out": None,
    "stop_eps": None,        # relative oracle stop ||x-x*||^2 / ||x*||^2
    "max_iters": 2_000_000,
    "alpha": 1e-4,
    "method": "onebit-phaselift",
    "delta": 1e-3,
    "max_outer": 20,
}


def load_config(path: str) -> Dict[str, str]:
    """Read ``key = value`` lines; '#' starts a comment, blank lines skipped."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise OneBitPrError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file mirroring the flags")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--model", choices=["real", "complex"])
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--threshold", choices=["lognormal", "gaussian"])
    p.add_argument("--out", help="output directory for CSV/JSON artifacts")
    p.add_argument("--stop-eps", type=float, dest="stop_eps")
    p.add_argument("--max-iters", type=int, dest="max_iters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onebitpr",
        description="one-bit phaseless measurement simulation and recovery")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate an instance and sign data")
    _add_common(p)

    p = sub.add_parser("solve", help="recover from signs with the row solver")
    _add_common(p)

    p = sub.add_parser("adaptive", help="recover with threshold refinement")
    _add_common(p)
    p.add_argument("--delta", type=float)
    p.add_argument("--max-outer", type=int, dest="max_outer")

    p = sub.add_parser("mle", help="noisy-sign maximum likelihood recovery")
    _add_common(p)

    p = sub.add_parser("baseline", help="projected-gradient reference methods")
    _add_common(p)
    p.add_argument("--method",
                   choices=["phaselift", "onebit-phaselift", "noisy-phaselift"])
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("sweep", help="run a named preset grid")
    p.add_argument("preset", choices=sorted(PRESETS))
    _add_common(p)

    p = sub.add_parser("bounds", help="sample-size bound calculators")
    _add_common(p)
    p.add_argument("--eps0", type=float)
    p.add_argument("--gamma1", type=float)
    p.add_argument("--eps1", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--iters", type=int)
    p.add_argument("--omega0", type=float)
    return parser


def resolve(args: argparse.Namespace) -> Dict[str, object]:
    """Merge defaults, config file and explicit flags (flags win)."""
    merged: Dict[str, object] = dict(_DEFAULTS)
    config = getattr(args, "config", None)
    if config:
        raw = load_config(config)
        for key, text in raw.items():
            if key not in merged:
                raise OneBitPrError(f"unknown config key {key!r}")
            default = merged[key]
            if key in ("out", "model", "threshold", "method"):
                merged[key] = text
            elif key in ("n", "m", "seed", "trials", "max_iters", "max_outer"):
                merged[key] = int(text)
            else:
                merged[key] = float(text)
            _ = default
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _setup(opts):
    model = SignalModel(opts["model"])
    x, ens = gen_instance(opts["n"], opts["m"], model, opts["seed"])
    y = magnitudes(x, ens)
    return x, ens, y


def _print_recovery(tag, truth, est, extra=""):
    nmse = metric_nmse(truth, est)
    print(f"{tag}: nmse={nmse:.6g} abs_error="
          f"{nmse * float(np.sum(truth.coords ** 2)):.6g}{extra}")


def cmd_simulate(opts) -> int:
    x, ens, y = _setup(opts)
    tau = ThresholdSpec(opts["threshold"]).draw(ens.m, opts["seed"])
    if opts["threshold"] == "gaussian":
        records = quantize(y ** 2, tau, NoiseSpec(opts["sigma"], True), opts["seed"])
    else:
        records = quantize(y, tau)
    pos = int(np.sum(records.signs > 0))
    print(f"simulate: n={ens.n} m={ens.m} model={ens.model.value} "
          f"+1 signs={pos} -1 signs={ens.m - pos}")
    if opts["out"]:
        os.makedirs(opts["out"], exist_ok=True)
        path = os.path.join(opts["out"], "signdata.csv")
        with open(path, "w") as fh:
            fh.write("sign,threshold,hidden_magnitude\n")
            for j in range(records.m):
                fh.write("%d,%.17g,%.17g\n" % (int(records.signs[j]),
                                               records.thresholds[j],
                                               records.hidden_magnitudes[j]))
        save_system(build_system(records, ens),
                    os.path.join(opts["out"], "system.txt"))
        _manifest(opts, {"signdata": "signdata.csv", "system": "system.txt"})
        print(f"wrote {path}")
    return 0


def cmd_solve(opts) -> int:
    x, ens, y = _setup(opts)
    tau = ThresholdSpec(opts["threshold"]).draw(ens.m, opts["seed"])
    records = quantize(y, tau)
    system = build_system(records, ens)
    truth = x.lifted()
    eps = opts["stop_eps"]
    cfg = RkaConfig(
        max_iters=opts["max_iters"], seed=opts["seed"], report_every=5000,
        oracle_coords=None if eps is None else truth.coords,
        oracle_eps=None if eps is None else eps * float(np.sum(truth.coords ** 2)))
    t0 = time.perf_counter()
    result = kaczmarz.solve(system, None, cfg)
    cpu = time.perf_counter() - t0
    from .lifting import LiftedMatrix
    est = LiftedMatrix(result.coords, ens.n, ens.model)
    _print_recovery("solve", truth, est,
                    f" iters={result.iterations_used} "
                    f"converged={result.converged} cpu={cpu:.3f}s")
    if opts["out"]:
        os.makedirs(opts["out"], exist_ok=True)
        write_trace_csv(result, os.path.join(opts["out"], "trace.csv"))
        _manifest(opts, {"trace": "trace.csv"})
    return 0


def cmd_adaptive(opts) -> int:
    x, ens, y = _setup(opts)
    tau0 = ThresholdSpec(opts["threshold"]).draw(ens.m, opts["seed"])
    inner = RkaConfig(max_iters=opts["max_iters"] // opts["max_outer"],
                      seed=opts["seed"], report_every=5000)
    cfg = AdaptiveConfig(delta=opts["delta"], max_outer=opts["max_outer"],
                         inner=inner)
    t0 = time.perf_counter()
    tau, est, trace = refine_thresholds(x, ens, tau0, cfg)
    cpu = time.perf_counter() - t0
    _print_recovery("adaptive", x.lifted(), est,
                    f" rounds={len(trace.threshold_deltas)} "
                    f"last_delta={trace.threshold_deltas[-1]:.3g} cpu={cpu:.3f}s")
    if opts["out"]:
        os.makedirs(opts["out"], exist_ok=True)
        path = os.path.join(opts["out"], "adaptive_trace.csv")
        with open(path, "w") as fh:
            fh.write("round,threshold_delta,clamp_fraction,oracle_sq_error\n")
            rows = zip(trace.threshold_deltas, trace.clamp_fractions,
                       trace.oracle_errors)
            for k, (d, c, e) in enumerate(rows):
                fh.write("%d,%.17g,%.17g,%.17g\n" % (k, d, c, e))
        _manifest(opts, {"adaptive_trace": "adaptive_trace.csv"})
    return 0


def cmd_mle(opts) -> int:
    x, ens, y = _setup(opts)
    lam = ThresholdSpec("gaussian").draw(ens.m, opts["seed"])
    records = quantize(y ** 2, lam, NoiseSpec(opts["sigma"], True), opts["seed"])
    model = LikelihoodModel.from_records(records, ens, opts["sigma"])
    t0 = time.perf_counter()
    res = solve_mle(model, cfg=MleConfig(max_iters=min(opts["max_iters"], 50000)))
    cpu = time.perf_counter() - t0
    _print_recovery("mle", x.lifted(), res.matrix,
                    f" iters={res.iterations_used} converged={res.converged} "
                    f"grad_norm={res.final_grad_norm:.3g} cpu={cpu:.3f}s")
    return 0


def cmd_baseline(opts) -> int:
    x, ens, y = _setup(opts)
    truth = x.lifted()
    eps = opts["stop_eps"]
    cfg = PgConfig(
        alpha=opts["alpha"], max_iters=min(opts["max_iters"], 100_000),
        oracle_coords=None if eps is None else truth.coords,
        oracle_eps=None if eps is None else eps * float(np.sum(truth.coords ** 2)))
    t0 = time.perf_counter()
    if opts["method"] == "phaselift":
        res = phaselift(y ** 2, ens, cfg)
    elif opts["method"] == "onebit-phaselift":
        tau = ThresholdSpec(opts["threshold"]).draw(ens.m, opts["seed"])
        res = onebit_phaselift(quantize(y, tau), ens, cfg)
    else:
        lam = ThresholdSpec("gaussian").draw(ens.m, opts["seed"])
        records = quantize(y ** 2, lam, NoiseSpec(opts["sigma"], True),
                           opts["seed"])
        res = noisy_phaselift(records, ens, opts["sigma"], cfg)
    cpu = time.perf_counter() - t0
    _print_recovery(opts["method"], truth, res.matrix,
                    f" iters={res.iterations_used} converged={res.converged} "
                    f"cpu={cpu:.3f}s")
    return 0


def cmd_sweep(opts, args) -> int:
    # explicit flags narrow the preset grid; unset flags leave it alone
    overrides: Dict[str, object] = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed0"] = args.seed
    if args.m is not None:
        overrides["m_values"] = (args.m,)
    if args.n is not None:
        overrides["n"] = args.n
    if args.sigma is not None:
        overrides["sigmas"] = (args.sigma,)
    if args.max_iters is not None:
        overrides["rka_max_iters"] = args.max_iters
    out = opts["out"] or f"sweep-{args.preset}"
    reports = run_sweep(args.preset, overrides, out_dir=out)
    print(f"sweep {args.preset}: {len(reports)} rows -> {out}/metrics.csv")
    return 0


def cmd_bounds(opts, args) -> int:
    floor = min_samples_dimension(opts["n"])
    print(f"dimension floor: n={opts['n']} needs m >= {floor}")
    if args.eps0 is not None:
        m_req = min_samples_error_bound(
            args.eps0, args.gamma1, args.eps1, args.q,
            args.iters if args.iters is not None else 100_000,
            args.omega0 if args.omega0 is not None else 1.0)
        print(f"error bound: m >= {m_req}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args)
        if args.command == "simulate":
            return cmd_simulate(opts)
        if args.command == "solve":
            return cmd_solve(opts)
        if args.command == "adaptive":
            return cmd_adaptive(opts)
        if args.command == "mle":
            return cmd_mle(opts)
        if args.command == "baseline":
            return cmd_baseline(opts)
        if args.command == "sweep":
            return cmd_sweep(opts, args)
        if args.command == "bounds":
            return cmd_bounds(opts, args)
    except OneBitPrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _manifest(opts, files: Dict[str, str]) -> None:
    path = os.path.join(opts["out"], "manifest.json")
    payload = {"options": {k: v for k, v in opts.items() if k != "out"},
               "files": files}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


if __name__ == "__main__":
    sys.exit(main())
