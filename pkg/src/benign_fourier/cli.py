"""Experiment runner: ``benign-fourier <subcommand> [--config FILE] [--out DIR]``.

Each run writes one or more CSV files plus a ``.json`` sidecar per file that
records the effective configuration and the library version. Exit codes:
0 on success, 2 when the configuration fails validation, 3 when the data
cannot be interpolated.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .encodings import contiguous_strategy, strategy_from_config
from .errors import InvalidArgumentError, NonInterpolableError, UnsupportedError
from .generalization import (
    DEFAULT_HAT_C,
    TargetSpec,
    closed_form_error,
    hat_weights,
    odd_multiple_schedule,
    odd_schedule,
    power_dimension,
    random_bandlimited_target,
)
from .interpolator import WeightProfile, evaluate_real, min_norm_fit
from .oracle import McConfig, haar_weight_stats, monte_carlo_error, pinv_model
from .quantum import (
    InputState,
    benign_state,
    fit_quantum_model,
    fourier_weights_from_state,
    haar_mean_weight,
    haar_weight_variance,
)
from .spectra import FourierSeries, uniform_grid

KINDS = {
    "fit": "classical-fit",
    "sweep": "error-sweep",
    "scaling": "benign-scaling",
    "encoding": "encoding-report",
    "quantum": "quantum-fit",
    "haar": "haar-stats",
}

DEFAULTS = {
    "classical-fit": {"n": 7, "d": 35, "weights": "uniform", "n0": 5, "c": DEFAULT_HAT_C,
                      "sigma": 1.0, "target": "zero", "points": 1000},
    "error-sweep": {"n0": 15, "n": 31, "c": DEFAULT_HAT_C, "sigma": 1.0, "target": "random",
                    "schedule": "odd-multiple", "max_ratio": 15, "mc_trials": 0, "mc_eval_points": 256},
    "benign-scaling": {"n0": 15, "c": DEFAULT_HAT_C, "sigma": 1.0, "target": "random",
                       "alphas": [1.0, 1.5, 2.0], "n_list": [31, 63, 127, 255]},
    "encoding-report": {"strategies": [{"type": "hamming", "n_q": 4}, {"type": "binary", "n_q": 4},
                                       {"type": "ternary", "n_q": 4}, {"type": "golomb", "d": 4}]},
    "quantum-fit": {"d": 128, "n": 31, "n0": 15, "a": 0.1, "sigma": 1.0, "target": "random",
                    "points": 1000, "n_list": [31, 63, 127], "d_factor": 8},
    "haar-stats": {"strategy": {"type": "binary", "n_q": 4}, "samples": 10000},
}


class ConfigError(Exception):
    def __init__(self, problems):
        self.problems = problems
        super().__init__("; ".join(problems))


# validation -----------------------------------------------------------------

def _odd(v):
    return isinstance(v, int) and v >= 1 and v % 2 == 1


def _validate(kind, cfg):
    problems = []

    def need(cond, msg):
        if not cond:
            problems.append(msg)

    def odd(key):
        need(_odd(cfg.get(key)), f"{key} must be a positive odd integer")

    if "sigma" in cfg:
        need(isinstance(cfg["sigma"], (int, float)) and cfg["sigma"] >= 0, "sigma must be nonnegative")
    if "c" in cfg:
        need(isinstance(cfg["c"], (int, float)) and 0 < cfg["c"] < 1, "c must lie in (0, 1)")

    if kind == "classical-fit":
        odd("n")
        weights = cfg.get("weights")
        explicit = isinstance(weights, dict)
        need(explicit or weights in ("uniform", "hat"), "weights must be 'uniform', 'hat' or a frequency map")
        if explicit:
            try:
                _explicit_weights(weights)
            except (InvalidArgumentError, TypeError, ValueError) as exc:
                problems.append(f"weights: {exc}")
        else:
            odd("d")
            if weights == "hat":
                odd("n0")
            if _odd(cfg.get("n")) and _odd(cfg.get("d")):
                need(cfg["d"] >= cfg["n"], "d must be at least n")
        need(isinstance(cfg.get("points"), int) and cfg["points"] > 0, "points must be a positive integer")
    elif kind == "error-sweep":
        odd("n0"), odd("n")
        need(cfg.get("schedule") in ("odd-multiple", "odd"), "schedule must be 'odd-multiple' or 'odd'")
        need(isinstance(cfg.get("max_ratio"), int) and cfg["max_ratio"] >= 1, "max_ratio must be a positive integer")
        need(isinstance(cfg.get("mc_trials"), int) and (cfg["mc_trials"] == 0 or cfg["mc_trials"] >= 2),
             "mc_trials must be 0 (disabled) or at least 2")
        if _odd(cfg.get("n0")) and _odd(cfg.get("n")):
            need(cfg["n0"] <= cfg["n"], "n0 must not exceed n")
    elif kind == "benign-scaling":
        odd("n0")
        ns = cfg.get("n_list")
        need(isinstance(ns, list) and ns and all(_odd(v) for v in ns), "n_list must be a list of odd integers")
        if isinstance(ns, list) and _odd(cfg.get("n0")):
            need(all(not _odd(v) or v >= cfg["n0"] for v in ns), "every n must be at least n0")
        al = cfg.get("alphas")
        need(isinstance(al, list) and al and all(isinstance(a, (int, float)) and a > 0 for a in al),
             "alphas must be a list of positive numbers")
    elif kind == "encoding-report":
        st = cfg.get("strategies")
        need(isinstance(st, list) and st and all(isinstance(s, dict) for s in st),
             "strategies must be a nonempty list of objects")
    elif kind == "quantum-fit":
        odd("n"), odd("n0")
        d = cfg.get("d")
        need(isinstance(d, int) and d > 0 and d % 2 == 0, "d must be a positive even integer")
        if _odd(cfg.get("n0")):
            need((cfg["n0"] + 1) % 4 == 0, "n0 + 1 must be divisible by 4")
            a = cfg.get("a")
            need(isinstance(a, (int, float)) and 0 <= a <= 2 / (cfg["n0"] + 1), "a must lie in [0, 2/(n0+1)]")
        ns = cfg.get("n_list")
        need(isinstance(ns, list) and all(_odd(v) for v in ns), "n_list must be a list of odd integers")
        need(isinstance(cfg.get("d_factor"), int) and cfg["d_factor"] >= 1, "d_factor must be a positive integer")
        need(isinstance(cfg.get("points"), int) and cfg["points"] > 0, "points must be a positive integer")
    elif kind == "haar-stats":
        need(isinstance(cfg.get("strategy"), dict), "strategy must be an object")
        need(isinstance(cfg.get("samples"), int) and cfg["samples"] >= 1000, "samples must be at least 1000")

    target = cfg.get("target")
    if target is not None and not (target in ("zero", "random") or isinstance(target, dict)):
        problems.append("target must be 'zero', 'random' or an object with 'coefficients'")
    if problems:
        raise ConfigError(problems)


def _explicit_weights(mapping) -> WeightProfile:
    return WeightProfile.from_mapping({int(k): float(v) for k, v in mapping.items()})


def _target(cfg, n0, seed) -> TargetSpec:
    spec = cfg.get("target", "zero")
    if spec == "zero":
        return TargetSpec.zero()
    if spec == "random":
        return random_bandlimited_target(n0, np.random.default_rng(seed), power=cfg.get("power", 1.0))
    try:
        coeffs = {int(k): complex(v[0], v[1]) for k, v in spec["coefficients"].items()}
    except (KeyError, TypeError, ValueError, IndexError):
        raise ConfigError(["target.coefficients must map frequency to [re, im]"]) from None
    try:
        return TargetSpec(FourierSeries(coeffs))
    except InvalidArgumentError as exc:
        raise ConfigError([f"target: {exc}"]) from None


# output ---------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def emit_figure_data(columns, rows, path: Path, meta: dict):
    """Write a CSV with a header row and a JSON sidecar next to it."""
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        sidecar = dict(meta, columns=list(columns), version=__version__, values="dimensionless")
        path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


# experiments ----------------------------------------------------------------

def run_classical_fit(cfg, seed, jobs, out):
    n, d = cfg["n"], cfg["d"]
    if isinstance(cfg["weights"], dict):
        weights = _explicit_weights(cfg["weights"])
    elif cfg["weights"] == "uniform":
        weights = WeightProfile.uniform(d)
    else:
        weights = hat_weights(cfg["n0"], d, cfg["c"])
    target = _target(cfg, cfg.get("n0", n), seed)
    rng = np.random.Generator(np.random.Philox(seed))
    x_train = uniform_grid(n)
    y = target.series(x_train).real + cfg["sigma"] * rng.standard_normal(n)
    model = min_norm_fit(y, weights)
    x = np.arange(cfg["points"]) / cfg["points"]
    f, _ = evaluate_real(model, x)
    g = target.series(x).real
    meta = {"kind": "classical-fit", "config": cfg, "seed": seed}
    return [
        emit_figure_data(["x", "f", "g"], zip(x, f, g), out / "fit.csv", meta),
        emit_figure_data(["x", "y"], zip(x_train, y), out / "fit_samples.csv", meta),
    ]


def _sweep_point(d, cfg, target, seed):
    n = cfg["n"]
    w = hat_weights(cfg["n0"], d, cfg["c"])
    rep = closed_form_error(w, target, n, cfg["sigma"] ** 2)
    mc = (None, None)
    if cfg["mc_trials"]:
        mc_cfg = McConfig(cfg["mc_trials"], cfg["mc_eval_points"], seed=seed + d)
        mc = monte_carlo_error(pinv_model(w), target.series, cfg["sigma"], mc_cfg, n)
    return (d, n, rep.var, rep.bias_sq, rep.total, mc[0], mc[1])


def run_error_sweep(cfg, seed, jobs, out):
    n = cfg["n"]
    target = _target(cfg, cfg["n0"], seed)
    if cfg["schedule"] == "odd-multiple":
        ds = odd_multiple_schedule(n, cfg["max_ratio"])
    else:
        ds = odd_schedule(n, cfg["max_ratio"] * n)
    with ThreadPoolExecutor(max(1, jobs)) as pool:
        rows = sorted(pool.map(lambda d: _sweep_point(d, cfg, target, seed), ds))
    cols = ["d", "n", "var", "bias_sq", "total", "mc_estimate", "mc_stderr"]
    return [emit_figure_data(cols, rows, out / "error_sweep.csv", {"kind": "error-sweep", "config": cfg, "seed": seed})]


def run_benign_scaling(cfg, seed, jobs, out):
    target = _target(cfg, cfg["n0"], seed)

    def point(args):
        alpha, n = args
        d = power_dimension(n, alpha)
        rep = closed_form_error(hat_weights(cfg["n0"], d, cfg["c"]), target, n, cfg["sigma"] ** 2)
        return (n, d, float(alpha), rep.var, rep.bias_sq, rep.total)

    grid = [(a, n) for a in cfg["alphas"] for n in cfg["n_list"]]
    with ThreadPoolExecutor(max(1, jobs)) as pool:
        rows = sorted(pool.map(point, grid), key=lambda r: (r[2], r[0]))
    cols = ["n", "d", "alpha", "var", "bias_sq", "total"]
    return [emit_figure_data(cols, rows, out / "benign_scaling.csv", {"kind": "benign-scaling", "config": cfg, "seed": seed})]


def run_encoding_report(cfg, seed, jobs, out):
    try:
        strategies = [strategy_from_config(s) for s in cfg["strategies"]]
    except InvalidArgumentError as exc:
        raise ConfigError([f"strategies: {exc}"]) from None
    paths = []
    for i, (spec, strat) in enumerate(zip(cfg["strategies"], strategies)):
        d = strat.dim
        rows = [(k, size, size / d**2) for k, size in strat.degeneracy.sizes().items()]
        meta = {"kind": "encoding-report", "strategy": spec, "eigenvalues": strat.eigenvalues.tolist(), "seed": seed}
        paths.append(emit_figure_data(["k", "degeneracy", "nu"], rows, out / f"encoding_{i}_{strat.name}.csv", meta))
    return paths


def _quantum_loss(n, d, n0, a, sigma_sq, target):
    enc = contiguous_strategy(d)
    rows = []
    for label, state in (("benign", benign_state(n0, d, a)), ("uniform", InputState.uniform(d))):
        rep = closed_form_error(fourier_weights_from_state(enc, state), target, n, sigma_sq)
        rows.append((n, d, label, rep.var, rep.bias_sq, rep.total))
    return rows


def run_quantum_fit(cfg, seed, jobs, out):
    n, d, n0, a = cfg["n"], cfg["d"], cfg["n0"], cfg["a"]
    target = _target(cfg, n0, seed)
    rng = np.random.Generator(np.random.Philox(seed))
    x_train = uniform_grid(n)
    y = target.series(x_train).real + cfg["sigma"] * rng.standard_normal(n)
    enc = contiguous_strategy(d)
    x = np.arange(cfg["points"]) / cfg["points"]
    g = target.series(x).real
    meta = {"kind": "quantum-fit", "config": cfg, "seed": seed}
    paths = [emit_figure_data(["x", "y"], zip(x_train, y), out / "quantum_samples.csv", meta)]
    for label, state in (("benign", benign_state(n0, d, a)), ("uniform", InputState.uniform(d))):
        f = fit_quantum_model(y, enc, state)(x).real
        paths.append(emit_figure_data(["x", "f", "g"], zip(x, f, g), out / f"quantum_fit_{label}.csv", meta))

    def point(m):
        return _quantum_loss(m, cfg["d_factor"] * m, n0, a, cfg["sigma"] ** 2, target)

    with ThreadPoolExecutor(max(1, jobs)) as pool:
        rows = sorted(r for batch in pool.map(point, cfg["n_list"]) for r in batch)
    cols = ["n", "d", "state", "var", "bias_sq", "total"]
    paths.append(emit_figure_data(cols, rows, out / "quantum_scaling.csv", meta))
    return paths


def run_haar_stats(cfg, seed, jobs, out):
    try:
        strat = strategy_from_config(cfg["strategy"])
    except InvalidArgumentError as exc:
        raise ConfigError([f"strategy: {exc}"]) from None
    stats = haar_weight_stats(strat, cfg["samples"], seed)
    rows = []
    for k, s in stats.items():
        try:
            var_cf = haar_weight_variance(strat, k, strat.dim)
        except UnsupportedError:
            var_cf = None
        rows.append((k, s.mean, s.mean_stderr, haar_mean_weight(strat, k), s.variance, s.variance_stderr, var_cf))
    cols = ["k", "mean", "mean_stderr", "mean_closed", "variance", "variance_stderr", "variance_closed"]
    meta = {"kind": "haar-stats", "config": cfg, "seed": seed, "eigenvalues": strat.eigenvalues.tolist()}
    return [emit_figure_data(cols, rows, out / "haar_stats.csv", meta)]


RUNNERS = {
    "classical-fit": run_classical_fit,
    "error-sweep": run_error_sweep,
    "benign-scaling": run_benign_scaling,
    "encoding-report": run_encoding_report,
    "quantum-fit": run_quantum_fit,
    "haar-stats": run_haar_stats,
}


def load_config(kind, path):
    cfg = dict(DEFAULTS[kind])
    if path is not None:
        try:
            user = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"cannot read config {path}: {exc}"]) from None
        if not isinstance(user, dict):
            raise ConfigError(["config must be a JSON object"])
        unknown = sorted(set(user) - set(cfg) - {"seed", "power", "kind"})
        if unknown:
            raise ConfigError([f"unknown config keys: {unknown}"])
        cfg.update(user)
    return cfg


def run(kind, config_path=None, out=".", seed=None, jobs=1):
    """Run one experiment and return the written paths."""
    cfg = load_config(kind, config_path)
    if seed is None:
        seed = cfg.get("seed", 0)
    cfg.pop("seed", None)
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(["seed must be an unsigned 64-bit integer"])
    _validate(kind, cfg)
    return RUNNERS[kind](cfg, seed, jobs, Path(out))


def _build_parser():
    parser = argparse.ArgumentParser(prog="benign-fourier", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in KINDS.items():
        p = sub.add_parser(name, help=f"run the {kind} experiment")
        p.add_argument("--config", help="JSON file overriding the defaults")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--jobs", type=int, default=1, help="worker threads for sweep points")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    kind = KINDS[args.command]
    try:
        paths = run(kind, args.config, args.out, args.seed, args.jobs)
    except ConfigError as exc:
        print(json.dumps({"error": "config-validation", "kind": kind, "problems": exc.problems}), file=sys.stderr)
        return 2
    except InvalidArgumentError as exc:
        print(json.dumps({"error": "config-validation", "kind": kind, "problems": [str(exc)]}), file=sys.stderr)
        return 2
    except NonInterpolableError as exc:
        print(json.dumps({"error": "non-interpolable", "kind": kind, "mode": exc.mode, "message": str(exc)}),
              file=sys.stderr)
        return 3
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
