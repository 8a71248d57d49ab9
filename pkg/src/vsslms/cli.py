"""Command-line front end: parse an experiment spec from a JSON config file
and/or flags, run the Monte Carlo harness, and write plot-ready curve files
plus a machine-readable summary.

Exit codes: 0 success, 1 validation failure, 2 I/O failure, 3 unstable
experiment (divergent trials above threshold; artifacts are still written).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .analysis import WHITE_PN_LAMBDA_MAX, Algorithm, op_count, to_db
from .errors import ConfigurationError, ValidationError
from .filters import ErrorDrivenStep, InvariantStep, IterationPromotingStep
from .harness import (
    DEFAULT_MASTER_SEED,
    TrialConfig,
    compare_summary,
    is_unstable,
    run_experiment,
)

DEFAULT_SNR_SWEEP = (0.0, 5.0, 10.0, 15.0, 20.0)
DEFAULT_ALGORITHMS = ("iss:mu=0.05", "iss:mu=0.005", "ipvss:mu0=0.05,phi=0.005")

#: SNR used for the extra error-driven comparison run of the --figures preset.
FIGURES_VSS_SNR_DB = 15.0
FIGURES_VSS_ALGORITHMS = ("ipvss:mu0=0.05,phi=0.035", "vss:mu0=0.05")

_CONFIG_KEYS = {
    "taps": "n_taps",
    "snr_db": "snr_db",
    "iterations": "iterations",
    "trials": "num_trials",
    "algorithms": "algorithms",
    "seed": "master_seed",
    "out_dir": "out_dir",
    "format": "format",
    "figures": "figures",
}


@dataclass(frozen=True)
class ExperimentSpec:
    """Serializable mirror of the harness configuration plus output options."""

    n_taps: int = 16
    snr_db: tuple = DEFAULT_SNR_SWEEP
    iterations: int = 5000
    num_trials: int = 1000
    algorithms: tuple = DEFAULT_ALGORITHMS
    master_seed: int = DEFAULT_MASTER_SEED
    out_dir: str = "results"
    format: str = "csv"
    figures: bool = False

    def to_dict(self) -> dict:
        return {
            "taps": self.n_taps,
            "snr_db": list(self.snr_db),
            "iterations": self.iterations,
            "trials": self.num_trials,
            "algorithms": list(self.algorithms),
            "seed": self.master_seed,
            "out_dir": self.out_dir,
            "format": self.format,
            "figures": self.figures,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        values = {}
        for key, value in data.items():
            if key not in _CONFIG_KEYS:
                raise ValidationError(f"unknown configuration key", field=key)
            values[_CONFIG_KEYS[key]] = value
        if "snr_db" in values and not isinstance(values["snr_db"], (list, tuple)):
            values["snr_db"] = [values["snr_db"]]
        for name in ("snr_db", "algorithms"):
            if name in values:
                values[name] = tuple(values[name])
        return cls(**values)


# --- algorithm spec strings -------------------------------------------------

_ALGO_DEFAULTS = {
    "iss": {"mu": 0.05},
    "ipvss": {"mu0": 0.05, "phi": 0.005},
    "vss": {"mu0": 0.05, "eta": 0.97, "c": "auto"},
}


def parse_algorithm(text: str, field: str = "algorithms"):
    """Parse ``kind:key=value,...`` into (kind, params, label).

    Known kinds: ``iss`` (mu), ``ipvss`` (mu0, phi), ``vss`` (mu0, eta, c);
    ``c=auto`` resolves to the noise variance of each experiment's SNR. An
    optional ``label=`` overrides the derived curve-file name.
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind not in _ALGO_DEFAULTS:
        raise ValidationError(
            f"unknown algorithm kind {kind!r} (expected iss, ipvss, or vss)", field=field
        )
    params = dict(_ALGO_DEFAULTS[kind])
    label = None
    if rest.strip():
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ValidationError(f"malformed parameter {item!r}", field=field)
            if key == "label":
                label = value.strip()
                continue
            if key not in _ALGO_DEFAULTS[kind]:
                raise ValidationError(
                    f"unknown parameter {key!r} for {kind}", field=f"{field}.{key}"
                )
            if key == "c" and value.strip() == "auto":
                params[key] = "auto"
                continue
            try:
                params[key] = float(value)
            except ValueError:
                raise ValidationError(f"expected a number, got {value!r}", field=f"{field}.{key}")

    if kind == "iss":
        if not params["mu"] > 0:
            raise ValidationError("mu must be positive", field=f"{field}.mu")
        label = label or f"iss-{params['mu']:g}"
    elif kind == "ipvss":
        if not params["mu0"] > 0:
            raise ValidationError("mu0 must be positive", field=f"{field}.mu0")
        if not 0 < params["phi"] <= params["mu0"]:
            raise ValidationError(
                f"phi must lie in (0, mu0]; got phi={params['phi']:g}, mu0={params['mu0']:g}",
                field=f"{field}.phi",
            )
        label = label or f"ipvss-{params['phi']:g}"
    else:
        if not params["mu0"] > 0:
            raise ValidationError("mu0 must be positive", field=f"{field}.mu0")
        if not 0 <= params["eta"] < 1:
            raise ValidationError("eta must lie in [0, 1)", field=f"{field}.eta")
        if params["c"] != "auto" and not params["c"] > 0:
            raise ValidationError("c must be positive or 'auto'", field=f"{field}.c")
        label = label or f"vss-{params['mu0']:g}"

    mu_start = params.get("mu", params.get("mu0"))
    if mu_start >= 1.0 / WHITE_PN_LAMBDA_MAX:
        print(
            f"warning: {label}: step size {mu_start:g} >= 1/lambda_max for white "
            f"unit-power training; the filter may diverge",
            file=sys.stderr,
        )
    return kind, params, label


def materialize_algorithm(text: str, snr_db: float, field: str = "algorithms"):
    """Algorithm string -> (label, schedule) for one experiment's SNR."""
    kind, params, label = parse_algorithm(text, field=field)
    if kind == "iss":
        return label, InvariantStep(mu=params["mu"])
    if kind == "ipvss":
        return label, IterationPromotingStep(mu0=params["mu0"], phi=params["phi"])
    c = params["c"]
    if c == "auto":
        c = 10.0 ** (-snr_db / 10.0)
    return label, ErrorDrivenStep(mu0=params["mu0"], c=c, eta=params["eta"])


# --- config file / flag merging ---------------------------------------------

def load_config_file(path) -> dict:
    """Flat JSON object with the documented keys; unknown keys rejected later."""
    raw = Path(path).read_text()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file is not valid JSON: {exc}", field=str(path))
    if not isinstance(data, dict):
        raise ValidationError("config file must contain a JSON object", field=str(path))
    return data


def parse_config(config_path=None, **overrides) -> ExperimentSpec:
    """Defaults <- config file <- flags, then validate the merged spec."""
    spec = ExperimentSpec.from_dict(load_config_file(config_path)) if config_path else ExperimentSpec()
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if "snr_db" in overrides:
        overrides["snr_db"] = tuple(float(v) for v in overrides["snr_db"])
    if "algorithms" in overrides:
        overrides["algorithms"] = tuple(overrides["algorithms"])
    spec = replace(spec, **overrides)
    validate_spec(spec)
    return spec


def validate_spec(spec: ExperimentSpec):
    if not isinstance(spec.n_taps, int) or spec.n_taps < 1:
        raise ValidationError(f"must be a positive integer, got {spec.n_taps!r}", field="taps")
    if not isinstance(spec.iterations, int) or spec.iterations < spec.n_taps:
        raise ValidationError(
            f"must be an integer >= taps ({spec.n_taps}), got {spec.iterations!r}",
            field="iterations",
        )
    if not isinstance(spec.num_trials, int) or spec.num_trials < 1:
        raise ValidationError(f"must be a positive integer, got {spec.num_trials!r}", field="trials")
    if not spec.snr_db:
        raise ValidationError("at least one SNR point is required", field="snr_db")
    for i, snr in enumerate(spec.snr_db):
        if not isinstance(snr, (int, float)):
            raise ValidationError(f"expected a number, got {snr!r}", field=f"snr_db[{i}]")
    if spec.format not in ("csv", "json"):
        raise ValidationError(f"must be 'csv' or 'json', got {spec.format!r}", field="format")
    if not spec.algorithms:
        raise ValidationError("at least one algorithm is required", field="algorithms")
    labels = []
    for i, text in enumerate(spec.algorithms):
        _, _, label = parse_algorithm(text, field=f"algorithms[{i}]")
        labels.append(label)
    if len(set(labels)) != len(labels):
        raise ValidationError(f"algorithm labels must be unique, got {labels}", field="algorithms")
    if not isinstance(spec.master_seed, int) or spec.master_seed < 0:
        raise ValidationError(f"must be a non-negative integer, got {spec.master_seed!r}", field="seed")


# --- experiment execution and artifact writing ------------------------------

def _experiments(spec: ExperimentSpec):
    """(label, TrialConfig) pairs for the spec, including the --figures extra."""
    runs = []
    for snr in spec.snr_db:
        algorithms = tuple(
            materialize_algorithm(text, snr, field=f"algorithms[{i}]")
            for i, text in enumerate(spec.algorithms)
        )
        runs.append((f"snr{snr:g}dB", TrialConfig(
            snr_db=float(snr),
            n_taps=spec.n_taps,
            iterations=spec.iterations,
            num_trials=spec.num_trials,
            algorithms=algorithms,
            master_seed=spec.master_seed,
        )))
    if spec.figures:
        algorithms = tuple(
            materialize_algorithm(text, FIGURES_VSS_SNR_DB) for text in FIGURES_VSS_ALGORITHMS
        )
        runs.append((f"vss-comparison-snr{FIGURES_VSS_SNR_DB:g}dB", TrialConfig(
            snr_db=FIGURES_VSS_SNR_DB,
            n_taps=spec.n_taps,
            iterations=spec.iterations,
            num_trials=spec.num_trials,
            algorithms=algorithms,
            master_seed=spec.master_seed,
        )))
    return runs


def _write_curve(path: Path, label: str, trajectory, fmt: str):
    mse = [float(v) for v in trajectory.per_iteration_mse]
    db = [to_db(v) for v in mse]
    if fmt == "csv":
        lines = ["iteration,mse,mse_db"]
        lines.extend(
            f"{i + 1},{mse[i]!r},{db[i]!r}" for i in range(len(mse))
        )
        path.write_text("\n".join(lines) + "\n")
    else:
        payload = {
            "experiment": label,
            "algorithm": trajectory.algorithm,
            "iteration": list(range(1, len(mse) + 1)),
            "mse": [float(v) for v in mse],
            "mse_db": [v if v == v and abs(v) != float("inf") else None for v in db],
        }
        path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _summary_for(trajectories) -> dict:
    if len(trajectories) >= 2:
        return compare_summary(trajectories)
    t = trajectories[0]
    return {
        "algorithms": [{
            "algorithm": t.algorithm,
            "steady_state": t.steady_state,
            "steady_state_db": to_db(t.steady_state),
            "steady_state_se": t.steady_state_se,
            "convergence_iteration": t.convergence_iteration,
            "divergent_trials": list(t.divergent_trials),
        }],
        "pairwise_gaps_db": [],
    }


def run(spec: ExperimentSpec) -> int:
    """Execute every experiment of the spec and write artifacts to out_dir.

    Writes one curve file per (experiment, algorithm), a summary.json with
    steady states, convergence iterations, and pairwise gaps, and a
    provenance.json recording the fully resolved configuration and seed.
    """
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ext = "csv" if spec.format == "csv" else "json"
    summaries = {}
    unstable = False
    for label, config in _experiments(spec):
        trajectories = run_experiment(config)
        for trajectory in trajectories:
            _write_curve(out / f"{label}_{trajectory.algorithm}.{ext}", label, trajectory, spec.format)
        experiment_unstable = is_unstable(trajectories, config.num_trials)
        unstable = unstable or experiment_unstable
        summaries[label] = {
            "snr_db": config.snr_db,
            "unstable": experiment_unstable,
            **_summary_for(trajectories),
        }
        state = "UNSTABLE" if experiment_unstable else "ok"
        steady = ", ".join(
            f"{t.algorithm}: {to_db(t.steady_state):.2f} dB @ n={t.convergence_iteration}"
            for t in trajectories
        )
        print(f"{label}: {state} [{steady}]")
    (out / "summary.json").write_text(json.dumps(summaries, sort_keys=True, indent=1) + "\n")
    provenance = {
        "artifact": "vsslms",
        "version": __version__,
        "master_seed": spec.master_seed,
        "config": spec.to_dict(),
    }
    (out / "provenance.json").write_text(json.dumps(provenance, sort_keys=True, indent=1) + "\n")
    return 3 if unstable else 0


def report_complexity(n_taps: int) -> str:
    """Three-row multiplications/additions table for the given filter length."""
    if n_taps < 1:
        raise ValidationError(f"must be a positive integer, got {n_taps}", field="complexity")
    rows = [(a.value, op_count(a, n_taps)) for a in Algorithm]
    width = max(len(name) for name, _ in rows)
    lines = [f"arithmetic cost per iteration (N = {n_taps})"]
    lines.append(f"{'algorithm':<{width}}  multiplications  additions")
    for name, count in rows:
        lines.append(f"{name:<{width}}  {count.multiplications:<15d}  {count.additions:d}")
    return "\n".join(lines)


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vsslms",
        description="Variable step-size LMS channel-estimation benchmarks.",
    )
    parser.add_argument("--config", help="JSON config file (flags override its values)")
    parser.add_argument("--snr-db", nargs="+", type=float, metavar="DB",
                        help="SNR points to run (default: 0 5 10 15 20)")
    parser.add_argument("--taps", type=int, help="channel length N (default: 16)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials M (default: 1000)")
    parser.add_argument("--iterations", type=int, help="iterations per trial (default: 5000)")
    parser.add_argument("--algo", action="append", metavar="KIND:K=V,...",
                        help="algorithm spec, repeatable; kinds: iss:mu=, "
                             "ipvss:mu0=,phi=, vss:mu0=,eta=,c= (c=auto tracks SNR)")
    parser.add_argument("--seed", type=int, help=f"master seed (default: {DEFAULT_MASTER_SEED})")
    parser.add_argument("--out-dir", help="output directory (default: results)")
    parser.add_argument("--format", choices=("csv", "json"), help="curve file format")
    parser.add_argument("--figures", action="store_true", default=None,
                        help="preset: the five SNR points plus the error-driven "
                             "comparison at phi=0.035")
    parser.add_argument("--complexity", type=int, metavar="N",
                        help="print the arithmetic-cost table for length N and exit")
    parser.add_argument("--version", action="version", version=f"vsslms {__version__}")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.complexity is not None:
            print(report_complexity(args.complexity))
            return 0
        spec = parse_config(
            args.config,
            snr_db=args.snr_db,
            n_taps=args.taps,
            num_trials=args.trials,
            iterations=args.iterations,
            algorithms=args.algo,
            master_seed=args.seed,
            out_dir=args.out_dir,
            format=args.format,
            figures=args.figures,
        )
    except (ValidationError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(spec)
    except (ValidationError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
