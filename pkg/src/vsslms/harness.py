"""Seeded Monte Carlo experiments: M independent trials per configuration,
averaged tap-error curves, and convergence/steady-state summaries.

Seeding
-------
Every trial derives three independent sub-streams from
``SeedSequence((master_seed, trial_index, k))`` with k = 0 (channel),
1 (training), 2 (noise). All algorithms inside one trial therefore consume
the identical channel/signal/noise realization (paired comparison, common
random numbers), and results are a pure function of the configuration no
matter how trials are scheduled.

Trajectories record the tap error ||w - w(n)||^2 of the state *entering*
iteration n, so the first point is always the full channel energy ||w||^2.

Determinism
-----------
Trials are averaged in trial-index order with a fixed reduction
(``numpy.mean`` over a stacked array), so repeated runs of the same
configuration are bit-identical. The hot loop is compiled with numba
(IEEE semantics, no fastmath); ``engine="reference"`` selects the pure
per-sample path built from ``vsslms.filters`` instead, which matches the
kernel to floating-point rounding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import signals
from .analysis import WHITE_PN_LAMBDA_MAX, steady_state_empirical, to_db
from .errors import ConfigurationError, DivergenceError
from .filters import (
    ErrorDrivenStep,
    FilterState,
    InvariantStep,
    IterationPromotingStep,
    Sample,
    StepSizeSchedule,
    initial_state,
    lms_update,
)

#: Fixed default master seed so committed expected-summary artifacts are
#: reproducible; override per experiment.
DEFAULT_MASTER_SEED = 20200511

_CHANNEL_STREAM, _TRAINING_STREAM, _NOISE_STREAM = 0, 1, 2

#: Averaged-curve points within this factor of the tail mean count as
#: converged (3 dB).
_CONVERGENCE_FACTOR = 10.0 ** 0.3

#: Tail fraction used for the empirical steady state of averaged curves.
STEADY_STATE_TAIL_FRACTION = 0.2


def default_algorithms() -> tuple:
    """Benchmark trio: two invariant step sizes and the decaying schedule."""
    return (
        ("iss-0.05", InvariantStep(0.05)),
        ("iss-0.005", InvariantStep(0.005)),
        ("ipvss-0.005", IterationPromotingStep(mu0=0.05, phi=0.005)),
    )


@dataclass(frozen=True)
class TrialConfig:
    """One complete experiment description.

    ``algorithms`` is a sequence of (name, schedule) pairs; names must be
    unique. All trials of all algorithms share realizations trial-by-trial.
    """

    snr_db: float
    n_taps: int = 16
    iterations: int = 5000
    num_trials: int = 1000
    algorithms: tuple = field(default_factory=default_algorithms)
    master_seed: int = DEFAULT_MASTER_SEED

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple((str(n), s) for n, s in self.algorithms))
        if self.n_taps < 1:
            raise ConfigurationError(f"n_taps must be >= 1, got {self.n_taps}")
        if self.iterations < self.n_taps:
            raise ConfigurationError(
                f"iterations ({self.iterations}) must be >= n_taps ({self.n_taps})"
            )
        if self.num_trials < 1:
            raise ConfigurationError(f"num_trials must be >= 1, got {self.num_trials}")
        if not self.algorithms:
            raise ConfigurationError("at least one algorithm is required")
        names = [name for name, _ in self.algorithms]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"algorithm names must be unique, got {names}")
        for name, schedule in self.algorithms:
            mu_start = getattr(schedule, "mu", getattr(schedule, "mu0", None))
            if mu_start is not None and mu_start >= 1.0 / WHITE_PN_LAMBDA_MAX:
                warnings.warn(
                    f"algorithm {name!r}: step size {mu_start} >= 1/lambda_max "
                    f"({1.0 / WHITE_PN_LAMBDA_MAX:g}) for white unit-power training",
                    stacklevel=2,
                )

    @property
    def noise_model(self) -> signals.NoiseModel:
        return signals.NoiseModel(snr_db=self.snr_db)


@dataclass(frozen=True)
class MseTrajectory:
    """Averaged learning curve for one algorithm plus its summary scalars.

    ``steady_state`` is the tail mean of the averaged curve;
    ``convergence_iteration`` is the first 1-based iteration whose averaged
    MSE lies within 3 dB of it. ``steady_state_se`` is the Monte Carlo
    standard error of the steady state across trials (None when only one
    trial contributed). Trials whose curves went non-finite are excluded
    from the average and listed in ``divergent_trials``.
    """

    algorithm: str
    per_iteration_mse: np.ndarray
    steady_state: float
    convergence_iteration: int
    steady_state_se: float = None
    divergent_trials: tuple = ()


def convergence_iteration(curve, steady_state: float) -> int:
    """First 1-based iteration within 3 dB of the steady-state value."""
    curve = np.asarray(curve, dtype=float)
    hits = np.nonzero(curve <= steady_state * _CONVERGENCE_FACTOR)[0]
    return int(hits[0]) + 1 if hits.size else len(curve)


def trial_realization(config: TrialConfig, trial_index: int):
    """Channel, training sequence, and noise stream for one trial.

    Derived deterministically from (master_seed, trial_index); shared by
    every algorithm of the trial.
    """
    def seed(stream):
        return np.random.SeedSequence((config.master_seed, trial_index, stream))

    channel = signals.draw_channel(config.n_taps, seed(_CHANNEL_STREAM))
    training = signals.draw_training(config.iterations, seed(_TRAINING_STREAM))
    noise = signals.noise_stream(config.iterations, config.noise_model, seed(_NOISE_STREAM))
    return channel, training, noise


# --- trial simulation engines ----------------------------------------------

_KERNEL = None

_INVARIANT, _ITERATION_PROMOTING, _ERROR_DRIVEN = 0, 1, 2


def _schedule_params(schedule: StepSizeSchedule):
    if isinstance(schedule, InvariantStep):
        return _INVARIANT, schedule.mu, 0.0, 0.0
    if isinstance(schedule, IterationPromotingStep):
        return _ITERATION_PROMOTING, schedule.mu0, schedule.phi, 0.0
    if isinstance(schedule, ErrorDrivenStep):
        return _ERROR_DRIVEN, schedule.mu0, schedule.eta, schedule.c
    raise ConfigurationError(f"unknown schedule type {type(schedule).__name__}")


def _get_kernel():
    """Compile the per-trial loop lazily; numba caches the binary on disk."""
    global _KERNEL
    if _KERNEL is None:
        from numba import njit

        @njit(cache=True)
        def kernel(w_true, training, noise, kind, a, b, c):
            n_taps = w_true.shape[0]
            total = training.shape[0]
            west = np.zeros(n_taps)
            p = np.zeros(n_taps)
            window = np.zeros(n_taps)
            traj = np.empty(total)
            diverged_at = 0
            for n in range(1, total + 1):
                for k in range(n_taps - 1, 0, -1):
                    window[k] = window[k - 1]
                window[0] = training[n - 1]

                s = 0.0
                for k in range(n_taps):
                    d = w_true[k] - west[k]
                    s += d * d
                traj[n - 1] = s

                y = noise[n - 1]
                for k in range(n_taps):
                    y += w_true[k] * window[k]
                e = y
                for k in range(n_taps):
                    e -= west[k] * window[k]

                if kind == 0:
                    mu = a
                elif kind == 1:
                    mu = a / n
                    if not mu > b:
                        mu = b
                else:
                    power = 0.0
                    for k in range(n_taps):
                        power += window[k] * window[k]
                    if power > 0.0:
                        coef = (1.0 - b) * e / power
                        for k in range(n_taps):
                            p[k] = b * p[k] + coef * window[k]
                    pp = 0.0
                    for k in range(n_taps):
                        pp += p[k] * p[k]
                    mu = a * (pp / (pp + c))

                gain = mu * e
                finite = True
                for k in range(n_taps):
                    west[k] += gain * window[k]
                    if not np.isfinite(west[k]):
                        finite = False
                if not finite:
                    diverged_at = n
                    for j in range(n, total):
                        traj[j] = np.nan
                    break
            return traj, diverged_at

        _KERNEL = kernel
    return _KERNEL


def _simulate_kernel(channel, training, noise, schedule):
    kind, a, b, c = _schedule_params(schedule)
    traj, _ = _get_kernel()(channel.taps, training.symbols, noise, kind, a, b, c)
    return traj


def _simulate_reference(channel, training, noise, schedule):
    """Pure per-sample path: sequences ``vsslms.filters`` operations."""
    total = len(training)
    state = initial_state(len(channel))
    traj = np.empty(total)
    for n in range(1, total + 1):
        diff = channel.taps - state.taps
        traj[n - 1] = float(np.dot(diff, diff))
        x = signals.regressor_at(training, n, len(channel))
        y = float(np.dot(channel.taps, x)) + noise[n - 1]
        try:
            state, _ = lms_update(state, Sample(regressor=x, observation=y), schedule)
        except DivergenceError as exc:
            traj[exc.iteration:] = np.nan
            break
    return traj


def run_trial(config: TrialConfig, algorithm_index: int, trial_index: int,
              engine: str = "kernel") -> np.ndarray:
    """Per-iteration squared tap-error curve for one (algorithm, trial) pair.

    A divergent trial is not silently dropped: the curve carries NaN from
    the iteration of divergence onward, which ``run_experiment`` detects
    and reports.
    """
    if not 0 <= algorithm_index < len(config.algorithms):
        raise ConfigurationError(f"algorithm_index {algorithm_index} out of range")
    if not 0 <= trial_index < config.num_trials:
        raise ConfigurationError(f"trial_index {trial_index} out of range")
    channel, training, noise = trial_realization(config, trial_index)
    _, schedule = config.algorithms[algorithm_index]
    if engine == "kernel":
        return _simulate_kernel(channel, training, noise, schedule)
    if engine == "reference":
        return _simulate_reference(channel, training, noise, schedule)
    raise ConfigurationError(f"unknown engine {engine!r}")


def run_experiment(config: TrialConfig, engine: str = "kernel") -> list:
    """Averaged MSE trajectory per algorithm over ``num_trials`` paired trials.

    Curves are averaged in trial-index order; divergent trials are excluded
    from the average and flagged on the returned trajectory.
    """
    results = []
    for index, (name, _) in enumerate(config.algorithms):
        curves = np.stack([
            run_trial(config, index, trial, engine=engine)
            for trial in range(config.num_trials)
        ])
        finite = np.all(np.isfinite(curves), axis=1)
        divergent = tuple(int(t) for t in np.nonzero(~finite)[0])
        if not finite.any():
            raise DivergenceError(0, f"algorithm {name!r}: all {config.num_trials} trials diverged")
        averaged = curves[finite].mean(axis=0)
        steady = steady_state_empirical(averaged, STEADY_STATE_TAIL_FRACTION)
        tail = math.ceil(STEADY_STATE_TAIL_FRACTION * averaged.shape[0])
        per_trial_tails = curves[finite, -tail:].mean(axis=1)
        se = (
            float(np.std(per_trial_tails, ddof=1) / math.sqrt(per_trial_tails.size))
            if per_trial_tails.size > 1 else None
        )
        results.append(MseTrajectory(
            algorithm=name,
            per_iteration_mse=averaged,
            steady_state=steady,
            convergence_iteration=convergence_iteration(averaged, steady),
            steady_state_se=se,
            divergent_trials=divergent,
        ))
    return results


def is_unstable(trajectories, num_trials: int) -> bool:
    """True when any algorithm lost more than 1% of its trials to divergence."""
    return any(len(t.divergent_trials) > 0.01 * num_trials for t in trajectories)


def compare_summary(trajectories) -> dict:
    """Per-algorithm steady state (dB), convergence iteration, and pairwise
    steady-state gaps in dB. Requires at least two equal-length curves."""
    if len(trajectories) < 2:
        raise ConfigurationError("need at least two trajectories to compare")
    lengths = {len(t.per_iteration_mse) for t in trajectories}
    if len(lengths) != 1:
        raise ConfigurationError(f"trajectory lengths differ: {sorted(lengths)}")
    rows = [
        {
            "algorithm": t.algorithm,
            "steady_state": t.steady_state,
            "steady_state_db": to_db(t.steady_state),
            "steady_state_se": t.steady_state_se,
            "convergence_iteration": t.convergence_iteration,
            "divergent_trials": list(t.divergent_trials),
        }
        for t in trajectories
    ]
    gaps = []
    for i, first in enumerate(trajectories):
        for second in trajectories[i + 1:]:
            gaps.append({
                "first": first.algorithm,
                "second": second.algorithm,
                "gap_db": to_db(first.steady_state) - to_db(second.steady_state),
            })
    return {"algorithms": rows, "pairwise_gaps_db": gaps}
