"""Closed-form steady-state bounds, the empirical MSE metric, and the
per-iteration arithmetic cost model for the three estimators."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, StabilityError
from .signals import Channel

#: Largest eigenvalue of the input covariance for i.i.d. +1/-1 training
#: (R_xx is the identity, so lambda_max = 1). Used by config validation;
#: for non-white inputs use ``estimate_lambda_max``.
WHITE_PN_LAMBDA_MAX = 1.0


class Algorithm(enum.Enum):
    ISS_LMS = "iss-lms"
    VSS_LMS = "vss-lms"
    IPVSS_LMS = "ipvss-lms"


@dataclass(frozen=True)
class ComplexityCount:
    """Multiplications and additions per adaptive iteration."""

    multiplications: int
    additions: int


def op_count(algorithm: Algorithm, n_taps: int) -> ComplexityCount:
    """Arithmetic cost per iteration as a function of filter length.

    All three estimators are linear in N: the invariant-step filter costs
    (2N, 2N+1), the error-driven filter (6N+6, 5N-1), and the
    iteration-promoting filter (2N+1, 2N+1) -- one extra multiplication for
    the mu0/n division, no error tracking.
    """
    if n_taps < 1:
        raise ConfigurationError(f"n_taps must be >= 1, got {n_taps}")
    n = n_taps
    if algorithm is Algorithm.ISS_LMS:
        return ComplexityCount(2 * n, 2 * n + 1)
    if algorithm is Algorithm.VSS_LMS:
        return ComplexityCount(6 * n + 6, 5 * n - 1)
    if algorithm is Algorithm.IPVSS_LMS:
        return ComplexityCount(2 * n + 1, 2 * n + 1)
    raise ConfigurationError(f"unknown algorithm {algorithm!r}")


def steady_state_lower_bound(lambda_max: float, noise_variance: float, step: float) -> float:
    """Closed-form steady-state MSE floor lambda_max * var / (2 - 3 * step * var).

    Only defined while the denominator stays positive; otherwise the step
    violates the expression's stability region and ``StabilityError`` is
    raised. As step -> 0 the bound tends to lambda_max * var / 2.
    """
    denom = 2 - 3 * step * noise_variance
    if denom <= 0:
        raise StabilityError(
            f"bound undefined: 2 - 3*step*variance = {denom} <= 0 "
            f"(step={step}, variance={noise_variance})"
        )
    return lambda_max * noise_variance / denom


@dataclass(frozen=True)
class SteadyStateBound:
    """Evaluated steady-state bound with its inputs kept alongside."""

    lambda_max: float
    noise_variance: float
    step: float
    value: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "value",
            steady_state_lower_bound(self.lambda_max, self.noise_variance, self.step),
        )


def average_mse(truth, estimates) -> float:
    """Monte Carlo average (1/M) * sum_i ||w - w_i(n)||^2 at one iteration.

    ``truth`` may be a ``Channel`` or a plain tap vector; ``estimates`` is
    the list of per-trial tap estimates at the same iteration.
    """
    w = truth.taps if isinstance(truth, Channel) else np.asarray(truth)
    if len(estimates) < 1:
        raise ConfigurationError("estimates must contain at least one trial")
    total = 0.0
    for est in estimates:
        est = np.asarray(est)
        if est.shape != w.shape:
            raise ConfigurationError(
                f"estimate shape {est.shape} != truth shape {w.shape}"
            )
        diff = w - est
        total += float(np.dot(diff, diff))
    return total / len(estimates)


def steady_state_empirical(trajectory, tail_fraction: float = 0.2) -> float:
    """Mean of the final ceil(tail_fraction * length) points of an MSE curve.

    Accepts a raw curve or anything exposing ``per_iteration_mse``.
    """
    curve = np.asarray(getattr(trajectory, "per_iteration_mse", trajectory), dtype=float)
    if not 0 < tail_fraction <= 1:
        raise ConfigurationError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    if len(curve) < 10:
        raise ConfigurationError(f"trajectory too short ({len(curve)} < 10 points)")
    k = math.ceil(tail_fraction * len(curve))
    return float(np.mean(curve[-k:]))


def sample_covariance(regressors) -> np.ndarray:
    """Sample estimate of R_xx = E[x x'] from stacked regressor rows."""
    x = np.asarray(regressors, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ConfigurationError("regressors must be a non-empty (samples, taps) array")
    return x.T @ x / x.shape[0]


def estimate_lambda_max(regressors) -> float:
    """Largest eigenvalue of the sample input covariance."""
    return float(np.linalg.eigvalsh(sample_covariance(regressors))[-1])


def to_db(value: float) -> float:
    """Power ratio in decibels: 10 * log10(value)."""
    return 10.0 * math.log10(value) if value > 0 else -math.inf
