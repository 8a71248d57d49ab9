"""Per-sample LMS tap updates parameterized by a step-size schedule.

Three schedules are supported:

* ``InvariantStep`` -- the classic constant step size mu.
* ``IterationPromotingStep`` -- mu(n) = max(mu0 / n, phi): a 1/n decay that
  starts at mu0 and is clamped at the hard floor phi from iteration
  ceil(mu0 / phi) onward.
* ``ErrorDrivenStep`` -- mu(n) = mu0 * p'p / (p'p + c), where p is a smoothed
  normalized error-direction vector maintained alongside the taps.

All operations are pure: they never mutate their inputs and return fresh
``FilterState`` values, so states can be freely shared between trials or
threads. Sequencing within a single signal is the caller's job (see
``vsslms.harness``).

The arithmetic is dtype-agnostic on purpose: the operations work on float
arrays in production and on object arrays of ``fractions.Fraction`` in exact
verification tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .errors import ConfigurationError, DivergenceError


@dataclass(frozen=True)
class InvariantStep:
    """Constant step size; mu must be positive.

    Mean-square stability additionally requires mu < 1/lambda_max of the
    input covariance; that check depends on the input statistics and is
    performed at experiment-configuration time, not here.
    """

    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ConfigurationError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class IterationPromotingStep:
    """Decaying step size mu0 / n clamped at the hard floor phi.

    Requires 0 < phi <= mu0 so the schedule is non-increasing in n. The
    floor is permanent: once reached it never re-expands.
    """

    mu0: float
    phi: float

    def __post_init__(self):
        if not self.mu0 > 0:
            raise ConfigurationError(f"mu0 must be positive, got {self.mu0}")
        if not 0 < self.phi <= self.mu0:
            raise ConfigurationError(
                f"phi must lie in (0, mu0]; got phi={self.phi}, mu0={self.mu0}"
            )

    @property
    def floor_iteration(self) -> int:
        """First iteration index at which the step is clamped at phi."""
        return math.ceil(self.mu0 / self.phi)


@dataclass(frozen=True)
class ErrorDrivenStep:
    """Error-driven variable step size mu0 * p'p / (p'p + c).

    ``p`` is the smoothed error-direction vector updated per sample with
    smoothing factor eta in [0, 1); c is a positive constant on the order
    of the inverse SNR (see ``error_driven_for_snr``). Produced step sizes
    lie in [0, mu0), approaching mu0 as p'p grows without bound.
    """

    mu0: float
    c: float
    eta: float = 0.97

    def __post_init__(self):
        if not self.mu0 > 0:
            raise ConfigurationError(f"mu0 must be positive, got {self.mu0}")
        if not self.c > 0:
            raise ConfigurationError(f"c must be positive, got {self.c}")
        if not 0 <= self.eta < 1:
            raise ConfigurationError(f"eta must lie in [0, 1), got {self.eta}")


StepSizeSchedule = Union[InvariantStep, IterationPromotingStep, ErrorDrivenStep]


def error_driven_for_snr(mu0: float, snr_db: float, eta: float = 0.97) -> ErrorDrivenStep:
    """Build an ``ErrorDrivenStep`` with c = 1 / SNR_linear for unit-power training."""
    return ErrorDrivenStep(mu0=mu0, c=10.0 ** (-snr_db / 10.0), eta=eta)


@dataclass(frozen=True)
class FilterState:
    """Tap estimate w(n), the 1-based iteration counter, and the auxiliary
    error-direction vector used by the error-driven schedule.

    ``vss_momentum`` stays all-zero under the invariant and
    iteration-promoting schedules; it is only advanced by
    ``update_vss_momentum``.
    """

    taps: np.ndarray
    iteration: int = 1
    vss_momentum: np.ndarray = None

    def __post_init__(self):
        if self.iteration < 1:
            raise ConfigurationError(f"iteration must be >= 1, got {self.iteration}")
        if self.vss_momentum is None:
            object.__setattr__(self, "vss_momentum", np.zeros_like(self.taps))
        elif len(self.vss_momentum) != len(self.taps):
            raise ConfigurationError(
                f"vss_momentum length {len(self.vss_momentum)} != taps length {len(self.taps)}"
            )


@dataclass(frozen=True)
class Sample:
    """One training sample: the sliding regressor window x(n) and the
    observed scalar y(n)."""

    regressor: np.ndarray
    observation: float


def initial_state(n_taps: int) -> FilterState:
    """All-zero estimate at iteration 1."""
    if n_taps < 1:
        raise ConfigurationError(f"n_taps must be >= 1, got {n_taps}")
    return FilterState(taps=np.zeros(n_taps))


def prediction_error(state: FilterState, sample: Sample):
    """e(n) = y(n) - w(n)'x(n)."""
    if len(sample.regressor) != len(state.taps):
        raise ConfigurationError(
            f"regressor length {len(sample.regressor)} != taps length {len(state.taps)}"
        )
    return sample.observation - np.dot(state.taps, sample.regressor)


def step_size(schedule: StepSizeSchedule, state: FilterState, sample: Sample, error):
    """Step size mu(n) for the given schedule at the state's iteration.

    For ``ErrorDrivenStep`` the caller must already have applied
    ``update_vss_momentum`` for this sample; the step is computed from the
    state's current momentum vector.
    """
    if isinstance(schedule, InvariantStep):
        return schedule.mu
    if isinstance(schedule, IterationPromotingStep):
        decayed = schedule.mu0 / state.iteration
        return decayed if decayed > schedule.phi else schedule.phi
    if isinstance(schedule, ErrorDrivenStep):
        p = state.vss_momentum
        pp = np.dot(p, p)
        # quotient first: p'p / (p'p + c) <= 1 exactly, so the step can
        # never exceed mu0 even when p'p dwarfs c
        return schedule.mu0 * (pp / (pp + schedule.c))
    raise ConfigurationError(f"unknown schedule type {type(schedule).__name__}")


def update_vss_momentum(state: FilterState, sample: Sample, error, eta) -> FilterState:
    """Advance the smoothed error-direction vector:
    p' = eta * p + (1 - eta) * x * e / ||x||^2.

    A zero-power regressor would divide by zero; in that degenerate case the
    previous momentum is retained unchanged.
    """
    if not 0 <= eta < 1:
        raise ConfigurationError(f"eta must lie in [0, 1), got {eta}")
    x = sample.regressor
    power = np.dot(x, x)
    if power == 0:
        return state
    coef = (1 - eta) * error / power
    return replace(state, vss_momentum=eta * state.vss_momentum + coef * x)


def lms_update(state: FilterState, sample: Sample, schedule: StepSizeSchedule):
    """One adaptive update: w(n+1) = w(n) + mu(n) * e(n) * x(n).

    For the error-driven schedule the momentum vector is advanced first and
    the step size uses the freshly updated vector. Returns the new state
    (iteration incremented by 1) and the pre-update error e(n).

    Raises ``DivergenceError`` carrying the iteration index if the updated
    taps are non-finite.
    """
    error = prediction_error(state, sample)
    if isinstance(schedule, ErrorDrivenStep):
        state = update_vss_momentum(state, sample, error, schedule.eta)
    mu = step_size(schedule, state, sample, error)
    taps = state.taps + (mu * error) * sample.regressor
    if isinstance(taps, np.ndarray) and np.issubdtype(taps.dtype, np.inexact):
        if not np.all(np.isfinite(taps)):
            raise DivergenceError(state.iteration)
    return replace(state, taps=taps, iteration=state.iteration + 1), error
