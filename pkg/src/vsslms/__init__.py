"""Variable step-size LMS adaptive channel estimation.

A numpy library implementing the invariant-step LMS estimator, the
iteration-promoting decaying-step variant, and the error-driven
variable-step baseline, together with the seeded Monte Carlo harness used
to benchmark their convergence speed and steady-state error.
"""

__version__ = "0.1.0"

from .analysis import (
    Algorithm,
    ComplexityCount,
    SteadyStateBound,
    average_mse,
    estimate_lambda_max,
    op_count,
    sample_covariance,
    steady_state_empirical,
    steady_state_lower_bound,
    to_db,
)
from .errors import ConfigurationError, DivergenceError, StabilityError, ValidationError
from .filters import (
    ErrorDrivenStep,
    FilterState,
    InvariantStep,
    IterationPromotingStep,
    Sample,
    StepSizeSchedule,
    error_driven_for_snr,
    initial_state,
    lms_update,
    prediction_error,
    step_size,
    update_vss_momentum,
)
from .harness import (
    DEFAULT_MASTER_SEED,
    MseTrajectory,
    TrialConfig,
    compare_summary,
    convergence_iteration,
    default_algorithms,
    is_unstable,
    run_experiment,
    run_trial,
    trial_realization,
)
from .signals import (
    Channel,
    NoiseModel,
    TrainingSequence,
    draw_channel,
    draw_training,
    noise_stream,
    observe,
    regressor_at,
)

__all__ = [
    "Algorithm",
    "Channel",
    "ComplexityCount",
    "ConfigurationError",
    "DEFAULT_MASTER_SEED",
    "DivergenceError",
    "ErrorDrivenStep",
    "FilterState",
    "InvariantStep",
    "IterationPromotingStep",
    "MseTrajectory",
    "NoiseModel",
    "Sample",
    "StabilityError",
    "SteadyStateBound",
    "StepSizeSchedule",
    "TrainingSequence",
    "TrialConfig",
    "ValidationError",
    "average_mse",
    "compare_summary",
    "convergence_iteration",
    "default_algorithms",
    "draw_channel",
    "draw_training",
    "error_driven_for_snr",
    "estimate_lambda_max",
    "initial_state",
    "is_unstable",
    "lms_update",
    "noise_stream",
    "observe",
    "op_count",
    "prediction_error",
    "regressor_at",
    "run_experiment",
    "run_trial",
    "sample_covariance",
    "steady_state_empirical",
    "steady_state_lower_bound",
    "step_size",
    "to_db",
    "trial_realization",
    "update_vss_momentum",
]
