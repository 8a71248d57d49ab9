"""Shared fixtures for the heavier Monte Carlo runs."""

import pytest

from vsslms import (
    DEFAULT_MASTER_SEED,
    InvariantStep,
    IterationPromotingStep,
    TrialConfig,
    run_experiment,
)

SNR_SWEEP = (0.0, 5.0, 10.0, 15.0, 20.0)


@pytest.fixture(scope="session")
def snr_sweep_trajectories():
    """Benchmark pair (invariant mu=0.05 vs decaying-to-0.005) across the
    full SNR sweep at M=100, T=5000."""
    results = {}
    for snr_db in SNR_SWEEP:
        config = TrialConfig(
            snr_db=snr_db,
            n_taps=16,
            iterations=5000,
            num_trials=100,
            algorithms=(
                ("iss-0.05", InvariantStep(0.05)),
                ("ipvss-0.005", IterationPromotingStep(mu0=0.05, phi=0.005)),
            ),
            master_seed=DEFAULT_MASTER_SEED,
        )
        results[snr_db] = {t.algorithm: t for t in run_experiment(config)}
    return results
