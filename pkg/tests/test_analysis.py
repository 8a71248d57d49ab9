"""Tests for the closed-form bound, the MSE metric, and the cost model."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from vsslms import (
    Algorithm,
    Channel,
    ComplexityCount,
    ConfigurationError,
    InvariantStep,
    NoiseModel,
    Sample,
    StabilityError,
    SteadyStateBound,
    average_mse,
    draw_channel,
    draw_training,
    initial_state,
    lms_update,
    noise_stream,
    op_count,
    regressor_at,
    steady_state_empirical,
    steady_state_lower_bound,
)


class TestOpCount:
    def test_table_at_n16(self):
        assert op_count(Algorithm.ISS_LMS, 16) == ComplexityCount(32, 33)
        assert op_count(Algorithm.VSS_LMS, 16) == ComplexityCount(102, 79)
        assert op_count(Algorithm.IPVSS_LMS, 16) == ComplexityCount(33, 33)

    def test_table_at_n1(self):
        assert op_count(Algorithm.ISS_LMS, 1) == ComplexityCount(2, 3)
        assert op_count(Algorithm.VSS_LMS, 1) == ComplexityCount(12, 4)
        assert op_count(Algorithm.IPVSS_LMS, 1) == ComplexityCount(3, 3)

    def test_affine_in_filter_length(self):
        slopes = {
            Algorithm.ISS_LMS: (2, 2),
            Algorithm.VSS_LMS: (6, 5),
            Algorithm.IPVSS_LMS: (2, 2),
        }
        sizes = [1, 8, 16, 64]
        for algorithm, (mul_slope, add_slope) in slopes.items():
            for n1 in sizes:
                for n2 in sizes:
                    a, b = op_count(algorithm, n1), op_count(algorithm, n2)
                    assert b.multiplications - a.multiplications == mul_slope * (n2 - n1)
                    assert b.additions - a.additions == add_slope * (n2 - n1)

    def test_zero_taps_rejected(self):
        with pytest.raises(ConfigurationError):
            op_count(Algorithm.ISS_LMS, 0)


class TestSteadyStateBound:
    def test_hand_oracle_values(self):
        # exact rational evaluation frozen through fractions.Fraction
        cases = [(1.0, 0.1, 0.05), (1.0, 0.01, 0.005), (2.5, 0.5, 0.2), (1.0, 1.0, 0.1)]
        for lam, var, step in cases:
            num = Fraction(lam) * Fraction(var)
            den = 2 - 3 * Fraction(step) * Fraction(var)
            expected = float(num / den)
            assert steady_state_lower_bound(lam, var, step) == pytest.approx(expected, rel=1e-12)
        assert steady_state_lower_bound(1.0, 0.1, 0.05) == pytest.approx(
            0.05037783375314861, rel=1e-12
        )

    def test_small_step_limit(self):
        # as the step vanishes the bound tends to lambda * variance / 2
        for lam, var in [(1.0, 0.1), (3.0, 0.25), (1.0, 1e-2)]:
            limit = lam * var / 2.0
            value = steady_state_lower_bound(lam, var, 1e-9)
            assert abs(value - limit) / limit < 1e-6

    def test_monotone_increasing_in_step(self):
        steps = np.linspace(1e-6, 0.5, 40)
        values = [steady_state_lower_bound(1.0, 0.5, s) for s in steps]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_inadmissible_step_raises(self):
        with pytest.raises(StabilityError):
            steady_state_lower_bound(1.0, 1.0, 0.7)  # 2 - 2.1 < 0
        with pytest.raises(StabilityError):
            steady_state_lower_bound(1.0, 2.0, 1.0 / 3.0)  # exactly 0

    def test_dataclass_carries_value(self):
        bound = SteadyStateBound(lambda_max=1.0, noise_variance=0.1, step=0.05)
        assert bound.value == steady_state_lower_bound(1.0, 0.1, 0.05)

    @settings(max_examples=100, deadline=None)
    @given(
        lam=st.floats(1e-3, 1e3),
        var=st.floats(1e-6, 1.0),
        step=st.floats(1e-9, 0.5),
    )
    def test_positive_wherever_defined(self, lam, var, step):
        if 2 - 3 * step * var > 0:
            assert steady_state_lower_bound(lam, var, step) > 0


class TestAverageMse:
    def test_exact_estimates_give_zero(self):
        truth = Channel(taps=np.array([1.0, -2.0]))
        assert average_mse(truth, [truth.taps.copy(), truth.taps.copy()]) == 0.0

    def test_unit_displacement(self):
        assert average_mse(np.array([1.0, 0.0]), [np.array([0.0, 0.0])]) == 1.0

    def test_hand_average(self):
        truth = np.zeros(2)
        estimates = [np.array([1.0, 0.0]), np.array([1.0, np.sqrt(2.0)])]
        # residual norms^2 are 1 and 3
        assert average_mse(truth, estimates) == pytest.approx(2.0, rel=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ConfigurationError):
            average_mse(np.zeros(2), [])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ConfigurationError):
            average_mse(np.zeros(2), [np.zeros(3)])

    def test_permutation_invariant_and_quadratic_scaling(self):
        rng = np.random.default_rng(0)
        truth = rng.normal(size=4)
        estimates = [truth + rng.normal(size=4) for _ in range(6)]
        base = average_mse(truth, estimates)
        assert average_mse(truth, estimates[::-1]) == pytest.approx(base, rel=1e-15)
        scaled = [truth + 3.0 * (e - truth) for e in estimates]
        assert average_mse(truth, scaled) == pytest.approx(9.0 * base, rel=1e-12)

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(5)
        truth = rng.normal(size=3)
        estimates = [rng.normal(size=3) for _ in range(5)]
        expected = oracle.mean(oracle.tap_error_curve(list(truth), [list(e) for e in estimates]))
        assert average_mse(truth, estimates) == pytest.approx(expected, rel=1e-12)


class TestSteadyStateEmpirical:
    def test_constant_curve(self):
        curve = np.full(50, 3.25)
        for frac in (0.1, 0.2, 0.5, 1.0):
            assert steady_state_empirical(curve, frac) == 3.25

    def test_hand_tail_mean(self):
        curve = [4.0, 4.0, 4.0, 4.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0]
        assert steady_state_empirical(curve, 0.2) == 2.0

    def test_full_window(self):
        curve = np.arange(10.0)
        assert steady_state_empirical(curve, 1.0) == np.mean(curve)

    def test_short_trajectory_rejected(self):
        with pytest.raises(ConfigurationError):
            steady_state_empirical(np.ones(9), 0.2)

    def test_bad_fraction_rejected(self):
        with pytest.raises(ConfigurationError):
            steady_state_empirical(np.ones(20), 0.0)
        with pytest.raises(ConfigurationError):
            steady_state_empirical(np.ones(20), 1.5)


def test_output_error_power_never_beats_noise_floor():
    """Converged invariant-step filters (mu=0.005) keep mean output-error
    power at or above the noise variance at 10, 15, and 20 dB SNR."""
    schedule = InvariantStep(0.005)
    n_taps, total = 16, 3000
    for snr_db in (10.0, 15.0, 20.0):
        model = NoiseModel(snr_db=snr_db)
        tail_power = []
        for trial in range(12):
            channel = draw_channel(n_taps, (snr_db == 10.0) * 100 + trial)
            training = draw_training(total, 1000 + trial)
            noise = noise_stream(total, model, 2000 + trial)
            state = initial_state(n_taps)
            for n in range(1, total + 1):
                x = regressor_at(training, n, n_taps)
                y = float(np.dot(channel.taps, x)) + noise[n - 1]
                state, error = lms_update(state, Sample(x, y), schedule)
                if n > total - 600:
                    tail_power.append(error * error)
        assert np.mean(tail_power) >= model.variance
