"""Simulation world: random FIR channel, binary training signal, sliding
regressor windows, and AWGN at a configured SNR.

Everything is seeded and pure: the same seed always yields the same output,
regardless of call order or concurrency. Seeds may be non-negative ints,
sequences of non-negative ints, or ``numpy.random.SeedSequence`` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _keyed_rng(seed, index: int) -> np.random.Generator:
    """Generator keyed by (seed, index) so per-sample draws are pure."""
    if isinstance(seed, np.random.SeedSequence):
        base = tuple(int(v) for v in seed.entropy) if hasattr(seed.entropy, "__len__") else (int(seed.entropy),)
    elif isinstance(seed, (tuple, list)):
        base = tuple(int(v) for v in seed)
    else:
        base = (int(seed),)
    return np.random.default_rng(np.random.SeedSequence(base + (int(index),)))


@dataclass(frozen=True)
class Channel:
    """Unknown FIR channel to be identified; real i.i.d. N(0, 1) taps."""

    taps: np.ndarray

    def __post_init__(self):
        if len(self.taps) < 1:
            raise ConfigurationError("channel must have at least one tap")
        if not np.all(np.isfinite(self.taps)):
            raise ConfigurationError("channel taps must be finite")

    def __len__(self):
        return len(self.taps)


@dataclass(frozen=True)
class NoiseModel:
    """AWGN level specified as received SNR (dB) against signal power P0.

    variance = P0 * 10**(-snr_db / 10) exactly. ``snr_db = inf`` is the
    noiseless override (variance exactly 0).
    """

    snr_db: float
    signal_power: float = 1.0

    def __post_init__(self):
        if not self.signal_power > 0:
            raise ConfigurationError(f"signal_power must be positive, got {self.signal_power}")

    @property
    def variance(self) -> float:
        return self.signal_power * 10.0 ** (-self.snr_db / 10.0)

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls(snr_db=math.inf)


@dataclass(frozen=True)
class TrainingSequence:
    """Pseudo-random binary (+1/-1) training symbols with unit power."""

    symbols: np.ndarray

    def __post_init__(self):
        if len(self.symbols) < 1:
            raise ConfigurationError("training sequence must be non-empty")
        if not np.all(np.abs(self.symbols) == 1):
            raise ConfigurationError("training symbols must be +1 or -1")

    def __len__(self):
        return len(self.symbols)


def draw_channel(n_taps: int, rng_seed) -> Channel:
    """Channel with n_taps i.i.d. standard-normal taps; deterministic per seed."""
    if n_taps < 1:
        raise ConfigurationError(f"n_taps must be >= 1, got {n_taps}")
    return Channel(taps=_rng(rng_seed).standard_normal(n_taps))


def draw_training(length: int, rng_seed) -> TrainingSequence:
    """i.i.d. equiprobable +1/-1 symbols; deterministic per seed."""
    if length < 1:
        raise ConfigurationError(f"length must be >= 1, got {length}")
    bits = _rng(rng_seed).integers(0, 2, size=length)
    return TrainingSequence(symbols=bits * 2.0 - 1.0)


def regressor_at(seq: TrainingSequence, n: int, n_taps: int) -> np.ndarray:
    """Sliding window [x(n), x(n-1), ..., x(n-N+1)] with 1-based n.

    Indices before the start of the burst are zero-filled, keeping the
    sample index aligned with the step-size schedule's iteration counter.
    """
    if not 1 <= n <= len(seq):
        raise IndexError(f"sample index {n} outside 1..{len(seq)}")
    if n_taps < 1:
        raise ConfigurationError(f"n_taps must be >= 1, got {n_taps}")
    window = np.zeros(n_taps)
    take = min(n, n_taps)
    window[:take] = seq.symbols[n - take:n][::-1]
    return window


def observe(channel: Channel, regressor: np.ndarray, noise_model: NoiseModel,
            rng_seed, n: int) -> float:
    """One received sample y(n) = w'x(n) + z(n), z ~ N(0, variance).

    The noise draw is keyed by (rng_seed, n), so the value at a given sample
    index is reproducible in isolation.
    """
    if len(regressor) != len(channel.taps):
        raise ConfigurationError(
            f"regressor length {len(regressor)} != channel length {len(channel.taps)}"
        )
    z = _keyed_rng(rng_seed, n).normal(0.0, math.sqrt(noise_model.variance))
    return float(np.dot(channel.taps, regressor)) + z


def noise_stream(length: int, noise_model: NoiseModel, rng_seed) -> np.ndarray:
    """Whole AWGN stream for one trial, drawn in one pass from the trial seed.

    z(n) = stream[n-1] is a pure function of (rng_seed, n), which keeps
    trajectories reproducible under any parallel trial ordering.
    """
    if length < 1:
        raise ConfigurationError(f"length must be >= 1, got {length}")
    return _rng(rng_seed).normal(0.0, math.sqrt(noise_model.variance), size=length)
