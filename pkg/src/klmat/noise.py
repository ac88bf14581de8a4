"""Seeded additive-noise samplers for the training targets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ContractError


class SeededRng:
    """Two independent PCG64 streams derived from one integer seed.

    ``main`` carries the background noise of every model; ``aux`` carries
    impulse occurrences and amplitudes, so adding impulses never shifts the
    background stream.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ContractError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        main, aux = np.random.SeedSequence(self.seed).spawn(2)
        self.main = np.random.Generator(np.random.PCG64(main))
        self.aux = np.random.Generator(np.random.PCG64(aux))


def _positive(value, name):
    if not (math.isfinite(value) and value > 0):
        raise ContractError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class NoNoise:
    pass


@dataclass(frozen=True)
class Wgn:
    sigma: float

    def __post_init__(self):
        _positive(self.sigma, "sigma")


@dataclass(frozen=True)
class BernoulliGaussianImpulsive:
    """Gaussian background plus Bernoulli-gated Gaussian impulses."""

    sigma_g: float
    p_c: float
    sigma_i: float
    impulse_scale: float = 1.0

    def __post_init__(self):
        _positive(self.sigma_g, "sigma_g")
        _positive(self.sigma_i, "sigma_i")
        _positive(self.impulse_scale, "impulse_scale")
        if not 0.0 <= self.p_c <= 1.0:
            raise ContractError(f"p_c must lie in [0, 1], got {self.p_c}")


@dataclass(frozen=True)
class Uniform:
    """Zero-mean uniform noise with the given variance."""

    variance: float

    def __post_init__(self):
        _positive(self.variance, "variance")

    @property
    def half_width(self) -> float:
        return math.sqrt(3.0 * self.variance)


@dataclass(frozen=True)
class Rayleigh:
    """Rayleigh noise with scale sqrt(sigma_sq)."""

    sigma_sq: float
    remove_mean: bool = False

    def __post_init__(self):
        _positive(self.sigma_sq, "sigma_sq")

    @property
    def mean(self) -> float:
        return math.sqrt(self.sigma_sq) * math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class Rectangular:
    """Deterministic square wave, positive for the first half period."""

    amplitude: float
    period_samples: int = 2

    def __post_init__(self):
        _positive(self.amplitude, "amplitude")
        if int(self.period_samples) != self.period_samples or self.period_samples < 1:
            raise ContractError(f"period_samples must be a positive integer, got {self.period_samples}")


@dataclass(frozen=True)
class Exponential:
    mean: float
    remove_mean: bool = False

    def __post_init__(self):
        _positive(self.mean, "mean")


NoiseModel = Union[NoNoise, Wgn, BernoulliGaussianImpulsive, Uniform, Rayleigh, Rectangular, Exponential]


def sample_noise(model: NoiseModel, rng: SeededRng, step_index: int) -> float:
    """Draw the additive noise value for training step ``step_index``."""
    if isinstance(model, NoNoise):
        return 0.0
    if isinstance(model, Wgn):
        return float(rng.main.normal(0.0, model.sigma))
    if isinstance(model, BernoulliGaussianImpulsive):
        v = float(rng.main.normal(0.0, model.sigma_g))
        hit = rng.aux.random() < model.p_c
        impulse = float(rng.aux.normal(0.0, model.impulse_scale * model.sigma_i))
        return v + impulse if hit else v
    if isinstance(model, Uniform):
        a = model.half_width
        return float(rng.main.uniform(-a, a))
    if isinstance(model, Rayleigh):
        v = float(rng.main.rayleigh(math.sqrt(model.sigma_sq)))
        return v - model.mean if model.remove_mean else v
    if isinstance(model, Rectangular):
        phase = step_index % model.period_samples
        return model.amplitude if 2 * phase < model.period_samples else -model.amplitude
    if isinstance(model, Exponential):
        v = float(rng.main.exponential(model.mean))
        return v - model.mean if model.remove_mean else v
    raise ContractError(f"unknown noise model {model!r}")


def noise_sequence(model: NoiseModel, rng: SeededRng, n: int) -> np.ndarray:
    """``n`` consecutive draws, step indices 0..n-1."""
    return np.array([sample_noise(model, rng, i) for i in range(n)], dtype=float)

