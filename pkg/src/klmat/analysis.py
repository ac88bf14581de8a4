"""Learning-curve evaluation and stability diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractError, DivergenceError
from .filters import THETA, KernelFilter, LorentzianStepSize
from .kernel import kernel_row
from .noise import NoiseModel, SeededRng, noise_sequence
from .signals import Sample, stack

MSE_FLOOR_DB = -320.0


def mse_db(errors) -> float:
    """10 log10 of the mean squared error, floored at -320 dB."""
    e = np.asarray(errors, dtype=float)
    if e.size == 0:
        raise ContractError("mse_db needs at least one error")
    return to_db(float(np.mean(e * e)))


def to_db(mse: float) -> float:
    if mse <= 0.0:
        return MSE_FLOOR_DB
    return max(10.0 * math.log10(mse), MSE_FLOOR_DB)


def step_size_bound(sigma_e: float, lambda_max: float) -> float:
    """Largest step size for which the mean weight vector still converges:
    sqrt(pi/2) / (sigma_e * lambda_max)."""
    if not (sigma_e > 0 and lambda_max > 0):
        raise ContractError("sigma_e and lambda_max must be positive")
    return math.sqrt(math.pi / 2.0) / (sigma_e * lambda_max)


def l_lower_bound(e_sq: float, sigma_e: float, lambda_max: float, beta: float) -> float:
    """Smallest admissible Lorentzian parameter l for the current error."""
    if e_sq < 0 or sigma_e <= 0 or lambda_max <= 0 or beta <= 0:
        raise ContractError("l_lower_bound inputs must be positive (e_sq nonnegative)")
    return e_sq * sigma_e * lambda_max * beta / (math.sqrt(2.0 * math.pi) * math.log(10.0))


def gradient_oracle(e: float) -> float:
    """d|e|^3/de = 3 e^2 sign(e)."""
    return 3.0 * e * abs(e)


@dataclass
class Trace:
    """Per-step record of one filter trained on one noisy stream.

    ``mse`` is the linear-domain testing MSE after each step. On divergence
    every array stops at the last completed step and ``diverged_at`` holds
    the 1-based index of the failing step.
    """

    mse: np.ndarray
    mu: np.ndarray
    errors: np.ndarray
    size: np.ndarray
    diverged_at: int | None = None
    lowpass_sq_error: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __len__(self):
        return len(self.mse)


@dataclass
class MseCurve:
    values_db: np.ndarray
    n_replicas: int = 1
    config_digest: str = ""
    diverged_at: int | None = None

    def __len__(self):
        return len(self.values_db)


def train_and_evaluate(filt, train_X, train_d, test_X, test_d) -> Trace:
    """Run ``filt`` over the training stream, scoring the whole test set
    after every step.

    Test predictions are updated incrementally (one new kernel column per
    admitted center) rather than recomputed from scratch.
    """
    n = len(train_d)
    mse = np.empty(n)
    mus = np.empty(n)
    errs = np.empty(n)
    sizes = np.empty(n, dtype=np.int64)
    lowpass = np.empty(n)
    theta = filt.schedule.theta if isinstance(getattr(filt, "schedule", None), LorentzianStepSize) else THETA
    delta = 0.0
    test_pred = np.zeros(len(test_d))
    kernel = isinstance(filt, KernelFilter)
    done = 0
    diverged_at = None
    for i in range(n):
        try:
            res = filt.step(train_X[i], train_d[i])
        except DivergenceError as exc:
            diverged_at = exc.step
            break
        if kernel:
            if res.admitted:
                test_pred += filt.coeffs[-1] * kernel_row(test_X, filt.centers[-1], filt.kernel.h)
        else:
            test_pred = test_X @ filt.w
        with np.errstate(over="ignore", invalid="ignore"):
            resid = test_d - test_pred
            m = float(np.mean(resid * resid))
        if not math.isfinite(m):
            diverged_at = i + 1
            break
        delta = theta * delta + (1.0 - theta) * res.error * res.error
        mse[i], mus[i], errs[i], sizes[i], lowpass[i] = m, res.mu, res.error, len(filt), delta
        done = i + 1
    return Trace(mse[:done], mus[:done], errs[:done], sizes[:done], diverged_at, lowpass[:done])


def testing_mse_curve(train: Sequence[Sample], test: Sequence[Sample], filt,
                      noise: NoiseModel, rng: SeededRng) -> MseCurve:
    """Testing-MSE learning curve (dB) of ``filt`` on one noisy replica.

    Noise corrupts the training targets only; the test targets stay clean.
    """
    if not train or not test:
        raise ContractError("train and test sets must be nonempty")
    train_X, train_d = stack(train)
    test_X, test_d = stack(test)
    noisy = train_d + noise_sequence(noise, rng, len(train_d))
    trace = train_and_evaluate(filt, train_X, noisy, test_X, test_d)
    return MseCurve(np.array([to_db(m) for m in trace.mse]), 1, "", trace.diverged_at)


def average_traces(traces: Sequence[Trace]) -> np.ndarray:
    """Replica mean of the linear MSE, summed in list order.

    Curves are cut to the shortest replica, so a divergence anywhere
    truncates the average at that point.
    """
    if not traces:
        raise ContractError("nothing to average")
    n = min(len(t) for t in traces)
    total = np.zeros(n)
    for t in traces:
        total += t.mse[:n]
    return total / len(traces)
