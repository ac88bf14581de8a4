"""Online learners: LMAT, KLMS and KLMAT with fixed or Lorentzian step
sizes and an optional novelty-criterion gate.

All filters share the same loop::

    result = filt.step(u, d)   # predict, compute error, adapt

and keep their state in plain attributes, so a trained filter can be
inspected or evaluated with :meth:`predict` at any time.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import ContractError, DivergenceError
from .kernel import KernelParams, kernel_row

MU_MIN = 0.01
MU_MAX = 2.0
THETA = 0.9


def lmat_gain(e: float) -> float:
    """e**2 * sign(e), the error nonlinearity of the absolute-third cost."""
    return e * abs(e)


def lms_gain(e: float) -> float:
    return e


# -- step-size schedules ----------------------------------------------------


@dataclass(frozen=True)
class FixedStepSize:
    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ContractError(f"step size must be positive, got {self.mu}")

    def advance(self, error: float):
        return self, self.mu


@dataclass(frozen=True)
class LorentzianStepSize:
    """Variable step size driven by a low-pass estimate of the squared error.

    ``delta_e`` is the running estimate and ``mu`` the last step size
    emitted (``None`` before the first step).
    """

    beta: float
    l: float
    theta: float = THETA
    delta_e: float = 0.0
    mu_min: float = MU_MIN
    mu_max: float = MU_MAX
    mu: float | None = None

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ContractError(f"beta must be positive, got {self.beta}")
        if not (self.l > 0 and math.isfinite(self.l)):
            raise ContractError(f"l must be positive, got {self.l}")
        if not 0.0 <= self.theta < 1.0:
            raise ContractError(f"theta must lie in [0, 1), got {self.theta}")
        if not self.delta_e >= 0:
            raise ContractError(f"delta_e must be nonnegative, got {self.delta_e}")
        if not 0 < self.mu_min < self.mu_max:
            raise ContractError("need 0 < mu_min < mu_max")

    def advance(self, error: float):
        return vss_step(self, error)


StepSizeSchedule = Union[FixedStepSize, LorentzianStepSize]


def lorentzian_mu(delta_e: float, beta: float, l: float) -> float:
    """Unclamped step size beta * log10(1 + delta_e / (2 l**2))."""
    return beta * math.log10(1.0 + delta_e / (2.0 * l * l))


def vss_step(sched: LorentzianStepSize, error: float):
    """Advance the error estimate by one sample and return (sched', mu)."""
    delta_e = sched.theta * sched.delta_e + (1.0 - sched.theta) * error * error
    raw = lorentzian_mu(delta_e, sched.beta, sched.l)
    mu = min(max(raw, sched.mu_min), sched.mu_max)
    return dataclasses.replace(sched, delta_e=delta_e, mu=mu), mu


# -- novelty criterion -------------------------------------------------------


@dataclass(frozen=True)
class NcParams:
    dist_threshold: float = 0.0
    err_threshold: float = 0.0
    enabled: bool = False

    def __post_init__(self):
        if not (self.dist_threshold >= 0 and self.err_threshold >= 0):
            raise ContractError("novelty thresholds must be nonnegative")


def nc_gate(centers: np.ndarray, u: np.ndarray, error: float, nc: NcParams) -> bool:
    """True if ``u`` should become a new center.

    Both tests are strict: the nearest center must lie farther than
    ``dist_threshold`` (Euclidean) and ``|error|`` must exceed
    ``err_threshold``. An empty codebook admits anything.
    """
    if len(centers) == 0:
        return True
    diff = centers - u
    nearest = math.sqrt(float(np.min(np.einsum("ij,ij->i", diff, diff))))
    return nearest > nc.dist_threshold and abs(error) > nc.err_threshold


# -- filters -----------------------------------------------------------------


class StepResult(NamedTuple):
    prediction: float
    error: float
    mu: float
    admitted: bool = True


def _check_input(u, order):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1:
        raise ContractError("input must be a vector")
    if order is not None and u.shape[0] != order:
        raise ContractError(f"input has length {u.shape[0]}, filter order is {order}")
    return u


class KernelFilter:
    """Growing-codebook kernel filter.

    Each admitted sample becomes a center whose coefficient is
    ``mu * gain(error)``; predictions are the plain coefficient-weighted sum
    of kernel evaluations. Subclasses fix ``gain``.
    """

    name = "kernel"

    def __init__(self, kernel: KernelParams | float = 1.0, schedule: StepSizeSchedule | float = 0.5,
                 nc: NcParams | None = None):
        self.kernel = kernel if isinstance(kernel, KernelParams) else KernelParams(kernel)
        self.schedule = schedule if not isinstance(schedule, (int, float)) else FixedStepSize(schedule)
        self.nc = nc if nc is not None else NcParams()
        self.step_count = 0
        self.order: int | None = None
        self._centers = np.empty((0, 0))
        self._coeffs = np.empty(0)
        self._size = 0

    @staticmethod
    def gain(e: float) -> float:
        raise NotImplementedError

    @property
    def centers(self) -> np.ndarray:
        return self._centers[:self._size]

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs[:self._size]

    def __len__(self):
        return self._size

    def predict(self, u) -> float:
        u = _check_input(u, self.order)
        if self._size == 0:
            return 0.0
        return float(kernel_row(self.centers, u, self.kernel.h) @ self.coeffs)

    def predict_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.zeros(len(X))
        for c, a in zip(self.centers, self.coeffs):
            out += a * kernel_row(X, c, self.kernel.h)
        return out

    def step(self, u, d: float) -> StepResult:
        u = _check_input(u, self.order)
        if self.order is None:
            self.order = u.shape[0]
            self._centers = np.empty((16, self.order))
            self._coeffs = np.empty(16)
        prediction = self.predict(u)
        error = float(d) - prediction
        self.step_count += 1
        if not math.isfinite(error):
            raise DivergenceError(self.step_count, abs(error))
        self.schedule, mu = self.schedule.advance(error)
        admitted = not self.nc.enabled or nc_gate(self.centers, u, error, self.nc)
        if admitted:
            coeff = mu * self.gain(error)
            if not math.isfinite(coeff):
                raise DivergenceError(self.step_count, abs(error))
            self._append(u, coeff)
        return StepResult(prediction, error, mu, admitted)

    def _append(self, u, coeff):
        if self._size == len(self._coeffs):
            grow = max(16, 2 * self._size)
            self._centers = np.concatenate([self._centers, np.empty((grow, self.order))])
            self._coeffs = np.concatenate([self._coeffs, np.empty(grow)])
        self._centers[self._size] = u
        self._coeffs[self._size] = coeff
        self._size += 1


class KLMS(KernelFilter):
    name = "KLMS"
    gain = staticmethod(lms_gain)


class KLMAT(KernelFilter):
    name = "KLMAT"
    gain = staticmethod(lmat_gain)


class LMAT:
    """Linear least-mean-absolute-third filter, w <- w + mu e**2 sign(e) u."""

    name = "LMAT"

    def __init__(self, order: int, mu: float):
        if order < 1:
            raise ContractError("filter order must be positive")
        if not (math.isfinite(mu) and mu > 0):
            raise ContractError(f"step size must be positive, got {mu}")
        self.order = order
        self.mu = mu
        self.w = np.zeros(order)
        self.step_count = 0

    def __len__(self):
        return self.order

    def predict(self, u) -> float:
        return float(self.w @ _check_input(u, self.order))

    def predict_many(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.w

    def step(self, u, d: float) -> StepResult:
        u = _check_input(u, self.order)
        prediction = float(self.w @ u)
        error = float(d) - prediction
        self.step_count += 1
        w = self.w + self.mu * lmat_gain(error) * u
        if not (math.isfinite(error) and np.all(np.isfinite(w))):
            raise DivergenceError(self.step_count, abs(error))
        self.w = w
        return StepResult(prediction, error, self.mu, True)
