"""Benchmark time series: Mackey-Glass generation, sunspot ingestion,
delay embedding and train/test splitting."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ContractError, IngestionError, NumericalError

SUNSPOT_FIRST_YEAR = 1700
SUNSPOT_LAST_YEAR = 1997


class Origin(enum.Enum):
    MACKEY_GLASS = "mackey-glass"
    SUNSPOT = "sunspot"
    EXTERNAL = "external"


@dataclass(frozen=True)
class Series:
    values: np.ndarray
    origin: Origin = Origin.EXTERNAL

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ContractError("series values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ContractError("series contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


class Sample(NamedTuple):
    """An embedded input vector and the value that follows it."""

    input: np.ndarray
    desired: float


@dataclass(frozen=True)
class MgParams:
    """Mackey-Glass delay equation parameters.

    ``tau``, ``dt`` and ``sample_period`` are in the equation's time units;
    ``warmup`` counts emitted samples that are dropped.
    """

    q: float = 0.1
    m: float = 0.2
    tau: float = 30.0
    dt: float = 0.1
    sample_period: float = 6.0
    history_value: float = 1.2
    warmup: int = 100

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ContractError(f"dt must be positive, got {self.dt}")
        if not (self.q > 0 and self.m > 0):
            raise ContractError("q and m must be positive")
        if self.tau <= 0:
            raise ContractError("tau must be positive")
        if self.warmup < 0:
            raise ContractError("warmup must be nonnegative")
        _steps(self.tau, self.dt, "tau")
        if _steps(self.sample_period, self.dt, "sample_period") < 1:
            raise ContractError("sample_period must be at least one dt")

    @property
    def delay_steps(self) -> int:
        return _steps(self.tau, self.dt, "tau")

    @property
    def steps_per_sample(self) -> int:
        return _steps(self.sample_period, self.dt, "sample_period")


def _steps(span, dt, name):
    ratio = span / dt
    n = round(ratio)
    if abs(ratio - n) > 1e-9 * max(1.0, abs(ratio)):
        raise ContractError(f"{name}={span} is not an integer multiple of dt={dt}")
    return int(n)


def mackey_glass(params: MgParams, n_samples: int, x0_override: float | None = None) -> Series:
    """Integrate the Mackey-Glass equation with fixed-step RK4.

    dx/dt = -q x(t) + m x(t - tau) / (1 + x(t - tau)**10)

    The history is constant (``params.history_value``) for t <= 0 unless
    ``x0_override`` replaces x(0). The delayed state at RK4 half steps is
    linearly interpolated from the stored grid. One value is emitted every
    ``sample_period`` starting at t = 0; the first ``warmup`` are dropped.
    """
    if n_samples < 1:
        raise ContractError("n_samples must be positive")
    q, m, dt = params.q, params.m, params.dt
    lag = params.delay_steps
    per = params.steps_per_sample
    total = params.warmup + n_samples

    def rhs(x, xd):
        return -q * x + m * xd / (1.0 + xd**10)

    # ring of the last lag+1 grid values, oldest first: ring[head] = x(t - tau)
    ring = [float(params.history_value)] * (lag + 1)
    x = float(params.history_value if x0_override is None else x0_override)
    ring[-1] = x
    head = 0
    out = np.empty(total)
    out[0] = x
    half = 0.5 * dt
    for k in range(1, total):
        for _ in range(per):
            d0 = ring[head]
            d1 = ring[(head + 1) % (lag + 1)]
            dm = 0.5 * (d0 + d1)
            k1 = rhs(x, d0)
            k2 = rhs(x + half * k1, dm)
            k3 = rhs(x + half * k2, dm)
            k4 = rhs(x + dt * k3, d1)
            x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            ring[head] = x
            head = (head + 1) % (lag + 1)
        if not math.isfinite(x):
            raise NumericalError(f"Mackey-Glass state became non-finite at sample {k}", x)
        out[k] = x
    return Series(out[params.warmup:], Origin.MACKEY_GLASS)


def embed(series: Series | Sequence[float], order: int) -> list[Sample]:
    """Delay-embed ``series``: sample t pairs x[t-order:t] with x[t]."""
    values = series.values if isinstance(series, Series) else np.asarray(series, dtype=float)
    if order < 1:
        raise ContractError(f"embedding order must be positive, got {order}")
    if len(values) <= order:
        raise ContractError(
            f"series of length {len(values)} is too short for embedding order {order}"
        )
    return [
        Sample(values[t - order:t].copy(), float(values[t]))
        for t in range(order, len(values))
    ]


def split(samples: Sequence[Sample], n_train: int, n_test: int):
    """Contiguous train/test split, train first. Nothing is shuffled."""
    if n_train < 0 or n_test < 0:
        raise ContractError("split sizes must be nonnegative")
    if n_train + n_test > len(samples):
        raise ContractError(
            f"need {n_train} + {n_test} samples but only {len(samples)} are available"
        )
    samples = list(samples)
    return samples[:n_train], samples[n_train:n_train + n_test]


def stack(samples: Sequence[Sample]):
    """Return (inputs, desired) arrays for a list of samples."""
    if not samples:
        return np.empty((0, 0)), np.empty(0)
    X = np.vstack([s.input for s in samples])
    d = np.array([s.desired for s in samples], dtype=float)
    return X, d


def bundled_sunspot_path() -> Path:
    """Path of the yearly sunspot numbers shipped with the package."""
    return Path(str(resources.files("klmat") / "data" / "sunspot_1700_1997.csv"))


def load_sunspot(path=None) -> Series:
    """Read yearly sunspot numbers from a ``year,value`` CSV file.

    A header line is optional. Years must be strictly increasing and cover
    1700-1997 exactly.
    """
    path = Path(path) if path is not None else bundled_sunspot_path()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot read file ({exc.strerror})", path) from exc

    years: list[int] = []
    values: list[float] = []
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise IngestionError(f"expected 2 columns, found {len(row)}", path, lineno)
        cells = [cell.strip() for cell in row]
        try:
            year_f = float(cells[0])
        except ValueError:
            if not years and lineno == 1:
                continue  # header
            raise IngestionError(f"non-numeric year {cells[0]!r}", path, lineno) from None
        if not year_f.is_integer():
            raise IngestionError(f"year {cells[0]!r} is not an integer", path, lineno)
        try:
            value = float(cells[1])
        except ValueError:
            raise IngestionError(f"non-numeric value {cells[1]!r}", path, lineno) from None
        if not math.isfinite(value):
            raise IngestionError(f"non-finite value {cells[1]!r}", path, lineno)
        year = int(year_f)
        if years and year <= years[-1]:
            kind = "duplicated" if year == years[-1] else "out-of-order"
            raise IngestionError(f"{kind} year {year}", path, lineno)
        years.append(year)
        values.append(value)

    if not years:
        raise IngestionError("no records found", path)
    expected = SUNSPOT_LAST_YEAR - SUNSPOT_FIRST_YEAR + 1
    if years[0] != SUNSPOT_FIRST_YEAR or years[-1] != SUNSPOT_LAST_YEAR or len(years) != expected:
        raise IngestionError(
            f"expected years {SUNSPOT_FIRST_YEAR}-{SUNSPOT_LAST_YEAR} ({expected} records), "
            f"found {years[0]}-{years[-1]} ({len(years)} records)",
            path,
        )
    return Series(np.array(values), Origin.SUNSPOT)
