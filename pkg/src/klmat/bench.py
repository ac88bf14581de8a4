"""Experiment configuration, Monte Carlo orchestration and CSV output."""

from __future__ import annotations

import dataclasses
import hashlib
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
import numpy as np

from . import noise as nz
from .analysis import (
    MseCurve,
    Trace,
    average_traces,
    l_lower_bound,
    step_size_bound,
    to_db,
    train_and_evaluate,
)
from .errors import ConfigError, ContractError, IngestionError
from .filters import (
    KLMAT,
    KLMS,
    LMAT,
    MU_MAX,
    MU_MIN,
    THETA,
    FixedStepSize,
    LorentzianStepSize,
    NcParams,
)
from .kernel import KernelParams, gram_matrix, lambda_max
from .signals import MgParams, Origin, Series, embed, load_sunspot, mackey_glass, split, stack

log = logging.getLogger(__name__)

ALGORITHMS = ("LMAT", "KLMS", "KLMAT", "VSS-KLMAT", "NC-KLMAT")

_ALGO_FIELDS = {
    "LMAT": ("mu",),
    "KLMS": ("mu", "h"),
    "KLMAT": ("mu", "h"),
    "VSS-KLMAT": ("h", "beta", "l", "theta", "mu_min", "mu_max"),
    "NC-KLMAT": ("mu", "h", "dist_threshold", "err_threshold"),
}

_NOISE_VARIANTS = {
    "none": nz.NoNoise,
    "wgn": nz.Wgn,
    "bg": nz.BernoulliGaussianImpulsive,
    "uniform": nz.Uniform,
    "rayleigh": nz.Rayleigh,
    "rectangular": nz.Rectangular,
    "exponential": nz.Exponential,
}
_NOISE_NAMES = {cls: name for name, cls in _NOISE_VARIANTS.items()}

_MG_FIELDS = ("q", "m", "tau", "dt", "sample_period", "history_value", "warmup")


@dataclass(frozen=True)
class AlgorithmConfig:
    kind: str
    mu: float = 0.5
    h: float = 1.0
    beta: float = 1.0
    l: float = 0.1
    theta: float = THETA
    mu_min: float = MU_MIN
    mu_max: float = MU_MAX
    dist_threshold: float = 0.0
    err_threshold: float = 0.0

    def __post_init__(self):
        if self.kind not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.kind!r}; choose from {', '.join(ALGORITHMS)}")
        try:
            self.build(1)
        except ContractError as exc:
            raise ConfigError(f"{self.kind}: {exc}") from exc

    @property
    def key(self) -> str:
        return self.kind.lower()

    @property
    def fields(self):
        return _ALGO_FIELDS[self.kind]

    @property
    def is_kernel(self) -> bool:
        return self.kind != "LMAT"

    def build(self, order: int):
        if self.kind == "LMAT":
            return LMAT(order, self.mu)
        kernel = KernelParams(self.h)
        if self.kind == "KLMS":
            return KLMS(kernel, FixedStepSize(self.mu))
        if self.kind == "KLMAT":
            return KLMAT(kernel, FixedStepSize(self.mu))
        if self.kind == "VSS-KLMAT":
            sched = LorentzianStepSize(self.beta, self.l, self.theta, 0.0, self.mu_min, self.mu_max)
            return KLMAT(kernel, sched)
        nc = NcParams(self.dist_threshold, self.err_threshold, enabled=True)
        return KLMAT(kernel, FixedStepSize(self.mu), nc)


@dataclass(frozen=True)
class SignalConfig:
    """Where the series comes from.

    ``kind`` is ``mackey-glass``, ``sunspot`` (``path`` defaults to the
    bundled file) or ``csv`` (an ``index,value`` file such as the output
    of ``klmat generate-mg``). ``normalize = peak`` divides the series,
    and the noise added to it, by the series' largest absolute value, so
    noise levels are always given in the series' native units.
    """

    kind: str = "mackey-glass"
    mg: MgParams = MgParams()
    path: str | None = None
    n_samples: int | None = None
    normalize: str = "none"

    def __post_init__(self):
        if self.kind not in ("mackey-glass", "sunspot", "csv"):
            raise ConfigError(f"unknown signal kind {self.kind!r}")
        if self.normalize not in ("none", "peak"):
            raise ConfigError(f"unknown normalization {self.normalize!r}")
        if self.kind == "csv" and not self.path:
            raise ConfigError("signal.kind = csv needs signal.path")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    signal: SignalConfig
    embedding_order: int
    n_train: int
    n_test: int
    algorithms: tuple[AlgorithmConfig, ...]
    noise: nz.NoiseModel = nz.NoNoise()
    n_replicas: int = 1
    base_seed: int = 1

    def __post_init__(self):
        if self.embedding_order < 1:
            raise ConfigError("embedding_order must be positive")
        if self.n_train < 1 or self.n_test < 1:
            raise ConfigError("n_train and n_test must be positive")
        if self.n_replicas < 1:
            raise ConfigError("n_replicas must be at least 1")
        if not (0 <= self.base_seed and self.base_seed + self.n_replicas <= 2**64):
            raise ConfigError("base_seed must be a 64-bit unsigned integer")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        kinds = [a.kind for a in self.algorithms]
        if len(set(kinds)) != len(kinds):
            raise ConfigError("each algorithm may appear only once")

    def seeds(self) -> list[int]:
        return [self.base_seed + r for r in range(self.n_replicas)]

    def with_overrides(self, seed: int | None = None, scale: float | None = None) -> "ExperimentConfig":
        cfg = self
        if seed is not None:
            cfg = dataclasses.replace(cfg, base_seed=seed)
        if scale is not None:
            if not scale > 0:
                raise ConfigError("scale must be positive")

            def scaled(n):
                return max(1, int(round(n * scale)))

            cfg = dataclasses.replace(
                cfg,
                n_train=scaled(cfg.n_train),
                n_test=scaled(cfg.n_test),
                n_replicas=scaled(cfg.n_replicas),
            )
        return cfg

    def digest(self) -> str:
        return hashlib.sha256(format_config(self).encode("utf-8")).hexdigest()[:16]


# -- config text format --------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(cfg: ExperimentConfig) -> str:
    """Render a config as ``key = value`` lines, the format read by
    :func:`parse_config`."""
    lines = [
        f"name = {cfg.name}",
        f"embedding_order = {cfg.embedding_order}",
        f"n_train = {cfg.n_train}",
        f"n_test = {cfg.n_test}",
        f"n_replicas = {cfg.n_replicas}",
        f"base_seed = {cfg.base_seed}",
        "",
        f"signal.kind = {cfg.signal.kind}",
        f"signal.normalize = {cfg.signal.normalize}",
    ]
    if cfg.signal.path is not None:
        lines.append(f"signal.path = {cfg.signal.path}")
    if cfg.signal.kind == "mackey-glass":
        if cfg.signal.n_samples is not None:
            lines.append(f"signal.n_samples = {cfg.signal.n_samples}")
        for name in _MG_FIELDS:
            lines.append(f"signal.{name} = {_fmt(getattr(cfg.signal.mg, name))}")
    lines.append("")
    lines.append(f"noise.variant = {_NOISE_NAMES[type(cfg.noise)]}")
    for f in dataclasses.fields(cfg.noise):
        lines.append(f"noise.{f.name} = {_fmt(getattr(cfg.noise, f.name))}")
    lines.append("")
    lines.append("algorithms = " + ", ".join(a.kind for a in cfg.algorithms))
    for algo in cfg.algorithms:
        for name in algo.fields:
            lines.append(f"{algo.key}.{name} = {_fmt(getattr(algo, name))}")
    return "\n".join(lines) + "\n"


def _read_pairs(text: str, source: str) -> dict[str, tuple[str, int]]:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in pairs:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        pairs[key] = (value, lineno)
    return pairs


class _Reader:
    def __init__(self, pairs, source):
        self.pairs = pairs
        self.source = source
        self.used = set()

    def has(self, key):
        return key in self.pairs

    def get(self, key, conv, default=dataclasses.MISSING):
        if key not in self.pairs:
            if default is dataclasses.MISSING:
                raise ConfigError(f"{self.source}: missing required key {key!r}")
            return default
        self.used.add(key)
        value, lineno = self.pairs[key]
        try:
            return conv(value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{self.source}:{lineno}: bad value for {key!r}: {value!r}") from exc

    def leftovers(self):
        return sorted(set(self.pairs) - self.used)


def _to_int(text):
    value = float(text) if any(c in text for c in ".eE") else int(text)
    if float(value) != int(value):
        raise ValueError(text)
    return int(value)


def _to_bool(text):
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(text)


def _conv_for(annotation):
    if annotation in (bool, "bool"):
        return _to_bool
    if annotation in (int, "int"):
        return _to_int
    return float


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    r = _Reader(_read_pairs(text, source), source)
    try:
        signal_kind = r.get("signal.kind", str, "mackey-glass")
        mg_kwargs = {}
        for f in dataclasses.fields(MgParams):
            key = f"signal.{f.name}"
            if r.has(key):
                mg_kwargs[f.name] = r.get(key, _conv_for(f.type))
        signal = SignalConfig(
            kind=signal_kind,
            mg=MgParams(**mg_kwargs),
            path=r.get("signal.path", str, None),
            n_samples=r.get("signal.n_samples", _to_int, None),
            normalize=r.get("signal.normalize", str, "none"),
        )

        variant = r.get("noise.variant", str, "none")
        if variant not in _NOISE_VARIANTS:
            raise ConfigError(f"{source}: unknown noise.variant {variant!r}")
        cls = _NOISE_VARIANTS[variant]
        noise_kwargs = {}
        for f in dataclasses.fields(cls):
            key = f"noise.{f.name}"
            if r.has(key) or f.default is dataclasses.MISSING:
                noise_kwargs[f.name] = r.get(key, _conv_for(f.type))
        noise = cls(**noise_kwargs)

        names = [n.strip().upper() for n in r.get("algorithms", str).split(",") if n.strip()]
        algos = []
        for name in names:
            if name not in ALGORITHMS:
                raise ConfigError(f"{source}: unknown algorithm {name!r}")
            kwargs = {}
            for fname in _ALGO_FIELDS[name]:
                key = f"{name.lower()}.{fname}"
                if r.has(key):
                    kwargs[fname] = r.get(key, float)
            algos.append(AlgorithmConfig(name, **kwargs))

        cfg = ExperimentConfig(
            name=r.get("name", str, Path(source).stem),
            signal=signal,
            embedding_order=r.get("embedding_order", _to_int),
            n_train=r.get("n_train", _to_int),
            n_test=r.get("n_test", _to_int),
            algorithms=tuple(algos),
            noise=noise,
            n_replicas=r.get("n_replicas", _to_int, 1),
            base_seed=r.get("base_seed", _to_int, 1),
        )
    except ContractError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    unknown = r.leftovers()
    if unknown:
        raise ConfigError(f"{source}: unknown or unused keys: {', '.join(unknown)}")
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, str(path))


# -- presets -------------------------------------------------------------------

_MG_ALGOS = (
    AlgorithmConfig("LMAT", mu=0.05),
    AlgorithmConfig("KLMS", mu=1.0, h=1.0),
    AlgorithmConfig("KLMAT", mu=1.0, h=1.0),
    AlgorithmConfig("VSS-KLMAT", h=1.0, beta=1.0, l=0.1),
)
_MG_NC = AlgorithmConfig("NC-KLMAT", mu=1.0, h=1.0, dist_threshold=0.3, err_threshold=0.05)

_SUN_ALGOS = (
    AlgorithmConfig("LMAT", mu=0.5),
    AlgorithmConfig("KLMS", mu=0.5, h=1.5),
    AlgorithmConfig("KLMAT", mu=2.0, h=1.5),
    AlgorithmConfig("VSS-KLMAT", h=1.5, beta=2.0, l=0.1),
)


def _mg(name, noise, algos=_MG_ALGOS):
    return ExperimentConfig(
        name=name,
        signal=SignalConfig("mackey-glass"),
        embedding_order=10,
        n_train=1000,
        n_test=1000,
        algorithms=algos,
        noise=noise,
        n_replicas=100,
        base_seed=1,
    )


def _sun(name, noise):
    return ExperimentConfig(
        name=name,
        signal=SignalConfig("sunspot", normalize="peak"),
        embedding_order=2,
        n_train=200,
        n_test=96,
        algorithms=_SUN_ALGOS,
        noise=noise,
        n_replicas=100,
        base_seed=1,
    )


PRESETS: dict[str, tuple[str, ExperimentConfig]] = {
    "fig2a": ("Mackey-Glass, white Gaussian noise sigma 0.1",
              _mg("fig2a", nz.Wgn(0.1), _MG_ALGOS + (_MG_NC,))),
    "fig2b": ("Mackey-Glass, Bernoulli-Gaussian impulses P_c 0.3, sigma_I = sigma_G = 0.02",
              _mg("fig2b", nz.BernoulliGaussianImpulsive(0.02, 0.3, 0.02), _MG_ALGOS + (_MG_NC,))),
    "fig3a": ("Mackey-Glass, uniform noise variance 5", _mg("fig3a", nz.Uniform(5.0))),
    "fig3b": ("Mackey-Glass, Rayleigh noise sigma^2 0.05", _mg("fig3b", nz.Rayleigh(0.05))),
    "fig3c": ("Mackey-Glass, rectangular noise amplitude 0.1", _mg("fig3c", nz.Rectangular(0.1, 2))),
    "fig3d": ("Mackey-Glass, exponential noise mean 0.1", _mg("fig3d", nz.Exponential(0.1))),
    "fig5a": ("sunspots 1700-1997, white Gaussian noise sigma 0.1", _sun("fig5a", nz.Wgn(0.1))),
    "fig5b": ("sunspots 1700-1997, uniform noise sigma 10", _sun("fig5b", nz.Uniform(100.0))),
}


def get_preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name][1]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None


# -- running -------------------------------------------------------------------


def load_series_csv(path) -> Series:
    """Read an ``index,value`` file (header optional) as an external series."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IngestionError(f"cannot read file ({exc.strerror})", path) from exc
    values = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        try:
            values.append(float(cells[-1]))
        except ValueError:
            if lineno == 1:
                continue
            raise IngestionError(f"non-numeric value {cells[-1]!r}", path, lineno) from None
    if not values:
        raise IngestionError("no records found", path)
    return Series(np.array(values), Origin.EXTERNAL)


def load_signal(cfg: ExperimentConfig) -> tuple[Series, float]:
    """Return the (possibly normalized) series and the factor applied."""
    sig = cfg.signal
    if sig.kind == "mackey-glass":
        needed = cfg.embedding_order + cfg.n_train + cfg.n_test
        series = mackey_glass(sig.mg, sig.n_samples if sig.n_samples is not None else needed)
    elif sig.kind == "sunspot":
        series = load_sunspot(sig.path)
    else:
        series = load_series_csv(sig.path)
    factor = 1.0
    if sig.normalize == "peak":
        peak = float(np.max(np.abs(series.values)))
        if peak > 0:
            factor = 1.0 / peak
            series = Series(series.values * factor, series.origin)
    return series, factor


@dataclass
class Diagnostics:
    """Stability bounds observed over every replica and step.

    ``mu_bound`` is the tightest step-size bound seen; a violation is a
    step whose step size exceeded the bound in force at that step.
    """

    lambda_max: float
    mu_bound: float = math.inf
    mu_violations: int = 0
    l_bound: float | None = None
    l_violations: int = 0

    def lines(self, prefix):
        out = [
            f"{prefix}.lambda_max = {self.lambda_max!r}",
            f"{prefix}.mu_bound = {self.mu_bound!r}",
            f"{prefix}.mu_violations = {self.mu_violations}",
        ]
        if self.l_bound is not None:
            out += [f"{prefix}.l_bound = {self.l_bound!r}", f"{prefix}.l_violations = {self.l_violations}"]
        return out


@dataclass
class AlgorithmResult:
    config: AlgorithmConfig
    curve: MseCurve
    mse: np.ndarray
    mu: np.ndarray
    codebook_size: np.ndarray
    final_sizes: list[int]
    diverged_at: list[int | None]
    diagnostics: Diagnostics
    traces: list[Trace] = field(default_factory=list, repr=False)

    @property
    def name(self) -> str:
        return self.config.kind


@dataclass
class RunResult:
    config: ExperimentConfig
    seeds: list[int]
    algorithms: dict[str, AlgorithmResult]
    duration: float = 0.0

    def __getitem__(self, kind: str) -> AlgorithmResult:
        return self.algorithms[kind]


def input_lambda_max(X: np.ndarray, algo: AlgorithmConfig) -> float:
    """Top eigenvalue of the input correlation estimate seen by ``algo``.

    Kernel filters use the Gaussian Gram matrix of the training inputs;
    LMAT uses the linear one (same nonzero spectrum as X^T X / n).
    """
    if algo.is_kernel:
        return lambda_max(gram_matrix(X, KernelParams(algo.h)))
    return lambda_max(X @ X.T)


def _update_diagnostics(diag: Diagnostics, trace: Trace, algo: AlgorithmConfig):
    sigma = np.sqrt(trace.lowpass_sq_error)
    ok = sigma > 0
    if not np.any(ok) or diag.lambda_max <= 0:
        return
    bounds = math.sqrt(math.pi / 2.0) / (sigma[ok] * diag.lambda_max)
    diag.mu_bound = min(diag.mu_bound, float(bounds.min()))
    diag.mu_violations += int(np.count_nonzero(trace.mu[ok] > bounds))
    if algo.kind == "VSS-KLMAT":
        e_sq = trace.errors[ok] ** 2
        lb = e_sq * sigma[ok] * diag.lambda_max * algo.beta / (math.sqrt(2.0 * math.pi) * math.log(10.0))
        worst = float(lb.max())
        diag.l_bound = worst if diag.l_bound is None else max(diag.l_bound, worst)
        diag.l_violations += int(np.count_nonzero(algo.l <= lb))


def run_experiment(cfg: ExperimentConfig, keep_traces: bool = False) -> RunResult:
    """Train every configured algorithm on every replica and average.

    Replica r draws its noise from seed ``base_seed + r``; all algorithms
    in a replica see the same corrupted training targets.
    """
    started = time.perf_counter()
    series, factor = load_signal(cfg)
    try:
        samples = embed(series, cfg.embedding_order)
        train, test = split(samples, cfg.n_train, cfg.n_test)
    except ContractError as exc:
        raise ConfigError(f"{cfg.name}: {exc}") from exc
    train_X, train_d = stack(train)
    test_X, test_d = stack(test)

    diags = {a.kind: Diagnostics(input_lambda_max(train_X, a)) for a in cfg.algorithms}
    traces: dict[str, list[Trace]] = {a.kind: [] for a in cfg.algorithms}
    for seed in cfg.seeds():
        rng = nz.SeededRng(seed)
        targets = train_d + factor * nz.noise_sequence(cfg.noise, rng, cfg.n_train)
        for algo in cfg.algorithms:
            trace = train_and_evaluate(algo.build(cfg.embedding_order), train_X, targets, test_X, test_d)
            traces[algo.kind].append(trace)
            _update_diagnostics(diags[algo.kind], trace, algo)

    digest = cfg.digest()
    results = {}
    for algo in cfg.algorithms:
        ts = traces[algo.kind]
        mse = average_traces(ts)
        n = len(mse)
        mu = np.mean([t.mu[:n] for t in ts], axis=0) if n else np.empty(0)
        size = np.mean([t.size[:n] for t in ts], axis=0) if n else np.empty(0)
        diverged = [t.diverged_at for t in ts]
        hits = [d for d in diverged if d is not None]
        curve = MseCurve(np.array([to_db(m) for m in mse]), len(ts), digest, min(hits) if hits else None)
        diag = diags[algo.kind]
        _warn(cfg, algo, diag, hits)
        results[algo.kind] = AlgorithmResult(
            algo, curve, mse, mu, size,
            [int(t.size[-1]) if len(t) else 0 for t in ts],
            diverged, diag, ts if keep_traces else [],
        )
    return RunResult(cfg, cfg.seeds(), results, time.perf_counter() - started)


def _warn(cfg, algo, diag, hits):
    if hits:
        log.warning("%s/%s diverged in %d of %d replicas (first at step %d)",
                    cfg.name, algo.kind, len(hits), cfg.n_replicas, min(hits))
    if diag.mu_violations:
        log.warning("%s/%s: step size exceeded the convergence bound %.4g on %d steps",
                    cfg.name, algo.kind, diag.mu_bound, diag.mu_violations)
    if diag.l_violations:
        log.warning("%s/%s: l = %g fell below its lower bound (max %.4g) on %d steps",
                    cfg.name, algo.kind, algo.l, diag.l_bound, diag.l_violations)


# -- output --------------------------------------------------------------------


def _real(x: float) -> str:
    return format(float(x), ".12e")


def _count(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else _real(x)


def csv_name(kind: str) -> str:
    return f"{kind.lower()}.csv"


def emit_csv(result: RunResult, outdir) -> list[Path]:
    """Write one learning-curve CSV per algorithm plus ``manifest.txt``."""
    outdir = Path(outdir)
    written = []
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        for kind, res in result.algorithms.items():
            rows = ["iteration,mse_db,mu,codebook_size"]
            for i in range(len(res.curve)):
                rows.append(f"{i + 1},{_real(res.curve.values_db[i])},{_real(res.mu[i])},"
                            f"{_count(res.codebook_size[i])}")
            if res.curve.diverged_at is not None:
                rows.append(f"diverged,{res.curve.diverged_at},,")
            path = outdir / csv_name(kind)
            _write(path, "\n".join(rows) + "\n")
            written.append(path)
        path = outdir / "manifest.txt"
        _write(path, manifest_text(result))
        written.append(path)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write results: {exc.strerror}", exc.filename) from exc
    return written


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def manifest_text(result: RunResult) -> str:
    cfg = result.config
    lines = [
        "# klmat run manifest",
        f"# config digest {cfg.digest()}",
        format_config(cfg).rstrip("\n"),
        "",
        "seeds = " + " ".join(str(s) for s in result.seeds),
    ]
    for kind, res in result.algorithms.items():
        prefix = f"result.{kind.lower()}"
        lines.append("")
        lines.append(f"{prefix}.file = {csv_name(kind)}")
        lines.append(f"{prefix}.iterations = {len(res.curve)}")
        lines.append(f"{prefix}.final_codebook_size = " + " ".join(str(s) for s in res.final_sizes))
        div = [str(d) for d in res.diverged_at if d is not None]
        lines.append(f"{prefix}.diverged = " + (" ".join(
            f"{seed}:{d}" for seed, d in zip(result.seeds, res.diverged_at) if d is not None) if div else "none"))
        lines.extend(res.diagnostics.lines(prefix))
    return "\n".join(lines) + "\n"


def bounds_report(cfg: ExperimentConfig) -> list[dict]:
    """Stability bounds at the start of training.

    The filter starts empty, so the initial error is the target itself;
    its RMS over the training set stands in for sigma_e.
    """
    series, _ = load_signal(cfg)
    try:
        train, _ = split(embed(series, cfg.embedding_order), cfg.n_train, cfg.n_test)
    except ContractError as exc:
        raise ConfigError(f"{cfg.name}: {exc}") from exc
    X, d = stack(train)
    sigma_e = float(np.sqrt(np.mean(d * d)))
    rows = []
    for algo in cfg.algorithms:
        lam = input_lambda_max(X, algo)
        row = {"algorithm": algo.kind, "lambda_max": lam, "sigma_e": sigma_e}
        if sigma_e > 0 and lam > 0:
            row["mu_bound"] = step_size_bound(sigma_e, lam)
            mu = algo.mu_max if algo.kind == "VSS-KLMAT" else algo.mu
            row["mu"] = mu
            row["mu_ok"] = mu < row["mu_bound"]
            if algo.kind == "VSS-KLMAT":
                row["l_bound"] = l_lower_bound(sigma_e**2, sigma_e, lam, algo.beta)
                row["l"] = algo.l
                row["l_ok"] = algo.l > row["l_bound"]
        rows.append(row)
    return rows

