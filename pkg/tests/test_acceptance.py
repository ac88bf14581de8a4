"""Acceptance suite. Each test carries a ``criterion`` mark and the run
ends with a one-line PASS/FAIL summary per criterion."""

import math
import time

import mpmath
import numpy as np
import pytest

from klmat.analysis import gradient_oracle, l_lower_bound, step_size_bound, to_db
from klmat.bench import (
    PRESETS,
    AlgorithmConfig,
    ExperimentConfig,
    SignalConfig,
    get_preset,
    run_experiment,
)
from klmat.cli import main
from klmat.filters import KLMAT, FixedStepSize, LorentzianStepSize, NcParams, lorentzian_mu, vss_step
from klmat.noise import (
    BernoulliGaussianImpulsive,
    Exponential,
    Rayleigh,
    SeededRng,
    Uniform,
    Wgn,
    noise_sequence,
)
from klmat.signals import MgParams, embed, mackey_glass, split, stack

criterion = pytest.mark.criterion


def desk_config(algorithms, noise=Wgn(0.1)):
    """Mackey-Glass, order 10, 500 train / 200 test, 10 replicas, seed 1."""
    return ExperimentConfig(
        name="desk",
        signal=SignalConfig("mackey-glass"),
        embedding_order=10,
        n_train=500,
        n_test=200,
        algorithms=tuple(algorithms),
        noise=noise,
        n_replicas=10,
        base_seed=1,
    )


def preset_algo(preset, kind):
    return next(a for a in get_preset(preset).algorithms if a.kind == kind)


# 1 ---------------------------------------------------------------------------

@criterion(1, "expansion oracle equivalence (rel 1e-12, < 5 s)")
def test_expansion_oracle(mg_series):
    started = time.perf_counter()
    train, test = split(embed(mg_series, 10), 200, 50)
    h = 1.0
    filt = KLMAT(h, FixedStepSize(1.0))
    history = []
    for s in train:
        res = filt.step(s.input, s.desired)
        history.append((s.input, res.error, res.mu))
    assert len(filt) == 200
    for probe in test:
        terms = []
        for center, e, mu in history:
            dist = math.fsum((a - b) ** 2 for a, b in zip(center, probe.input))
            terms.append(mu * e**2 * math.copysign(1.0, e) * math.exp(-h * dist))
        oracle = math.fsum(terms)
        assert filt.predict(probe.input) == pytest.approx(oracle, rel=1e-12, abs=0)
    assert time.perf_counter() - started < 5.0


# 2 ---------------------------------------------------------------------------

@criterion(2, "gradient oracle vs central differences of |e|^3 (rel 1e-6)")
@pytest.mark.parametrize("e", [-2.0, -1.0, -0.1, 0.1, 1.0, 2.0])
def test_gradient_check(e):
    step = 1e-5
    fd = (abs(e + step) ** 3 - abs(e - step) ** 3) / (2 * step)
    assert gradient_oracle(e) == pytest.approx(fd, rel=1e-6)


# 3 ---------------------------------------------------------------------------

@criterion(3, "NC-KLMAT with zero thresholds is bit-identical to KLMAT")
def test_nc_neutrality(mg_series):
    samples = embed(mg_series, 10)[:500]
    X, d = stack(samples)
    assert len({x.tobytes() for x in X}) == 500
    d = d + noise_sequence(Wgn(0.1), SeededRng(1), 500)
    plain = KLMAT(1.0, 1.0)
    gated = KLMAT(1.0, 1.0, NcParams(0.0, 0.0, enabled=True))
    for x, target in zip(X, d):
        a = plain.step(x, target)
        b = gated.step(x, target)
        assert a.error != 0.0
        assert a == b
    assert plain.coeffs.tobytes() == gated.coeffs.tobytes()
    assert plain.centers.tobytes() == gated.centers.tobytes()


# 4 ---------------------------------------------------------------------------

@criterion(4, "Lorentzian step size clamped to [0.01, 2] and monotone in delta_e")
def test_clamp_and_monotonicity():
    gen = np.random.default_rng(4)
    sched = None
    for i in range(10_000):
        if i % 100 == 0:
            sched = LorentzianStepSize(beta=10 ** gen.uniform(-2, 2), l=10 ** gen.uniform(-3, 1),
                                       theta=gen.uniform(0, 0.999))
        e = gen.choice([0.0, gen.normal() * 10 ** gen.uniform(-6, 6)])
        sched, mu = vss_step(sched, e)
        assert 0.01 <= mu <= 2.0
    for _ in range(20):
        beta, l = 10 ** gen.uniform(-2, 2), 10 ** gen.uniform(-3, 1)
        deltas = np.sort(10 ** gen.uniform(-12, 12, size=500))
        raw = [lorentzian_mu(x, beta, l) for x in np.concatenate([[0.0], deltas])]
        assert np.all(np.diff(raw) >= 0)


# 5-7: shared desk-scale runs ---------------------------------------------------------

@pytest.fixture(scope="module")
def klmat_desk():
    started = time.perf_counter()
    result = run_experiment(desk_config([preset_algo("fig2a", "KLMAT")]), keep_traces=True)
    return result, time.perf_counter() - started


@criterion(5, "KLMAT converges >= 5 dB at desk scale, no divergence, < 60 s")
def test_convergence_desk_scale(klmat_desk):
    result, elapsed = klmat_desk
    res = result["KLMAT"]
    curve = res.curve.values_db
    assert res.curve.diverged_at is None and len(curve) == 500
    assert all(d is None for d in res.diverged_at)
    assert np.mean(curve[-50:]) <= curve[0] - 5.0
    assert elapsed < 60.0


def reach_iteration(trace, target_db):
    """First 1-based iteration whose testing MSE is at or below target."""
    hits = np.nonzero(10 * np.log10(trace.mse) <= target_db)[0]
    return int(hits[0]) + 1 if len(hits) else math.inf


@criterion(6, "VSS-KLMAT reaches initial - 5 dB no later than matched fixed-mu KLMAT in >= 8/10 replicas")
def test_vss_speedup(mg_desk_arrays):
    vss_cfg = preset_algo("fig2a", "VSS-KLMAT")
    vss = run_experiment(desk_config([vss_cfg]), keep_traces=True)["VSS-KLMAT"]
    vss_final = float(np.mean(vss.curve.values_db[-50:]))

    # pick the fixed step size whose steady state is closest to VSS-KLMAT's
    candidates = {}
    for mu in (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0):
        res = run_experiment(desk_config([AlgorithmConfig("KLMAT", mu=mu, h=vss_cfg.h)]), keep_traces=True)
        candidates[mu] = res["KLMAT"]
    mu, fixed = min(candidates.items(), key=lambda kv: abs(np.mean(kv[1].curve.values_db[-50:]) - vss_final))
    assert abs(np.mean(fixed.curve.values_db[-50:]) - vss_final) <= 1.0

    # initial MSE: testing MSE of the untrained (zero) filter, common to both
    _, _, _, test_d = mg_desk_arrays
    target = to_db(float(np.mean(test_d**2))) - 5.0
    wins = sum(reach_iteration(v, target) <= reach_iteration(f, target)
               for v, f in zip(vss.traces, fixed.traces))
    assert wins >= 8, f"VSS no slower in {wins}/10 replicas (fixed mu = {mu})"


@criterion(7, "KLMAT final MSE <= KLMS under Bernoulli-Gaussian impulsive noise (same mu, h)")
def test_impulsive_robustness():
    klms, klmat = preset_algo("fig2b", "KLMS"), preset_algo("fig2b", "KLMAT")
    assert (klms.mu, klms.h) == (klmat.mu, klmat.h)
    cfg = desk_config([klms, klmat], noise=get_preset("fig2b").noise)
    assert cfg.noise == BernoulliGaussianImpulsive(sigma_g=0.02, p_c=0.3, sigma_i=0.02, impulse_scale=1.0)
    result = run_experiment(cfg)
    assert result["KLMAT"].curve.diverged_at is None and result["KLMS"].curve.diverged_at is None
    assert np.mean(result["KLMAT"].curve.values_db[-50:]) <= np.mean(result["KLMS"].curve.values_db[-50:])


# 8 ---------------------------------------------------------------------------

N_MOMENT = 100_000
SAMPLERS = {
    "wgn": (Wgn(0.1), 0.0, 0.01),
    "bg": (BernoulliGaussianImpulsive(0.02, 0.3, 0.02), 0.0, 0.02**2 * 1.3),
    "uniform": (Uniform(5.0), 0.0, 5.0),
    "rayleigh": (Rayleigh(0.05), math.sqrt(0.05 * math.pi / 2), (2 - math.pi / 2) * 0.05),
    "exponential": (Exponential(0.1), 0.1, 0.01),
}


@criterion(8, "sampler moments within 3 SE at 1e5 samples; BG(p_c=0) == WGN bit-exactly")
@pytest.mark.parametrize("name", list(SAMPLERS))
def test_sampler_moments(name):
    model, mean, var = SAMPLERS[name]
    x = noise_sequence(model, SeededRng(2026), N_MOMENT)
    c = x - x.mean()
    se_var = math.sqrt((np.mean(c**4) - np.mean(c**2) ** 2) / N_MOMENT)
    assert abs(x.mean() - mean) < 3 * math.sqrt(var / N_MOMENT)
    assert abs(x.var(ddof=1) - var) < 3 * se_var


@criterion(8, "sampler moments within 3 SE at 1e5 samples; BG(p_c=0) == WGN bit-exactly")
def test_bg_degenerates_to_wgn():
    a = noise_sequence(BernoulliGaussianImpulsive(0.1, 0.0, 0.5), SeededRng(8), N_MOMENT)
    b = noise_sequence(Wgn(0.1), SeededRng(8), N_MOMENT)
    assert a.tobytes() == b.tobytes()


# 9 ---------------------------------------------------------------------------

@criterion(9, "Mackey-Glass fixed points (1e-9) and dt-halving self-convergence (< 1e-4 over 500 samples)")
@pytest.mark.parametrize("history", [0.0, 1.0])
def test_mg_fixed_points(history):
    s = mackey_glass(MgParams(q=0.1, m=0.2, history_value=history), 500)
    assert np.max(np.abs(s.values - history)) < 1e-9


@criterion(9, "Mackey-Glass fixed points (1e-9) and dt-halving self-convergence (< 1e-4 over 500 samples)")
def test_mg_self_convergence():
    coarse = mackey_glass(MgParams(dt=0.1, history_value=1.2, tau=30.0), 500).values
    fine = mackey_glass(MgParams(dt=0.05, history_value=1.2, tau=30.0), 500).values
    drift = np.abs(coarse - fine)
    worst = float(drift.max())
    assert worst < 1e-4, f"max drift {worst:.3g}; first sample over 1e-4 is #{int(np.argmax(drift >= 1e-4))}"


# 10 --------------------------------------------------------------------------

@criterion(10, "stability bounds match high-precision evaluation (1e-12)")
def test_stability_diagnostics():
    mpmath.mp.dps = 50
    assert abs(step_size_bound(1.0, 1.0) - float(mpmath.sqrt(mpmath.pi / 2))) <= 1e-12
    expected = 1 / (mpmath.sqrt(2 * mpmath.pi) * mpmath.log(10))
    assert abs(l_lower_bound(1.0, 1.0, 1.0, 1.0) - float(expected)) <= 1e-12


# 11 --------------------------------------------------------------------------

@criterion(11, "every preset run twice with the same seed gives byte-identical CSVs")
@pytest.mark.parametrize("name", list(PRESETS))
def test_preset_determinism(name, tmp_path):
    for sub in ("a", "b"):
        assert main(["run", name, "--scale", "0.03", "--seed", "5", "-o", str(tmp_path / sub)]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert len(files) == len(get_preset(name).algorithms) + 1
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


# 12 --------------------------------------------------------------------------

@criterion(12, "sunspot fig5a run completes without divergence and improves on iteration 1")
def test_sunspot_pipeline(tmp_path, capsys):
    cfg = get_preset("fig5a")
    assert cfg.embedding_order == 2 and cfg.noise == Wgn(0.1)
    assert all(a.h == 1.5 for a in cfg.algorithms if a.is_kernel)
    assert main(["run", "fig5a", "-o", str(tmp_path)]) == 0
    for algo in cfg.algorithms:
        lines = (tmp_path / f"{algo.kind.lower()}.csv").read_text().splitlines()
        assert not lines[-1].startswith("diverged")
        mse = np.array([float(line.split(",")[1]) for line in lines[1:]])
        assert len(mse) == cfg.n_train
        assert np.mean(mse[-20:]) < mse[0], algo.kind
