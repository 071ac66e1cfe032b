"""Acceptance gate: one test per exit criterion, one PASS/FAIL line each.

Lines are collected in ``RESULTS`` and printed by the terminal-summary hook in
conftest.py. Tolerances and trial counts are fixed here, not tuned per run.
Monte-Carlo criteria use the default config seed as the base seed.
"""
import math

import numpy as np
import pytest
from scipy import stats

from beamsched.beamforming import beamforming_gain, build_codebook, select_beam
from beamsched.channel import generate_channel, noise_power_watts
from beamsched.config import SystemConfig
from beamsched.harness import ExperimentSpec, run_experiment
from beamsched.schedulers import enumerate_sequences, lri_update
from beamsched.utility import Scenario

RESULTS: list[str] = []
BASE_SEED = SystemConfig().rng_seed


def record(criterion: str, ok: bool, detail: str) -> None:
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def dominance_runs():
    cfg = SystemConfig(num_aps_N=2, num_ues_per_ap_M=3)
    return run_experiment(ExperimentSpec(cfg, trials=100, base_seed=BASE_SEED),
                          keep_traces=False)


@pytest.fixture(scope="module")
def distance_runs():
    out = {}
    for icd in (400.0, 200.0):
        cfg = SystemConfig(num_aps_N=2, num_ues_per_ap_M=3, inter_cell_distance=icd)
        out[icd] = run_experiment(
            ExperimentSpec(cfg, ("greedy", "learning"), trials=200, base_seed=BASE_SEED),
            keep_traces=False)
    return out


def test_1_simplex_invariant():
    rng = np.random.default_rng(1)
    calls = worst_sum = 0
    worst_min = 1.0
    for _ in range(200):
        k_total = int(rng.integers(2, 121))
        p = rng.dirichlet(np.ones(k_total))
        w = rng.uniform(0.01, 0.99)
        for _ in range(60):
            p = lri_update(p, int(rng.integers(k_total)), rng.random(), w)
            calls += 1
            worst_sum = max(worst_sum, abs(p.sum() - 1))
            worst_min = min(worst_min, p.min())
    ok = calls >= 10_000 and worst_sum <= 1e-9 and worst_min >= 0
    record("1", ok, f"{calls} updates, max |sum-1| = {worst_sum:.2e}, min p = {worst_min:.2e}")


def test_2_oracle_dominance(dominance_runs):
    u = dominance_runs.utilities
    violations = sum(int((u["exhaustive"] < u[name]).sum())
                     for name in ("greedy", "learning", "random"))
    means = {name: float(v.mean()) for name, v in u.items()}
    ordered = means["exhaustive"] >= means["greedy"] >= means["learning"]
    record("2 (dominance)", violations == 0 and ordered,
           f"{violations} per-trial violations over 100 trials; means "
           + ", ".join(f"{k}={v:.4f}" for k, v in means.items()))


def test_2_learning_beats_random(dominance_runs):
    u = dominance_runs.utilities
    diff = u["learning"] - u["random"]
    # paired one-sided t-test: both schedulers ran on the same scenarios
    p_value = stats.ttest_rel(u["learning"], u["random"], alternative="greater").pvalue
    record("2 (learning > random at 95%)", bool(p_value < 0.05),
           f"mean diff {diff.mean():+.5f} bits/s/Hz, one-sided p = {p_value:.3f}")


def test_3_complexity_counters():
    cases = [
        SystemConfig(num_aps_N=2, num_ues_per_ap_M=3, greedy_iters_NDG=5,
                     max_learning_iters_T=100),
        SystemConfig(num_aps_N=3, num_ues_per_ap_M=3, greedy_iters_NDG=2,
                     max_learning_iters_T=30),
        SystemConfig(num_aps_N=2, num_ues_per_ap_M=4, greedy_iters_NDG=10,
                     max_learning_iters_T=200),
        SystemConfig(num_aps_N=1, num_ues_per_ap_M=5, greedy_iters_NDG=3,
                     max_learning_iters_T=7),
    ]
    mismatches = []
    for cfg in cases:
        res = run_experiment(ExperimentSpec(cfg, ("exhaustive", "greedy", "learning"),
                                            trials=3, base_seed=BASE_SEED),
                             keep_traces=False)
        k, n = cfg.num_sequences, cfg.num_aps_N
        expected = {"exhaustive": k ** n,
                    "greedy": cfg.greedy_iters_NDG * n * k,
                    "learning": cfg.max_learning_iters_T * n}
        for name, value in expected.items():
            got = res.evaluations[name].tolist()
            if got != [value] * 3:
                mismatches.append(f"N={n} M={cfg.num_ues_per_ap_M} {name}: {got} != {value}")
    record("3", not mismatches,
           "; ".join(mismatches) or f"{len(cases)} configs x 3 trials, all counters exact")


def test_4_convergence_shape():
    cfg = SystemConfig(num_aps_N=2, num_ues_per_ap_M=5, learning_weight_w=0.15,
                       inter_cell_distance=400.0, max_learning_iters_T=100)
    res = run_experiment(ExperimentSpec(cfg, ("learning",), trials=50, base_seed=BASE_SEED))
    converged = monotone = 0
    for t in range(50):
        rows = [r for r in res.traces["learning"] if r[0] == t]
        aps_done = set()
        mono = True
        for ap in range(2):
            ap_rows = [r for r in rows if r[2] == ap]
            if any(r[6] > 0.9 for r in ap_rows):
                aps_done.add(ap)
            u_max = [r[5] for r in ap_rows]
            mono &= all(b >= a for a, b in zip(u_max, u_max[1:]))
        converged += len(aps_done) == 2
        monotone += mono
    ok = converged >= 0.6 * 50 and monotone == 50
    record("4", ok, f"{converged}/50 trials with both APs above 0.9 by iteration 100; "
                    f"u_max monotone in {monotone}/50")


def test_5_near_optimality(distance_runs):
    gaps, ratios = {}, {}
    for icd, res in distance_runs.items():
        g, lrn = res.utilities["greedy"].mean(), res.utilities["learning"].mean()
        gaps[icd] = g - lrn
        ratios[icd] = lrn / g
    ok = ratios[400.0] >= 0.9 and ratios[200.0] >= 0.9 and gaps[200.0] <= gaps[400.0] + 0.05
    record("5", ok, f"learning/greedy = {ratios[400.0]:.4f} (400 m), {ratios[200.0]:.4f} "
                    f"(200 m); gap {gaps[200.0]:.4f} (200 m) vs {gaps[400.0]:.4f} (400 m)")


def test_6_permutation_decoupling():
    worst = 0.0
    for m in range(1, 7):
        seqs = enumerate_sequences(m)
        for seed in range(10):
            sc = Scenario.generate(SystemConfig(num_aps_N=1, num_ues_per_ap_M=m),
                                   np.random.default_rng(seed))
            values = sc.evaluate(seqs[:, None, :])[:, 0]
            worst = max(worst, float(values.max() - values.min()))
    record("6", worst <= 1e-12, f"max spread across sequences {worst:.2e} (M=1..6, 10 seeds each)")


def test_7_physical_layer_points():
    cfg = SystemConfig()
    noise = noise_power_watts(cfg)
    noise_ok = abs(noise / 2.0710e-12 - 1) <= 1e-4
    cb = build_codebook(cfg)
    norm_err = float(np.abs(np.linalg.norm(cb.entries, axis=1) ** 2 - 1).max())
    rng = np.random.default_rng(7)
    mismatches = 0
    for _ in range(1000):
        h = generate_channel(rng, cfg)
        scan = [beamforming_gain(cb[i], h) for i in range(len(cb))]
        best = max(scan)
        first = next(i for i, g in enumerate(scan) if g >= best * (1 - 1e-12))
        mismatches += select_beam(cb, h) != first
    ok = noise_ok and norm_err <= 1e-12 and mismatches == 0
    record("7", ok, f"noise {noise:.4e} W, codebook norm error {norm_err:.1e}, "
                    f"{mismatches}/1000 beam mismatches")


def test_8_determinism(tmp_path):
    cfg = SystemConfig(max_learning_iters_T=60)
    dirs = [tmp_path / "a", tmp_path / "b", tmp_path / "concurrent"]
    for d, workers in zip(dirs, (1, 1, 3)):
        run_experiment(ExperimentSpec(cfg, trials=6, base_seed=BASE_SEED, out_dir=d,
                                      workers=workers))
    contents = [{p.name: p.read_bytes() for p in sorted(d.iterdir())} for d in dirs]
    ok = contents[0] == contents[1] == contents[2] and len(contents[0]) > 0
    record("8", ok, f"{len(contents[0])} files identical across two sequential runs and "
                    "one concurrent run")


def test_noise_in_dbm_matches():
    assert 10 * math.log10(noise_power_watts(SystemConfig())) + 30 == pytest.approx(-86.84, abs=0.005)
