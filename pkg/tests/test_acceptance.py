"""Exit criteria, one test per criterion, each printing a PASS/FAIL line."""

import json
import math
import time
import timeit

import numpy as np
import pytest

from bilocal.cli import main
from bilocal.correlations import (
    MeasurementStrategy,
    canonical_strategy,
    eval_bloch_general,
    eval_trace,
    eval_werner_prime,
    pq_threshold,
)
from bilocal.experiments import HEADLINE_P, HEADLINE_Q, reported_strategy, run_paper_experiment, scan_pq
from bilocal.optimizer import PsoConfig
from bilocal.qstate import bloch_decompose, ppt_min_eigenvalue, random_state, werner

SQRT2 = math.sqrt(2)


@pytest.fixture
def verdict(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(number, ok, detail):
        line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}"
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        else:
            print(line)
        assert ok, line

    return emit


def _random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _random_bob(rng):
    C = rng.normal(size=(3, 3))
    return C / np.linalg.svd(C, compute_uv=False).sum() * rng.uniform(0.1, 1.0)


def test_criterion_1_golden_sprime(verdict):
    s = reported_strategy()
    _, _, sp = eval_werner_prime(s, check=False)
    reps = 2000
    per_call = timeit.timeit(lambda: eval_werner_prime(s, check=False), number=reps) / reps
    ok = abs(sp - 4.0642) <= 5e-3 and per_call < 1e-3
    verdict(1, ok, f"S' = {sp:.6f} (target 4.0642 +- 5e-3), {per_call * 1e6:.1f} us per evaluation (< 1 ms)")


def test_criterion_2_threshold(verdict):
    thr = pq_threshold(4.0642)
    verdict(2, abs(thr - 0.2422) <= 5e-5, f"pq_threshold(4.0642) = {thr:.6f} (target 0.2422 +- 5e-5)")


def test_criterion_3_headline_cell(verdict):
    (cell,) = scan_pq(4.0642, points=[(HEADLINE_P, HEADLINE_Q)])
    ok = cell.violates_paper and cell.ab_entangled and not cell.bc_entangled
    verdict(
        3,
        ok,
        f"p=3.2/4.1294, q=1/3.1: pq={cell.pq:.6f}, violates_paper={cell.violates_paper}, "
        f"ab_entangled={cell.ab_entangled}, bc_entangled={cell.bc_entangled}",
    )


def test_criterion_4_pso_reproduction(verdict):
    start = time.perf_counter()
    values = [run_paper_experiment(PsoConfig(seed=seed))[1] for seed in range(20)]
    elapsed = time.perf_counter() - start
    best = max(values)
    frac = float(np.mean(np.array(values) >= 2 * SQRT2))
    ok = best >= 4.06 and frac >= 0.8 and elapsed < 60
    verdict(
        4,
        ok,
        f"20 seeds: best S' = {best:.4f} (>= 4.06), {frac:.0%} of seeds >= 2 sqrt2 (>= 80%), {elapsed:.1f} s (< 60 s)",
    )


def test_criterion_5_oracle_equivalence(verdict):
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        s = MeasurementStrategy(
            _random_unit(rng), _random_unit(rng), _random_unit(rng), _random_unit(rng), _random_bob(rng), _random_bob(rng)
        )
        ra, rb = random_state(rng, rank=rng.integers(1, 5)), random_state(rng, rank=rng.integers(1, 5))
        t = eval_trace(s, ra, rb)
        g = eval_bloch_general(s, bloch_decompose(ra), bloch_decompose(rb))
        worst = max(worst, abs(t.I - g.I), abs(t.J - g.J), abs(t.S - g.S))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 5
    verdict(5, ok, f"1000 random triples: max |trace - bloch| = {worst:.2e} (<= 1e-10), {elapsed:.2f} s (< 5 s)")


def test_criterion_6_canonical_baseline(verdict):
    s = canonical_strategy()
    worst = 0.0
    for p in np.linspace(0, 1, 21):
        for q in np.linspace(0, 1, 21):
            worst = max(worst, abs(eval_trace(s, werner(p), werner(q)).S - 2 * math.sqrt(2 * p * q)))
    s11 = eval_trace(s, werner(1), werner(1)).S
    ok = worst <= 1e-10 and abs(s11 - 2 * SQRT2) <= 1e-10
    verdict(6, ok, f"21x21 grid: max |S - 2 sqrt(2pq)| = {worst:.2e}; S(1,1) = {s11:.12f}")


def test_criterion_7_werner_ppt(verdict):
    worst = 0.0
    signs_ok = True
    for p in np.round(np.linspace(0, 1, 11), 10):
        lam = ppt_min_eigenvalue(werner(p))
        worst = max(worst, abs(lam - (1 - 3 * p) / 4))
        signs_ok &= (lam < 0) == (p > 1 / 3)
    at_third = ppt_min_eigenvalue(werner(1 / 3))
    flip = ppt_min_eigenvalue(werner(1 / 3 - 1e-6)) > 0 > ppt_min_eigenvalue(werner(1 / 3 + 1e-6))
    ok = worst <= 1e-10 and signs_ok and abs(at_third) <= 1e-10 and flip
    verdict(7, ok, f"max |lambda_min - (1-3p)/4| = {worst:.2e}; lambda_min(1/3) = {at_third:.1e}; sign flips at 1/3: {flip}")


def test_criterion_8_audit_integrity(verdict, capsys):
    code = main(["audit"])
    report = json.loads(capsys.readouterr().out)
    ok = (
        code == 0
        and report["spectral_radius_M"] <= 1.05
        and report["spectral_radius_N"] <= 1.05
        and report["rank1_residual_M"] < 0.02
        and report["rank1_residual_N"] < 0.02
        and math.isfinite(report["formula_gap"])
    )
    verdict(
        8,
        ok,
        f"radius M={report['spectral_radius_M']:.4f}, N={report['spectral_radius_N']:.4f} (<= 1.05); "
        f"rank-1 residual M={report['rank1_residual_M']:.1e}, N={report['rank1_residual_N']:.1e} (< 0.02); "
        f"formula_gap={report['formula_gap']:.4f} (paper S'={report['Sprime_paper']:.4f} vs trace S={report['S_trace_at_pq']:.4f})",
    )


def test_criterion_9_determinism(verdict, tmp_path, capsys):
    blobs = []
    for name in ("first", "second"):
        out = tmp_path / name
        assert main(["optimize", "--seed", "2024", "--out", str(out)]) == 0
        blobs.append((out / "convergence.csv").read_bytes())
    capsys.readouterr()
    ok = blobs[0] == blobs[1] and blobs[0].count(b"\n") == 501
    verdict(9, ok, f"two optimize runs with seed 2024: convergence CSVs byte-identical = {blobs[0] == blobs[1]}")
