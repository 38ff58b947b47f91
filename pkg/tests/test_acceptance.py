"""Acceptance suite: twelve criteria, one PASS/FAIL line each.

Run with pytest (lines are collected into the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

import filecmp
import math
import os
import shutil
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from sobmorrey import baselines, bumptrain, cex, experiments
from sobmorrey.paramlab import (Mode, scaling_exponent,
                                scaling_exponent_expanded, validate)

EXAMPLE = (2, 1.5, 2, 1.5)
_LINES = []


def record(number, title, ok, detail, elapsed, budget, log=None):
    passed = bool(ok) and elapsed < budget
    line = (f"CRITERION {number} {'PASS' if passed else 'FAIL'} {title}: {detail} "
            f"[{elapsed:.2f}s / {budget:g}s]")
    (_LINES if log is None else log).append(line)
    print(line)
    return passed


@pytest.fixture(scope="module")
def example():
    return validate(*EXAMPLE)


@pytest.fixture(scope="module")
def normalized(example):
    t = time.perf_counter()
    fam = cex.normalize(cex.make_family(example), range(30, 45))
    return fam, time.perf_counter() - t


# 1 ---------------------------------------------------------------------------

def test_exponent_algebra(acceptance_log):
    t = time.perf_counter()
    ps = validate(*EXAMPLE)
    exact = (ps.theta == Fraction(1, 2) and ps.alpha == Fraction(1, 2)
             and ps.r_low == 3 and ps.sobolev_exp == 6
             and all(scaling_exponent(ps, r, exact=True) == (3 - Fraction(r)) / 2
                     for r in (Fraction(1), Fraction(5, 2), Fraction(3), Fraction(6), Fraction(17, 4))))
    rng = np.random.default_rng(42)
    worst, done = 0.0, 0
    while done < 1000:
        d = int(rng.integers(2, 7))
        p = float(rng.uniform(1.05, d - 0.05))
        sob = p * d / (d - p)
        q = float(rng.uniform(1.01, min(sob, 20.0) - 0.01))
        q1 = float(rng.uniform(1.0, q))
        try:
            s = validate(d, p, q, q1, mode=Mode.VERIFICATION)
        except ValueError:
            continue
        r = float(rng.uniform(0.1, 2 * float(s.sobolev_exp)))
        th, al = float(s.theta), float(s.alpha)
        identity = th + al * d - r * al * d / float(s.q)
        scale = max(1.0, abs(identity))
        worst = max(worst, abs(scaling_exponent(s, r) - identity) / scale,
                    abs(scaling_exponent_expanded(s, r) - identity) / scale)
        done += 1
    elapsed = time.perf_counter() - t
    ok = exact and worst <= 1e-12
    assert record(1, "exponent algebra", ok, f"exact={exact} max identity error={worst:.3g}",
                  elapsed, 1.0, acceptance_log)


# 2 ---------------------------------------------------------------------------

def test_offset_schedule(acceptance_log):
    t = time.perf_counter()
    failures = {}
    direct_ok = True
    for theta in ("0.3", "0.5", "0.75"):
        sched = bumptrain.make_schedule(theta, 60)
        failures[theta] = bumptrain.check_schedule(sched, 60)
        # floating-point view of the same claims for the blocks small enough to list
        for blk in sched.blocks():
            if blk.k > 24:
                break
            a = blk.offsets()
            lo, hi = 2.0 ** (blk.k - 1) + 2, 2.0 ** blk.k - 2
            direct_ok &= bool(np.all((a > lo) & (a < hi)))
            direct_ok &= bool(np.all(np.diff(a) >= 4.0))
            if blk.k < 24:
                nxt = sched.block(blk.k + 1).offset(1)
                direct_ok &= bool(nxt - a[-1] >= 4.0)
    elapsed = time.perf_counter() - t
    ok = direct_ok and not any(failures.values())
    assert record(2, "offset schedule", ok,
                  f"exact failures={sum(map(len, failures.values()))} float check={direct_ok}",
                  elapsed, 1.0, acceptance_log)


# 3 ---------------------------------------------------------------------------

def test_closed_forms(acceptance_log):
    t = time.perf_counter()
    worst = 0.0
    k0 = bumptrain.minimal_k0(Fraction(1, 2))
    for n in range(k0, 15):
        train = bumptrain.make_train("0.5", n)
        for r in (1.0, 1.5, 2.0, 3.0):
            closed = bumptrain.sigma_lr_norm_closed(train, r)
            quad = bumptrain.sigma_lr_norm_quadrature(train, r)
            worst = max(worst, abs(quad / closed - 1.0))
    counts = [bumptrain.make_schedule("0.5", n).total_count() for n in range(30, 61)]
    inc = np.diff(np.log2(counts))
    drift = float(np.max(np.abs(inc - 0.5)))
    elapsed = time.perf_counter() - t
    ok = worst <= 1e-6 and drift <= 0.02
    assert record(3, "closed forms", ok, f"max rel diff={worst:.3g} count increment drift={drift:.3g}",
                  elapsed, 10.0, acceptance_log)


# 4 ---------------------------------------------------------------------------

def test_gradient_bound(normalized, acceptance_log):
    fam, norm_time = normalized
    t = time.perf_counter()
    ns = range(30, 45)
    grads = [cex.grad_lp_norm(fam, n) for n in ns]
    logs = [cex.log2_grad_lp_norm(fam, n) for n in ns]
    inc = float(np.max(np.abs(np.diff(logs))))
    elapsed = norm_time + time.perf_counter() - t
    ok = max(grads) <= 1.0 and inc <= 0.02
    assert record(4, "gradient bound", ok,
                  f"s={fam.normalization:.6g} max grad={max(grads):.17g} max |log2 step|={inc:.3g}",
                  elapsed, 10.0, acceptance_log)


# 5 ---------------------------------------------------------------------------

def test_morrey_bound(normalized, example, acceptance_log):
    fam, norm_time = normalized
    t = time.perf_counter()
    sups = [cex.morrey_sup(fam, n).sup for n in range(30, 45)]
    spread = max(sups) / min(sups)
    raw = cex.make_family(example)
    k0 = raw.train(30).schedule.k0
    candidate = cex.morrey_sup(raw, k0)
    brute = cex.morrey_sup_grid(raw, k0, h=0.1)
    ratio = candidate.sup / brute
    elapsed = norm_time + time.perf_counter() - t
    ok = max(sups) <= 1.0 and spread <= 4.0 and 1 / 1.05 <= ratio <= 1.05
    assert record(5, "Morrey bound", ok,
                  f"max sup={max(sups):.6g} spread={spread:.4g} candidate/grid at n={k0}: {ratio:.5f}",
                  elapsed, 60.0, acceptance_log)


# 6 ---------------------------------------------------------------------------

def test_scaling_law(example, acceptance_log):
    t = time.perf_counter()
    fam = cex.make_family(example)
    errors = {}
    for r, target in ((2.5, 0.25), (3.0, 0.0), (4.0, -0.5), (6.0, -1.5)):
        fit = cex.scaling_fit(fam, r, (30, 44))
        errors[r] = fit.slope - target
    elapsed = time.perf_counter() - t
    ok = all(abs(e) <= (0.02 if r == 3.0 else 0.05) for r, e in errors.items())
    detail = " ".join(f"r={r:g}:{e:+.2g}" for r, e in errors.items())
    assert record(6, "scaling law", ok, f"slope errors {detail}", elapsed, 5.0, acceptance_log)


# 7 ---------------------------------------------------------------------------

def test_sharpness_verdict(example, acceptance_log):
    t = time.perf_counter()
    fam = cex.make_family(example)
    r_list = [1.5, 2.0, 2.5, 2.9, 3.0, 3.5, 4.0, 6.0]
    rows = cex.sharpness_report(fam, r_list, (30, 44))
    predicate = [cex.Verdict.BOUNDED if r >= 3.0 else cex.Verdict.BLOW_UP for r in r_list]
    got = [row.verdict for row in rows]
    elapsed = time.perf_counter() - t
    ok = got == predicate and all(row.agrees for row in rows)
    assert record(7, "sharpness verdict", ok,
                  " ".join(f"{r:g}:{v.value}" for r, v in zip(r_list, got)), elapsed, 5.0,
                  acceptance_log)


# 8 ---------------------------------------------------------------------------

def test_lemma1(acceptance_log):
    t = time.perf_counter()
    ps = validate(*EXAMPLE, mode=Mode.VERIFICATION)
    rows = experiments.run_lemma1(ps, experiments.seed_list())
    ratios = np.array([r["ratio"] for r in rows])
    drift = max(abs(r["ratio_scaled"] / r["ratio"] - 1.0) for r in rows)
    top = float(ratios.max())
    elapsed = time.perf_counter() - t
    ok = (np.all(np.isfinite(ratios)) and np.all(ratios > 0) and drift <= 1e-10
          and baselines.within(top, baselines.LEMMA1_RATIO))
    assert record(8, "Lemma 1 ratio", ok,
                  f"max={top:.6g} baseline={baselines.LEMMA1_RATIO:.6g} scale drift={drift:.2g}",
                  elapsed, 120.0, acceptance_log)


# 9 ---------------------------------------------------------------------------

def test_holder_chain(acceptance_log):
    t = time.perf_counter()
    ps = validate(*EXAMPLE, mode=Mode.VERIFICATION)
    r_list = experiments.holder_sample_points(ps)
    rows = experiments.run_holder(ps, experiments.seed_list(count=100), r_list)
    worst = min(r["slack"] / r["bound"] for r in rows)
    ends = {float(ps.r_low), float(ps.sobolev_exp)}
    end_slack = max(abs(r["slack"]) for r in rows if r["r"] in ends)
    elapsed = time.perf_counter() - t
    ok = (len(rows) == 500 and worst >= -1e-12 and end_slack == 0.0
          and r_list[0] == ps.r_low and r_list[-1] == ps.sobolev_exp)
    assert record(9, "Hoelder chain", ok, f"min slack/bound={worst:.3g} endpoint slack={end_slack:g}",
                  elapsed, 60.0, acceptance_log)


# 10 --------------------------------------------------------------------------

def test_maximal_suite(acceptance_log):
    t = time.perf_counter()
    seeds = experiments.seed_list()
    rows = experiments.run_maximal(seeds)
    kernel = experiments.run_kernel_checks(seeds)
    plateau = experiments.constant_plateau_sharp()
    pointwise = (all(r["dominates"] for r in rows)
                 and max(r["sublinear_gap"] for r in rows) <= 1e-12
                 and max(r["sharp_over_2hl"] for r in rows) <= 1e-12)
    brute = max(max(r["hl_diff"], r["sharp_diff"]) for r in kernel)
    fs = {k: max(r[k] for r in rows) for k in ("r1", "r2", "r3", "r4")}
    fs_ok = all(math.isfinite(v) and baselines.within(v, baselines.FS_RATIOS[k]) for k, v in fs.items())
    elapsed = time.perf_counter() - t
    ok = pointwise and plateau == 0.0 and brute <= 1e-13 and fs_ok
    detail = (f"pointwise={pointwise} M#(const)={plateau:g} brute diff={brute:.2g} "
              + " ".join(f"{k}={v:.4g}" for k, v in fs.items()))
    assert record(10, "maximal operators", ok, detail, elapsed, 60.0, acceptance_log)


# 11 --------------------------------------------------------------------------

def test_poincare_refinement(acceptance_log):
    t = time.perf_counter()
    rows = experiments.run_poincare(experiments.seed_list())
    coarse = max(r["coarse"] for r in rows)
    fine = max(r["fine"] for r in rows)
    change = fine / coarse - 1.0
    elapsed = time.perf_counter() - t
    ok = abs(change) <= 0.10 and baselines.within(coarse, baselines.POINCARE_RATIO)
    assert record(11, "Poincare refinement", ok,
                  f"max ratio h={coarse:.5g} h/2={fine:.5g} change={change:+.3%}", elapsed, 60.0,
                  acceptance_log)


# 12 --------------------------------------------------------------------------

SUITE = [
    ("validate", True), ("sigma", True), ("verify-lemma1", True), ("verify-sobolev", True),
    ("verify-holder", True), ("verify-maximal", False), ("verify-poincare", False),
    ("cex-norms", True), ("cex-fit", True), ("report", False),
]


def run_suite(out_dir):
    params = ["--d", "2", "--p", "1.5", "--q", "2", "--q1", "1.5"]
    codes = []
    for command, needs_params in SUITE:
        argv = [sys.executable, "-m", "sobmorrey", command, "--out", str(out_dir)]
        if needs_params:
            argv += params
        proc = subprocess.run(argv, capture_output=True, text=True)
        codes.append((command, proc.returncode))
    return codes


def test_determinism(tmp_path, acceptance_log):
    t = time.perf_counter()
    out, snapshot = tmp_path / "out", tmp_path / "first"
    codes = run_suite(out)
    shutil.copytree(out, snapshot)
    codes += run_suite(out)  # identical config, same output directory
    names = sorted(os.listdir(snapshot))
    match, mismatch, errors = filecmp.cmpfiles(snapshot, out, names, shallow=False)
    same_listing = names == sorted(os.listdir(out))
    elapsed = time.perf_counter() - t
    ok = (same_listing and not mismatch and not errors and len(names) > 0
          and all(c == 0 for _, c in codes))
    assert record(12, "determinism", ok,
                  f"{len(match)}/{len(names)} files identical, exit codes {sorted(set(c for _, c in codes))}",
                  elapsed, 360.0, acceptance_log)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
