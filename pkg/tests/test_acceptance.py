"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Run on its own with ``pytest tests/test_acceptance.py``.
"""

import math
import subprocess
import sys
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from symtrace.duality import norming_functionals
from symtrace.hyperoctahedral import (
    ExactMatrix,
    SignedPermutation,
    apply,
    conjugation_constant,
    conjugation_sum,
    group_average_numerical_value,
)
from symtrace.lab import TraceExperimentConfig, ellipse_average, estimate_trace, estimate_trace_euclidean
from symtrace.measure import perimeter_2d, surface_area
from symtrace.norms import NormSpec, dual_norm_eval, norm_eval


def theorem_families(dim):
    return [
        NormSpec.euclidean(dim),
        NormSpec.lp(1.5, dim),
        NormSpec.lp(3, dim),
        NormSpec.l1(dim),
        NormSpec.linf(dim),
        NormSpec.top_k(2, dim),
    ]


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


def test_criterion_1_exact_group_identity():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    mismatches = 0
    for n in range(1, 6):
        for _ in range(20):
            a = ExactMatrix.from_rows(rng.integers(-9, 10, size=(n, n)).tolist())
            if conjugation_sum(a) != ExactMatrix.scalar(conjugation_constant(a), n):
                mismatches += 1
    elapsed = time.perf_counter() - start
    record(1, mismatches == 0 and elapsed < 5.0, f"conjugation sum exact for N=1..5 x 20, {mismatches} mismatches, {elapsed:.2f}s")


def test_criterion_2_pointwise_theorem_witness():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    worst = 0.0
    for n in (2, 3, 4):
        for spec in theorem_families(n):
            for _ in range(50):
                A = rng.standard_normal((n, n))
                x = rng.standard_normal(n)
                x /= norm_eval(spec, x)
                t = np.trace(A) / n
                worst = max(worst, abs(group_average_numerical_value(spec, A, x) - t) / abs(t))
    elapsed = time.perf_counter() - start
    record(2, worst <= 1e-10 and elapsed < 30.0, f"orbit average = tr A / N, worst relative error {worst:.2e}, {elapsed:.2f}s")


def test_criterion_3_monte_carlo_trace_formula():
    rng = np.random.default_rng(3)
    worst_z = 0.0
    worst_se = 0.0
    failures = []
    start = time.perf_counter()
    for n in range(2, 7):
        for spec in theorem_families(n):
            A = rng.uniform(-1.0, 1.0, (n, n))
            r = estimate_trace(TraceExperimentConfig(spec, A, n_samples=10**6, seed=1000 + n))
            z = abs(r.estimate - np.trace(A)) / r.stderr
            worst_z = max(worst_z, z)
            worst_se = max(worst_se, r.stderr)
            if z > 4 or r.stderr > 0.05:
                failures.append(f"{spec}: z={z:.2f}, stderr={r.stderr:.3g}")
    elapsed = time.perf_counter() - start
    record(
        3,
        not failures,
        f"Monte Carlo tr A over 6 families x N=2..6 at 1e6 samples, max |err|/stderr {worst_z:.2f}, "
        f"max stderr {worst_se:.4f}, {elapsed:.1f}s {failures}",
    )


def test_criterion_4_euclidean_folklore():
    rng = np.random.default_rng(4)
    A = rng.uniform(-1.0, 1.0, (5, 5))
    r = estimate_trace_euclidean(A, 10**6, seed=4)
    z = abs(r.estimate - np.trace(A)) / r.stderr
    record(4, z <= 4 and r.stderr <= 0.05, f"Euclidean <Ax, x> estimator, N=5: |err|/stderr {z:.2f}, stderr {r.stderr:.4f}")


def test_criterion_5_ellipse_counterexample():
    one = ellipse_average(1.0, tol=1e-10)
    zero = ellipse_average(0.0, tol=1e-8)
    tenth = ellipse_average(0.1, tol=1e-10)
    ok = abs(one - 0.5) <= 1e-10 and abs(zero - 1 / 3) <= 1e-8 and abs(tenth - 0.5) > 0.01
    record(5, ok, f"ellipse averages b=1: {one:.6f}, b=0: {zero:.6f}, b=0.1: {tenth:.6f}")


def test_criterion_6_pushforward_weight_oracle():
    cases = [
        (NormSpec.euclidean(2), 2 * math.pi),
        (NormSpec.l1(2), 4 * math.sqrt(2)),
        (NormSpec.linf(2), 8.0),
    ]
    worst = max(abs(perimeter_2d(spec, tol=1e-10) - expected) for spec, expected in cases)
    r = surface_area(NormSpec.l1(3), 10**6, seed=6)
    z = abs(r.estimate - 4 * math.sqrt(3)) / r.stderr
    record(6, worst <= 1e-8 and z <= 4, f"2-D perimeters max error {worst:.1e}; l1 dim-3 area {r.estimate:.5f} vs {4 * math.sqrt(3):.5f}, z={z:.2f}")


def test_criterion_7_duality_invariants():
    rng = np.random.default_rng(7)
    worst_pair = worst_dual = worst_eq = 0.0
    for n in range(2, 7):
        specs = theorem_families(n) + [NormSpec.weighted_l2(rng.uniform(0.2, 3.0, n))]
        for spec in specs:
            X = rng.standard_normal((10**4, n))
            F, margins = norming_functionals(spec, X)
            assert np.all(margins > 0)
            rho = norm_eval(spec, X)
            worst_pair = max(worst_pair, np.max(np.abs(np.einsum("ij,ij->i", F, X) - rho) / rho))
            worst_dual = max(worst_dual, np.max(np.abs(dual_norm_eval(spec, F) - 1.0)))
            if not spec.one_symmetric:
                continue
            for x in X[:1000]:
                q = SignedPermutation.random(n, rng)
                fqx, _ = norming_functionals(spec, apply(q, x))
                fx, _ = norming_functionals(spec, x)
                worst_eq = max(worst_eq, np.max(np.abs(fqx[0] - apply(q, fx[0]))))
    ok = worst_pair <= 1e-11 and worst_dual <= 1e-11 and worst_eq <= 1e-12
    record(7, ok, f"pairing {worst_pair:.1e}, dual norm {worst_dual:.1e}, equivariance {worst_eq:.1e}")


def test_criterion_8_identity_matrix_exactness():
    bad = []
    for n in (2, 3, 5):
        specs = theorem_families(n) + [NormSpec.weighted_l2(np.linspace(1.0, 0.3, n))]
        for spec in specs:
            r = estimate_trace(TraceExperimentConfig(spec, np.eye(n), n_samples=10**5, seed=8))
            if not (r.estimate == n and r.stderr == 0.0):
                bad.append(f"{spec}: {r.estimate!r} +- {r.stderr!r}")
    record(8, not bad, f"estimate_trace(I_N) == N with stderr 0 for all families incl. weighted_l2 {bad}")


def _run_cli(args, cwd):
    proc = subprocess.run([sys.executable, "-m", "symtrace", *args], cwd=cwd, capture_output=True)
    return proc.returncode, proc.stdout


def test_criterion_9_cli_determinism(tmp_path):
    (tmp_path / "a.json").write_text('{"n": 3, "rows": [[0.5, -1, 2], [0, 1.5, 0.25], [1, 1, -0.75]]}')
    commands = {
        "trace_mc": ["trace-estimate", "--norm", "lp:3:3", "--matrix", "a.json", "--samples", "200000", "--seed", "9", "--out", "{out}.json"],
        "trace_group": ["trace-estimate", "--norm", "topk:2:3", "--matrix", "a.json", "--samples", "10", "--seed", "9", "--method", "groupaverage", "--out", "{out}.json"],
        "ellipse": ["ellipse", "--b", "0,0.1,0.25,0.5,1", "--out", "{out}.csv"],
        "convergence": ["convergence", "--norm", "l1:3", "--matrix", "a.json", "--schedule", "1000,10000,100000", "--seed", "9", "--out", "{out}.csv"],
        "group_verify": ["group-verify", "--dim", "4", "--trials", "5"],
    }
    differing = []
    for name, cmd in commands.items():
        outputs = []
        for run in ("a", "b"):
            args = [c.replace("{out}", f"{name}_{run}") for c in cmd]
            rc, stdout = _run_cli(args, tmp_path)
            assert rc == 0, (name, stdout)
            files = sorted(tmp_path.glob(f"{name}_{run}.*"))
            outputs.append(stdout + b"".join(f.read_bytes() for f in files))
        if outputs[0] != outputs[1]:
            differing.append(name)
    record(9, not differing, f"5 CLI invocations byte-identical across repeated runs {differing}")
