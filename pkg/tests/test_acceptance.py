"""Acceptance criteria, each at its stated tolerance.

Every check records a PASS/FAIL line; the lines are printed once per
criterion in the pytest terminal summary (or directly when this file is run
as a script).
"""
import os
import subprocess
import sys
import time
import warnings
from collections import defaultdict

import numpy as np
import pytest

from cardrec.approximand import (
    approximand_from_samples,
    approximand_spectral,
    convergence_sweep,
    evaluate_approximand_time,
    holder_constant,
)
from cardrec.bessel import bessel_k
from cardrec.families import (
    SmallAlphaWarning,
    gaussian,
    m_bound,
    m_ratio,
    multiquadric,
    polyharmonic,
)
from cardrec.fundamental import fundamental_spatial, fundamental_spectrum, periodized_denominator
from cardrec.modulation import (
    STANDARD_TEST_FUNCTION,
    Profile,
    evaluate,
    make_test_function,
    sample_block,
)
from cardrec.spectral import cube_indices, lattice_points, make_grid

PI = np.pi
GRID = make_grid(1, 256)
W = 3
GAUSS_ALPHAS = (0.25, 0.5, 1, 2, 4, 8)
POLY_KS = (1, 2, 3, 4, 5, 6)
MQ_CS = (1, 2, 4)
NORMS = (1.0, 2.0, np.inf)

RESULTS = defaultdict(list)
TITLES = {
    1: "hat-function oracle",
    2: "partition of unity",
    3: "cardinality",
    4: "closed-form periodization",
    5: "R2 certificates",
    6: "leakage decay",
    7: "approximand error decay and a-priori bound",
    8: "dual-path equivalence",
    9: "lattice interpolation",
    10: "pointwise bound",
    11: "Bessel layer",
    12: "determinism",
}


def record(crit, ok, detail):
    RESULTS[crit].append((bool(ok), detail))
    assert ok, f"criterion {crit}: {detail}"


def summary_lines():
    lines = []
    for crit in sorted(RESULTS):
        parts = RESULTS[crit]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        detail = "; ".join(("" if ok else "FAILED ") + d for ok, d in parts)
        lines.append(f"criterion {crit:2d} [{status}] {TITLES[crit]}: {detail}")
    return lines


def gaussians():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallAlphaWarning)
        return [gaussian(a) for a in GAUSS_ALPHAS]


def sweeps():
    return {
        "gaussian": gaussians(),
        "polyharmonic": [polyharmonic(k) for k in POLY_KS],
        "multiquadric": [multiquadric(c, 0.5) for c in MQ_CS],
    }


def matrix():
    return [fam for fams in sweeps().values() for fam in fams]


@pytest.fixture(scope="module")
def spectra():
    return {(fam.kind, fam.parameter): fundamental_spectrum(fam, GRID, W) for fam in matrix()}


@pytest.fixture(scope="module")
def sweep_reports():
    return {kind: convergence_sweep(fams, STANDARD_TEST_FUNCTION, GRID, W)
            for kind, fams in sweeps().items()}


def strictly_decreasing(vals):
    return all(b < a for a, b in zip(vals, vals[1:]))


# 1
def test_1_hat_oracle():
    start = time.perf_counter()
    F = fundamental_spectrum(polyharmonic(1), GRID, W, corrected=True)
    x = np.linspace(-3, 3, 121)[:, None]
    err = float(np.abs(fundamental_spatial(F, x) - np.maximum(0, 1 - np.abs(x[:, 0]))).max())
    elapsed = time.perf_counter() - start
    record(1, err <= 1e-5, f"max error {err:.2e} (<= 1e-5)")
    record(1, elapsed < 5.0, f"runtime {elapsed:.2f} s (< 5 s)")


# 2
def test_2_partition_of_unity(spectra):
    worst = max(float(np.abs(F.row_sums() - 1).max()) - F.tail_certificate for F in spectra.values())
    record(2, worst <= 1e-12, f"max(dev - certificate) {worst:.2e} (<= 1e-12) over {len(spectra)} runs")
    gcert = max(F.tail_certificate for (kind, _), F in spectra.items() if kind == "gaussian")
    record(2, gcert < 1e-15, f"gaussian certificate {gcert:.2e} (< 1e-15)")


# 3
def test_3_cardinality(spectra):
    m = cube_indices(5, 1).astype(float)
    delta = (m[:, 0] == 0).astype(float)
    for kind, tol in (("gaussian", 1e-6), ("polyharmonic", 1e-5), ("multiquadric", 1e-5)):
        worst = max(float(np.abs(fundamental_spatial(F, m) - delta).max())
                    for (k, _), F in spectra.items() if k == kind)
        record(3, worst <= tol, f"{kind} {worst:.2e} (<= {tol:g})")


# 4
def test_4_closed_form_periodization(spectra):
    F = spectra[("polyharmonic", 1)]
    xi = GRID.axis[GRID.axis != 0]
    got = periodized_denominator(polyharmonic(1), xi[:, None], F.truncation_radius)
    ref = 1 / (4 * np.sin(xi / 2) ** 2)
    rel = float(np.abs(got / ref - 1).max())
    record(4, rel <= 1e-8, f"max relative error {rel:.2e} (<= 1e-8)")
    at_pi = float(periodized_denominator(polyharmonic(1), PI, F.truncation_radius))
    record(4, abs(at_pi - 0.25) <= 1e-8 * 0.25, f"value at pi {at_pi!r} (1/4)")


# 5
def test_5_r2_certificates():
    shifts = lattice_points(10, 1, exclude_origin=True)
    violations = 0
    for fam in matrix():
        for j in shifts:
            if np.max(m_ratio(fam, j, GRID.nodes)) > m_bound(fam, j) * (1 + 1e-12):
                violations += 1
    record(5, violations == 0, f"{violations} violations over {len(matrix())} families x 20 shifts")
    worst = 0.0
    alpha_min = min(GAUSS_ALPHAS)
    for j in shifts[:, 0]:
        ref = np.exp(-4 * PI ** 2 * alpha_min * (j * j - abs(j)))
        got = m_bound(gaussian(1), j, parameter_min=alpha_min)
        worst = max(worst, abs(got - ref) / ref if ref > 0 else abs(got))
        for k in POLY_KS:
            ref = (2 * abs(j) - 1.0) ** (-2 * k)
            worst = max(worst, abs(m_bound(polyharmonic(k), j) - ref) / ref)
    record(5, worst <= 1e-12, f"closed-form bound mismatch {worst:.2e} (<= 1e-12)")


# 6
@pytest.mark.parametrize("kind", ["gaussian", "polyharmonic"])
def test_6_leakage_monotone(sweep_reports, kind):
    leak = [r.leakage_l1 for r in sweep_reports[kind]]
    record(6, strictly_decreasing(leak), f"{kind} leakage strictly decreasing")


@pytest.mark.parametrize("kind", ["gaussian", "polyharmonic"])
def test_6_leakage_ratio(sweep_reports, kind):
    leak = [r.leakage_l1 for r in sweep_reports[kind]]
    ratio = leak[-1] / leak[0]
    record(6, ratio < 0.01, f"{kind} final/initial {ratio:.3g} (< 0.01)")


# 7
@pytest.mark.parametrize("kind", ["gaussian", "polyharmonic", "multiquadric"])
def test_7_error_decay(sweep_reports, kind):
    reps = sweep_reports[kind]
    for p in NORMS:
        vals = [r.fw_errors[p] for r in reps]
        record(7, strictly_decreasing(vals), f"{kind} fw_{p:g} strictly decreasing")


def test_7_gaussian_final_sup_error(sweep_reports):
    final = sweep_reports["gaussian"][-1].fw_errors[np.inf]
    record(7, final < 1e-12, f"gaussian final fw_inf {final:.3g} (< 1e-12)")


def test_7_a_priori_bound(sweep_reports):
    failed = [(kind, r.parameter, b.name) for kind, reps in sweep_reports.items() for r in reps
              for b in r.bound_checks if b.name.startswith("apriori_bound") and not b.passed]
    runs = sum(len(v) for v in sweep_reports.values())
    record(7, not failed, f"a-priori bound holds on {runs} runs x 3 norms" if not failed
           else f"a-priori bound violated: {failed}")


# 8
def test_8_dual_path(spectra):
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for fam_key in (("gaussian", 1), ("polyharmonic", 2), ("multiquadric", 2)):
        F = spectra[fam_key]
        for degree in range(0, 9):
            spec = [Profile((k,), "cosine", coeffs=tuple(rng.uniform(-1, 1, degree + 1)))
                    for k in (-1, 0, 2)]
            f = make_test_function(spec, GRID)
            samples = {k: sample_block(f, k, 8) for k in f.support}
            a = approximand_spectral(f, F)
            b = approximand_from_samples(samples, F)
            for k in a.support:
                worst = max(worst, float(np.abs(a.block(k).values - b.block(k).values).max()))
    record(8, worst <= 1e-10, f"max blockwise difference {worst:.2e} (<= 1e-10), degrees 0..8")


# 9
def test_9_lattice_interpolation(sweep_reports, spectra):
    worst = max(r.interp_residual for r in sweep_reports["gaussian"])
    record(9, worst <= 1e-8, f"spectral route max |J(m) - f(m)| {worst:.2e} (<= 1e-8)")
    f = make_test_function(STANDARD_TEST_FUNCTION, GRID)
    samples = {k: sample_block(f, k, 8) for k in f.support}
    m = cube_indices(4, 1).astype(float)
    worst = max(float(np.abs(evaluate_approximand_time(samples, F, m) - evaluate(f, m)).max())
                for (kind, _), F in spectra.items() if kind == "gaussian")
    record(9, worst <= 1e-8, f"sampling series max |J(m) - f(m)| {worst:.2e} (<= 1e-8)")


# 10
def test_10_pointwise_bound(sweep_reports):
    worst = -np.inf
    for reps in sweep_reports.values():
        for r in reps:
            for p in NORMS:
                worst = max(worst, r.pointwise_sup - holder_constant(1, p) * r.fw_errors[p] - 1e-9)
    record(10, worst <= 0, f"1-D matrix: max(lhs - rhs) {worst:.3g} (<= 0)")
    grid2 = make_grid(2, 32)
    spec2 = [Profile((0, 0), "constant", a=1.0), Profile((1, 0), "constant", a=0.5),
             Profile((0, -1), "cosine", coeffs=(0.0, 1.0))]
    reps = convergence_sweep([gaussian(1, 2), gaussian(4, 2)], spec2, grid2, W)
    worst2 = max(r.pointwise_sup - holder_constant(2, p) * r.fw_errors[p] - 1e-9
                 for r in reps for p in NORMS)
    record(10, worst2 <= 0, f"2-D N=32 gaussian alpha in {{1, 4}}: max(lhs - rhs) {worst2:.3g} (<= 0)")


# 11
def test_11_bessel():
    xs = np.array([0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0])
    base = np.sqrt(PI / (2 * xs)) * np.exp(-xs)
    e1 = float(np.abs(bessel_k(0.5, xs) / base - 1).max())
    e2 = float(np.abs(bessel_k(1.5, xs) / (base * (1 + 1 / xs)) - 1).max())
    record(11, max(e1, e2) <= 1e-12, f"closed forms K_1/2 {e1:.1e}, K_3/2 {e2:.1e} (<= 1e-12)")
    worst = 0.0
    for nu in (1.0, 1.5, 2.0, 2.5):
        for x in (0.5, 1.0, 2.0, 5.0):
            rhs = 2 * nu / x * bessel_k(nu, x)
            worst = max(worst, abs(bessel_k(nu + 1, x) - bessel_k(nu - 1, x) - rhs) / rhs)
    record(11, worst < 1e-8, f"recurrence residual {worst:.1e} (< 1e-8)")


# 12
def test_12_determinism(tmp_path):
    outputs = []
    for threads in ("1", "4", "1", "4"):
        out = tmp_path / f"sweep_{len(outputs)}.csv"
        env = dict(os.environ, CARDREC_THREADS=threads)
        proc = subprocess.run(
            [sys.executable, "-m", "cardrec", "sweep", "--family", "gaussian",
             "--params", ",".join(str(a) for a in GAUSS_ALPHAS), "--allow-small-alpha",
             "--out", str(out)], env=env, capture_output=True, text=True)
        assert proc.returncode in (0, 1), proc.stderr
        outputs.append(out.read_bytes())
    same = all(o == outputs[0] for o in outputs)
    record(12, same, f"4 runs (threads 1, 4, 1, 4) byte-identical: {same}")


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
