"""Acceptance suite: one test per release criterion, one verdict line each.

Each test prints `criterion NN: PASS/FAIL - detail` (visible with -s, or in
the captured output of a failure) and carries the stated tolerance in its
asserts, so `pytest -v` doubles as the acceptance report.  A red test here
means the criterion is genuinely not met; nothing is loosened to hide that.
"""

import time
import warnings

import numpy as np
import pytest

from qcdeform.beltrami import build_map
from qcdeform.config import RunConfig
from qcdeform.deform import DeformationProblem, solve_deformation
from qcdeform.errors import ConvergenceError
from qcdeform.extremal import FamilySpec, check_thm2_consistency, hsz_search
from qcdeform.ratfit import error_curve, fit_double_poles
from qcdeform.schwarzian import (
    a_from_b,
    covering_radius,
    invert_expansion,
    schwarzian_of,
    solve_schwarz,
)
from qcdeform.series import HoloSeries
from qcdeform.spaces import hardy, hilbert_norm
from qcdeform.transforms import Density, Disk, beurling_Pi, cauchy_T


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")


def _mobius_series(a: complex, b: complex, c: complex, d: complex, n: int) -> HoloSeries:
    # (az + b) / (cz + d) expanded at 0; needs |c/d| < 1
    geo = (-c / d) ** np.arange(n + 1) / d
    return HoloSeries(np.convolve([b, a], geo)[: n + 1].astype(complex))


def _koebe_schwarzian_series(n: int) -> HoloSeries:
    # -6 / (1 - z^2)^2 = sum_j -6 (j+1) z^(2j)
    c = np.zeros(n + 1, dtype=complex)
    c[0::2] = -6.0 * (np.arange(len(c[0::2])) + 1)
    return HoloSeries(c, radius=1.0)


# ---------------------------------------------------------------------------


def test_criterion_01_indicator_cauchy_closed_form():
    disk = Disk(0.3 + 0.1j, 1.0)
    rho = Density.constant(disk, 1.0, 48, 128)
    rng = np.random.default_rng(0)
    inner = disk.center + 0.97 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    outer = disk.center + (1.03 + 3.0 * rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    probes = np.concatenate([inner, outer])

    cauchy_T(rho, probes[:4])  # warm the kernels before timing
    t0 = time.perf_counter()
    got = np.asarray(cauchy_T(rho, probes))
    elapsed = time.perf_counter() - t0

    want = np.where(np.abs(probes - disk.center) <= disk.radius,
                    np.conj(probes) - np.conj(disk.center),
                    1.0 / (probes - disk.center))
    err = float(np.max(np.abs(got - want)))
    _verdict(1, err <= 1e-8 and elapsed < 5.0,
             f"max err {err:.2e} (tol 1e-8), 200 probes in {elapsed:.2f}s (< 5s)")
    assert err <= 1e-8
    assert elapsed < 5.0


def test_criterion_02_wirtinger_derivative_identities():
    disk = Disk(0.2 - 0.1j, 1.3)
    rng = np.random.default_rng(1)
    pts = disk.center + disk.radius * 0.85 * np.sqrt(rng.random(24)) \
        * np.exp(2j * np.pi * rng.random(24))

    def u_of(z):
        return (np.asarray(z) - disk.center) / disk.radius

    densities = {
        "lorentz": lambda z: 1.0 / (1.0 + 2.0 * np.abs(u_of(z)) ** 2),
        "branch": lambda z: np.sqrt(0.25 + np.abs(u_of(z)) ** 2) * (1 + 0.3j * u_of(z)),
        "expinv": lambda z: np.exp(-1.0 / (0.5 + np.abs(u_of(z)) ** 2)),
    }

    h = 1e-5
    details = []
    ok = True
    for name, fn in densities.items():
        errs = []
        for n_rad, n_ang in ((10, 32), (20, 64)):
            rho = Density.from_function(disk, fn, n_rad, n_ang)
            T = lambda q: np.asarray(cauchy_T(rho, q))
            re = (T(pts + h) - T(pts - h)) / (4 * h)
            im = 1j * (T(pts + 1j * h) - T(pts - 1j * h)) / (4 * h)
            e_bar = np.max(np.abs((re + im) - fn(pts)))
            e_hol = np.max(np.abs((re - im) - np.asarray(beurling_Pi(rho, pts))))
            errs.append(float(max(e_bar, e_hol)))
        ok = ok and errs[0] <= 1e-5 and errs[1] <= errs[0] / 4.0
        details.append(f"{name} {errs[0]:.1e}->{errs[1]:.1e}")
        assert errs[0] <= 1e-5
        assert errs[1] <= errs[0] / 4.0  # doubling the grid gains >= 4x
    _verdict(2, ok, "base err (tol 1e-5) -> doubled err: " + ", ".join(details))


def test_criterion_03_constant_dilatation_closed_form():
    cfg = RunConfig()
    disk = Disk(-0.3 + 0.2j, 1.4)
    rng = np.random.default_rng(7)
    inner = disk.center + disk.radius * 0.95 * np.sqrt(rng.random(50)) \
        * np.exp(2j * np.pi * rng.random(50))
    outer = disk.center + disk.radius * (1.05 + 2.0 * rng.random(50)) \
        * np.exp(2j * np.pi * rng.random(50))
    probes = np.concatenate([inner, outer])
    inside = np.abs(probes - disk.center) <= disk.radius
    chi = np.where(inside, np.conj(probes) - np.conj(disk.center),
                   disk.radius ** 2 / (probes - disk.center))

    worst_err, worst_terms = 0.0, 0
    for k in (0.01 + 0j, 0.05 * np.exp(1j * np.pi / 3), -0.1 + 0j):
        mu = Density.constant(disk, k, cfg.n_rad, cfg.n_ang)
        qc = build_map(mu, cfg)
        err = float(np.max(np.abs(qc(probes) - (probes + k * chi))))
        worst_err = max(worst_err, err)
        worst_terms = max(worst_terms, qc.n_terms)
    _verdict(3, worst_err <= 1e-7 and worst_terms <= 3,
             f"max err {worst_err:.2e} (tol 1e-7), series terms <= {worst_terms} (<= 3)")
    assert worst_err <= 1e-7
    assert worst_terms <= 3


def test_criterion_04_deformation_end_to_end():
    # stated targets: shift a_2 by 0.01 and a_3 by 0.005 while growing the
    # norm by 0.001, with the dilatation supported on Disk(3, 0.3)
    def solve(scale: float):
        problem = DeformationProblem(
            space=hardy(), f=HoloSeries([0.0, 1.0], radius=np.inf),
            disk=Disk(3.0 + 0j, 0.3), j=1, n=3,
            d=[0.01 * scale, 0.005 * scale], a=0.001 * scale)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return solve_deformation(problem)

    t0 = time.perf_counter()
    try:
        results = [solve(s) for s in (1.0, 0.5, 0.25)]
    except ConvergenceError as exc:
        _verdict(4, False, f"solver refuses the target: {exc}")
        pytest.fail(
            "targets of this size are unreachable from a support disk this far "
            f"out; the solver's own bound check reports: {exc}")
    elapsed = time.perf_counter() - t0

    res = results[0]
    cond_a = max(abs(v) for v in res.achieved_d)
    m_ests = [r.m_est for r in results]
    stable = all(abs(m - m_ests[0]) <= 0.25 * m_ests[0] for m in m_ests)
    _verdict(4, True,
             f"residuals a {cond_a:.1e} b {abs(res.achieved_a):.1e}, "
             f"{res.n_iter} steps, m stable {stable}, {elapsed:.0f}s")
    assert res.n_iter <= 15
    assert cond_a <= 1e-8
    assert abs(res.achieved_a - 0.001) <= 1e-7
    assert stable
    assert elapsed < 60.0


def test_criterion_05_schwarzian_round_trips():
    # (a) the Schwarzian annihilates fractional-linear maps
    mobius_err = 0.0
    for a, b, c, d in ((1.0, 0.5, 0.3, 1.2),
                       (0.8 - 0.2j, 0.1, -0.25, 1.0),
                       (1.2, 0.0, 0.4j, 1.1),
                       (1.0, -0.3 + 0.1j, 0.2 + 0.2j, 0.9)):
        s = schwarzian_of(_mobius_series(a, b, c, d, 40))
        mobius_err = max(mobius_err, float(np.max(np.abs(s.coeffs[:25]))))

    # (b) integrating the Koebe Schwarzian back to a_m = m
    w = solve_schwarz(_koebe_schwarzian_series(22), 20, w2=4.0 + 0j)
    koebe_err = max(abs(w.coefficient(m) - m) for m in range(1, 21))

    # (c) solve then differentiate: recovers the prescribed Schwarzian
    rng = np.random.default_rng(5)
    round_err = 0.0
    for _ in range(20):
        c = 0.05 * 0.5 ** np.arange(21) * (rng.standard_normal(21)
                                           + 1j * rng.standard_normal(21))
        target = HoloSeries(c.astype(complex))
        s_back = schwarzian_of(solve_schwarz(target, 24))
        round_err = max(round_err, float(np.max(np.abs(s_back.coeffs[:21] - target.coeffs))))

    ok = mobius_err <= 1e-12 and koebe_err <= 1e-8 and round_err <= 1e-10
    _verdict(5, ok, f"moebius {mobius_err:.1e} (1e-12), koebe {koebe_err:.1e} (1e-8), "
                    f"roundtrip {round_err:.1e} (1e-10)")
    assert mobius_err <= 1e-12
    assert koebe_err <= 1e-8
    assert round_err <= 1e-10


def test_criterion_06_inversion_identities():
    rng = np.random.default_rng(6)
    thetas = -np.pi + 2.0 * np.pi * np.arange(8) / 8 + 0.13

    b0_err = 0.0
    for _ in range(20):
        tail = 0.4 ** np.arange(2, 7) * (rng.standard_normal(5) + 1j * rng.standard_normal(5))
        for theta in thetas:
            coeffs = np.concatenate([[0.0, np.exp(-1j * theta)], tail]).astype(complex)
            F = invert_expansion(HoloSeries(coeffs))
            b0_err = max(b0_err, abs(F.coefficient(0) + np.exp(2j * theta) * coeffs[2]))

    round_err = 0.0
    for _ in range(20):
        a1 = (0.7 + 0.8 * rng.random()) * np.exp(2j * np.pi * rng.random())
        tail = 0.4 ** np.arange(2, 11) * (rng.standard_normal(9) + 1j * rng.standard_normal(9))
        f = HoloSeries(np.concatenate([[0.0, a1], tail]).astype(complex))
        g = a_from_b(invert_expansion(f))
        m = min(len(f.coeffs), len(g.coeffs))
        round_err = max(round_err, float(np.max(np.abs(g.coeffs[:m] - f.coeffs[:m]))))

    ok = b0_err <= 1e-14 and round_err <= 1e-10
    _verdict(6, ok, f"constant-term identity {b0_err:.1e} (1e-14), "
                    f"roundtrip {round_err:.1e} (1e-10)")
    assert b0_err <= 1e-14
    assert round_err <= 1e-10


def test_criterion_07_koebe_covering_radius():
    # second coefficient 2, so the sharp covering bound is 1/(2*2)
    w = HoloSeries(np.arange(32769, dtype=np.complex128), radius=1.0)
    r = covering_radius(w)
    _verdict(7, abs(r - 0.25) <= 1e-3, f"estimate {r:.7f}, |r - 1/4| = {abs(r - 0.25):.1e} (tol 1e-3)")
    assert abs(r - 0.25) <= 1e-3


def test_criterion_08_rational_fit_and_error_curve():
    t0 = time.perf_counter()
    true_angles = np.array([0.6, 2.9])
    true_strengths = np.array([1.2 - 0.3j, 0.8 + 0.5j])

    def target(z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for ang, d in zip(true_angles, true_strengths):
            out += d / (z - np.exp(1j * ang)) ** 2
        return out

    fit = fit_double_poles(target, 2, 2.0)
    order = np.argsort(np.asarray(fit.rational.angles) % (2 * np.pi))
    ang_err = float(np.max(np.abs(np.asarray(fit.rational.angles)[order] % (2 * np.pi)
                                  - true_angles)))
    str_err = float(np.max(np.abs(np.asarray(fit.rational.strengths)[order]
                                  - true_strengths)))

    koebe_s = lambda z: -6.0 / (1.0 - np.asarray(z, dtype=complex) ** 2) ** 2
    errors, _ = error_curve(koebe_s, 6, 2.0)
    drops = np.diff(errors)
    monotone = bool(np.all(drops <= 1e-12))
    elapsed = time.perf_counter() - t0

    ok = ang_err <= 1e-10 and str_err <= 1e-10 and monotone and elapsed < 120.0
    _verdict(8, ok, f"pole params {max(ang_err, str_err):.1e} (1e-10), curve "
                    f"{'monotone' if monotone else 'NOT monotone'}, {elapsed:.0f}s (< 120s)")
    assert ang_err <= 1e-10
    assert str_err <= 1e-10
    assert fit.l2_residual <= 1e-10
    assert monotone
    assert elapsed < 120.0


def test_criterion_09_search_saturates_constant_bound():
    rec = hsz_search(hardy(), 0, budget=10_000, seed=0)
    dev = abs(rec.best_value - 1.0)

    ring = np.exp(2j * np.pi * np.arange(256) / 256)
    grid = np.outer(np.linspace(0.0, 0.95, 9), ring).ravel()
    candidates = [f for _, _, f in rec.history] + [rec.best_f]
    norm_err = max(abs(hilbert_norm(hardy(), f) - 1.0) for f in candidates)
    min_mod = min(float(np.min(np.abs(f.evaluate(grid)))) for f in candidates)

    ok = dev <= 1e-6 and norm_err <= 1e-10 and min_mod > 1e-10
    _verdict(9, ok, f"best 1 {'-' if rec.best_value < 1 else '+'} {dev:.1e} (tol 1e-6), "
                    f"candidate norms off by {norm_err:.1e} (1e-10), min |f| {min_mod:.2f}")
    assert dev <= 1e-6
    assert rec.samples == 10_000
    assert norm_err <= 1e-10
    assert min_mod > 1e-10


def test_criterion_10_sampled_families_non_falsification():
    fam = FamilySpec.random_b2(size=1000, degree=10, sigma0=0.2, decay=0.5,
                               b2_bound=0.2)
    rep = check_thm2_consistency(hardy(), fam, n=2, seed=0, tol=1e-9)
    print(rep.header)  # the report states its own evidentiary limits
    violations = rep.coeff_violations
    ok = len(violations) == 0 and len(rep.rows) == 1000
    _verdict(10, ok, f"{len(rep.rows)} families, {len(violations)} coefficient-bound "
                     f"violations at 1e-9")
    for v in violations:
        print("violation:", v)  # surfaced verbatim, per the reporting contract
    assert "exploratory" in rep.header
    assert len(rep.rows) == 1000
    assert violations == ()
