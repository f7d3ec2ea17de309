"""Coefficient and norm shifts driven through disk-supported dilatations.

The worked geometry: f = z in the Hardy space, support disk centered at 2.2
with radius 1.1, controlling coefficients 2 and 3 plus the norm.  For linear
f the first-order shift identities reduce to bare kernel pairings, which
gives an oracle independent of the solver's own assembly.
"""

import json
import warnings

import numpy as np
import pytest

from qcdeform.config import RunConfig
from qcdeform.deform import (
    DeformationProblem,
    _mu_from_x,
    build_mu0,
    linearized_init,
    solve_deformation,
)
from qcdeform.errors import ConvergenceError
from qcdeform.series import HoloSeries
from qcdeform.spaces import hardy
from qcdeform.transforms import Disk, pairing

DISK = Disk(2.2 + 0j, 1.1)
CFG = RunConfig().with_updates(
    n_rad=24, n_ang=64, m_samples=512, n_norm=128, norm_tol=2e-8)


def _linear_f() -> HoloSeries:
    return HoloSeries(np.array([0.0, 1.0], dtype=complex), radius=np.inf)


def _demo_problem(d=(0.002, 0.001), a=0.0003) -> DeformationProblem:
    return DeformationProblem(hardy(), _linear_f(), DISK, 1, 3, d, a, CFG)


def test_norm_direction_pairings():
    prob = _demo_problem()
    mu0 = build_mu0(prob)
    assert abs(pairing(mu0, (prob.c0, 1)) - 1.0) < 1e-12
    for k in prob.controlled:
        assert abs(pairing(mu0, (prob.c0, k + 1))) < 1e-12


def test_first_order_solution_satisfies_pairing_equations():
    # for f = z the order-k shift of the composed map is exactly the pairing
    # with (zeta - c0)^-(k+1), and the norm moves only through coefficient 1
    prob = _demo_problem()
    mu0 = build_mu0(prob)
    mu = _mu_from_x(prob, mu0, linearized_init(prob, mu0))
    for i, k in enumerate(prob.controlled):
        assert abs(pairing(mu, (0j, k + 1)) - prob.d[i]) < 1e-12
    assert pairing(mu, (0j, 2)).real == pytest.approx(prob.a, abs=1e-12)


def test_demo_deformation_hits_targets():
    with pytest.warns(UserWarning, match="polynomial"):
        res = solve_deformation(_demo_problem())
    assert np.max(np.abs(np.array(res.achieved_d) - np.array([0.002, 0.001]))) < 1e-8
    assert abs(res.achieved_a - 0.0003) < 2e-8
    assert res.sup_mu < 0.5
    assert res.eps == pytest.approx(0.002)
    assert res.m_est == pytest.approx(res.sup_mu / res.eps)
    assert res.residual_trace[-1] < res.residual_trace[0]
    doc = res.to_dict()
    json.dumps(doc)
    assert doc["neumann_terms"] == res.qcmap.n_terms


def test_deformation_scale_is_stable_under_target_halving():
    with pytest.warns(UserWarning, match="polynomial"):
        r1 = solve_deformation(_demo_problem())
    with pytest.warns(UserWarning, match="polynomial"):
        r2 = solve_deformation(_demo_problem(d=(0.001, 0.0005), a=0.00015))
    assert r2.eps == pytest.approx(r1.eps / 2.0)
    assert abs(r2.m_est - r1.m_est) < 0.25 * r1.m_est


def test_oversized_targets_rejected_before_iterating():
    prob = _demo_problem(d=(0.5, 0.25), a=0.1)
    with pytest.warns(UserWarning, match="polynomial"):
        with pytest.raises(ConvergenceError, match="workable bound"):
            solve_deformation(prob)


def test_problem_validation_rejects_bad_geometry():
    f = _linear_f()
    overlapping = DeformationProblem(
        hardy(), f, Disk(1.0 + 0j, 0.8), 1, 3, (0.01, 0.01), 0.0, CFG)
    with pytest.raises(ValueError, match="too close to the image"):
        overlapping.validate()
    with pytest.raises(ValueError, match="0 <= j < n"):
        DeformationProblem(hardy(), f, DISK, 3, 3, (), 0.0, CFG).validate()
    with pytest.raises(ValueError, match="shifts"):
        DeformationProblem(hardy(), f, DISK, 1, 3, (0.01,), 0.0, CFG).validate()
    small = HoloSeries(np.array([0.0, 1.0], dtype=complex), radius=0.8)
    with pytest.raises(ValueError, match="converge"):
        DeformationProblem(
            hardy(), small, DISK, 1, 3, (0.01, 0.01), 0.0, CFG).validate()


def test_polynomial_f_warns_and_tailed_f_does_not():
    prob = _demo_problem()
    with pytest.warns(UserWarning, match="polynomial"):
        prob.validate()
    coeffs = np.zeros(6, dtype=complex)
    coeffs[1], coeffs[5] = 1.0, 0.01
    tailed = HoloSeries(coeffs, radius=np.inf)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        DeformationProblem(
            hardy(), tailed, DISK, 1, 3, (0.001, 0.001), 1e-4, CFG).validate()
