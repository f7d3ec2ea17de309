"""Coefficient-weight spaces, growth norms, and the embedding scan."""

import numpy as np
import pytest

from qcdeform.series import HoloSeries
from qcdeform.spaces import (
    SpaceSpec,
    bergman,
    bp_norm,
    dirichlet,
    estimate_embedding_constant,
    from_radial_measure,
    hardy,
    hilbert_inner,
    hilbert_norm,
    monomial_bp_sup,
)


def test_builtin_weight_sequences():
    assert np.allclose(hardy().weights(5), np.ones(5))
    assert np.allclose(bergman().weights(5), 1.0 / np.arange(1, 6))
    assert np.allclose(dirichlet().weights(5), [1, 1, 2, 3, 4])


def test_radial_measure_reproduces_bergman():
    # Lebesgue area measure on the disk, normalized: w_k = 1/(k+1)
    space = from_radial_measure(lambda t: np.ones_like(t) / np.pi)
    got = space.weights(7)
    assert np.allclose(got, 1.0 / np.arange(1, 8), rtol=1e-12)


def test_radial_measure_moments_against_closed_form():
    # W(t) = t^2 / pi gives w_k = 2 int t^(2k+3) dt = 2 / (2k + 4)
    space = from_radial_measure(lambda t: t**2 / np.pi)
    k = np.arange(5)
    assert np.allclose(space.weights(5), 2.0 / (2 * k + 4), rtol=1e-12)


def test_hilbert_norm_hardy_is_coefficient_l2():
    f = HoloSeries(np.array([3.0, 4.0], dtype=complex))
    assert hilbert_norm(hardy(), f) == pytest.approx(5.0)


def test_hilbert_inner_conjugates_second_argument():
    f = HoloSeries(np.array([1.0, 2.0j], dtype=complex))
    g = HoloSeries(np.array([1.0j, 1.0], dtype=complex))
    # hardy: sum f_k conj(g_k) = 1*(-1j) + 2j*1 = 1j
    assert hilbert_inner(hardy(), f, g) == pytest.approx(1j)


def test_weights_validation():
    with pytest.raises(ValueError):
        SpaceSpec("bad", lambda k: np.zeros_like(k, dtype=float)).weights(3)


def test_monomial_bp_sup_closed_form():
    # sup over [0,1) of (1-t^2)^p t^n sits at t^2 = n/(n+2p)
    for n, p in [(1, 2.0), (4, 2.0), (3, 1.0), (7, 3.5)]:
        val, arg = monomial_bp_sup(n, p)
        t = np.linspace(0, 0.999999, 200001)
        scan = (1 - t**2) ** p * t**n
        assert val == pytest.approx(scan.max(), rel=1e-8)
        assert arg == pytest.approx(np.sqrt(n / (n + 2 * p)), abs=1e-9)


def test_bp_norm_matches_monomial_formula():
    for n in (2, 5):
        f = HoloSeries(np.concatenate([np.zeros(n), [1.0]]) + 0j)
        want, _ = monomial_bp_sup(n, 2.0)
        assert bp_norm(f, 2.0, tol=1e-9, max_level=7) == pytest.approx(want, rel=1e-6)


def test_bp_norm_of_constant():
    f = HoloSeries(np.array([2.0], dtype=complex))
    assert bp_norm(f, 2.0) == pytest.approx(2.0, rel=1e-9)


def test_bp_norm_accepts_callables():
    got = bp_norm(lambda z: np.asarray(z) ** 3, 2.0, tol=1e-9, max_level=7)
    want, _ = monomial_bp_sup(3, 2.0)
    assert got == pytest.approx(want, rel=1e-6)


def test_bp_norm_warns_when_tail_dominates():
    # slowly decaying coefficients keep the trusted radius away from 1
    f = HoloSeries(0.999 ** np.arange(12) + 0j, radius=1.0 / 0.999)
    with pytest.warns(UserWarning):
        bp_norm(f, 2.0, max_level=2)


def test_embedding_constant_scan():
    best, argmax = estimate_embedding_constant(hardy(), 2.0, n_max=100)
    # ratio of monomial growth sup to unit hardy norm, maximized over degree
    vals = [monomial_bp_sup(n, 2.0)[0] for n in range(101)]
    assert best == pytest.approx(max(vals), rel=1e-12)
    assert vals[argmax] == pytest.approx(best, rel=1e-12)
