"""Schwarzian derivatives, their inversion, and expansion bookkeeping at infinity.

Everything operates on truncated power series.  The Schwarzian of w is
(w''/w')' - (w''/w')^2 / 2; it is recovered by solving 2 eta'' + S eta = 0
for two independent solutions and taking their ratio, which fixes the
canonical representative with w(0) = 0, w'(0) = 1, w''(0) = 0.  Any other
solution of the same Schwarzian equation is a Moebius image of it.

For w with w(0) = 0 and w'(0) = a1 != 0, the inverted-variable expansion

    F(z) = 1 / w(1/z) = z/a1 + b0 + b1/z + b2/z^2 + ...

is carried as a series in 1/z (lowest index -1).  The constant term always
satisfies b0 = -a2 / a1^2; with a1 = exp(-i theta) on the unit circle this is
b0 = -exp(2 i theta) a2.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import SingularDivisionError
from .series import HoloSeries

__all__ = [
    "schwarzian_of",
    "solve_schwarz",
    "invert_expansion",
    "a_from_b",
    "a_leading_from_b",
    "covering_radius",
]


def schwarzian_of(w: HoloSeries) -> HoloSeries:
    """Schwarzian derivative of a series with w'(0) != 0.

    The result keeps len(w) - 3 orders; differentiation spends accuracy, so
    feed more coefficients than the orders needed downstream.
    """
    w1 = w.derivative()
    if w1.coefficient(0) == 0:
        raise SingularDivisionError("Schwarzian needs w'(0) != 0")
    g = w1.derivative() / w1
    return g.derivative() - 0.5 * g * g


def solve_schwarz(s: HoloSeries, n: int, w0: complex = 0j, w1: complex = 1.0 + 0j,
                  w2: complex = 0j) -> HoloSeries:
    """Series solution of S(w) = s with w(0) = w0, w'(0) = w1, w''(0) = w2.

    Integrates 2 eta'' + s eta = 0 for the two solutions picked out by their
    first-order data, forms the canonical ratio, then applies the Moebius map
    matching the requested jet.  Missing coefficients of s count as zero.
    """
    if w1 == 0:
        raise SingularDivisionError("w'(0) must not vanish")
    sc = np.array([s.coefficient(k) for k in range(max(n - 1, 0))], dtype=np.complex128)

    def ode_solution(e0: complex, e1: complex) -> np.ndarray:
        e = np.zeros(n + 1, dtype=np.complex128)
        e[0] = e0
        if n >= 1:
            e[1] = e1
        for m in range(n - 1):
            acc = np.dot(sc[: m + 1], e[m::-1][: m + 1])
            e[m + 2] = -acc / (2.0 * (m + 2) * (m + 1))
        return e

    eta1 = HoloSeries(ode_solution(0.0, 1.0), radius=s.radius)
    eta2 = HoloSeries(ode_solution(1.0, 0.0), radius=s.radius)
    w_can = eta1 / eta2
    # Moebius u -> w0 + w1 u / (1 - (w2 / (2 w1)) u) carries the canonical jet
    # (0, 1, 0) to (w0, w1, w2) without changing the Schwarzian.
    q = w2 / (2.0 * w1)
    denom_coeffs = np.zeros(n + 1, dtype=np.complex128)
    denom_coeffs[0] = 1.0
    denom = HoloSeries(denom_coeffs, radius=s.radius) - q * w_can
    return w0 + w1 * (w_can * denom.reciprocal())


def invert_expansion(w: HoloSeries, n_out: int | None = None) -> HoloSeries:
    """Expansion of 1/w(1/z) around infinity for w with w(0) = 0.

    Returns a series with lowest index -1: entry i is the coefficient of
    z^(1-i).  Trusted outside the unit circle.
    """
    if w.is_laurent:
        raise ValueError("w must be a Taylor series")
    if w.coefficient(0) != 0:
        raise ValueError("inversion at infinity assumes w(0) = 0")
    a1 = w.coefficient(1)
    if a1 == 0:
        raise SingularDivisionError("w'(0) = 0 leaves no z-term to invert")
    n_out = w.n_trunc - 1 if n_out is None else n_out
    # w(zeta) = a1 zeta g(zeta),  g = 1 + sum a_{m}/a1 zeta^(m-1)
    g = np.zeros(n_out + 2, dtype=np.complex128)
    g[0] = 1.0
    top = min(len(w.coeffs) - 2, n_out)
    for p in range(1, top + 1):
        g[p] = w.coefficient(p + 1) / a1
    G = HoloSeries(g, radius=1.0).reciprocal()
    return HoloSeries(G.coeffs / a1, center=0j, radius=1.0, lowest=-1)


def a_from_b(F: HoloSeries, n_out: int | None = None) -> HoloSeries:
    """Inverse of :func:`invert_expansion`: recover w with w(0) = 0 from F.

    F(1/zeta) = p(zeta)/zeta with p the stored coefficients read as a Taylor
    series, so w = zeta / p(zeta).
    """
    if not F.is_laurent:
        raise ValueError("F must be an inverted expansion (lowest index -1)")
    if F.coeffs[0] == 0:
        raise SingularDivisionError("F has no z-term; w'(0) would vanish")
    n_out = len(F.coeffs) if n_out is None else n_out
    p = HoloSeries(F.coeffs[: n_out + 1], radius=1.0)
    inv = p.reciprocal()
    coeffs = np.concatenate([[0.0 + 0j], inv.coeffs[:n_out]])
    return HoloSeries(coeffs, radius=1.0)


def a_leading_from_b(n: int, a1: complex, b0: complex, b1: complex = 0j) -> complex:
    """Leading monomials of coefficient a_n of w in terms of b0 and b1.

    From w = a1 zeta (1 + a1 b0 zeta + a1 b1 zeta^2 + ...)^{-1}: the pure-b0
    monomial plus the single-b1 correction.  Exact when all other b_j vanish
    and n <= 4; for larger n the omitted terms carry higher powers of b1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    sign = (-1.0) ** (n - 1)
    lead = sign * a1**n * b0 ** (n - 1)
    if n >= 3:
        lead -= sign * (n - 2) * a1 ** (n - 1) * b0 ** (n - 3) * b1
    elif n == 2 and b1 != 0:
        # a_2 = -a1^2 b0 exactly; b1 first enters at a_3
        pass
    return complex(lead)


def covering_radius(w: HoloSeries, n_angles: int = 1024,
                    radii: tuple = (0.995, 0.999)) -> float:
    """Radius of the largest disk around 0 inside the image of the unit disk.

    For univalent w with w(0) = 0 the image of |z| = rho shrinks onto the
    boundary circle as rho -> 1; the minimum modulus is sampled at two radii
    and extrapolated linearly in (1 - rho).
    """
    if w.is_laurent or w.coefficient(0) != 0:
        raise ValueError("covering radius assumes a Taylor series with w(0) = 0")
    r1, r2 = radii
    if not (0 < r1 < r2 < 1):
        raise ValueError("radii must satisfy 0 < r1 < r2 < 1")
    ang = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    m1 = float(np.min(np.abs(kernels.horner_many(w.coeffs, r1 * ang))))
    m2 = float(np.min(np.abs(kernels.horner_many(w.coeffs, r2 * ang))))
    # eliminate the O(1 - rho) term: weights from (1-r1)/(1-r2) = 5, 1
    lam = (1.0 - r1) / ((1.0 - r1) - (1.0 - r2))
    return lam * m2 - (lam - 1.0) * m1
