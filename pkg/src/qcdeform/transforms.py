"""Area-integral transforms of densities supported on a disk.

The Cauchy transform used throughout is

    T rho (w) = -(1/pi) integral of rho(zeta) / (zeta - w) over the disk,

and the Beurling transform is its w-derivative, a principal-value integral
with kernel 1/(zeta - w)^2.  Both are entire-grid weighted sums outside the
support; inside, the singularity is removed by subtracting rho(w), which for
the Cauchy kernel leaves the indicator's closed form

    T chi (w) = conj(w) - conj(center)        for w in the disk,
    T chi (w) = radius^2 / (w - center)       for w outside,

and for the Beurling kernel contributes nothing (the indicator's transform
vanishes inside).  The subtracted remainder is integrated on a polar grid
re-centered at the evaluation point, where the integrand is smooth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .config import DEFAULT_CONFIG
from .errors import SingularKernelError
from .quadrature import (
    PolarGrid,
    barycentric_matrix,
    gauss_legendre_01,
    polar_grid,
    upsample_angular,
)

__all__ = [
    "Disk",
    "Density",
    "pairing",
    "cauchy_chi",
    "cauchy_T",
    "asymptotic_T",
    "beurling_Pi",
]

# exterior points closer to the support than this factor of the radius get the
# upsampled grid; beyond it the plain grid sum is already spectrally accurate
_NEAR_FACTOR = 1.25
_FINE_RAD = 2
_FINE_ANG = 8


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")
        object.__setattr__(self, "center", complex(self.center))

    def contains(self, z, margin: float = 0.0):
        return np.abs(np.asarray(z) - self.center) < self.radius - margin

    def gap_to(self, other_center: complex, other_radius: float) -> float:
        """Distance between this disk and the closed disk (center, radius)."""
        return abs(self.center - other_center) - self.radius - other_radius


def _terms_fn(terms) -> Callable:
    def fn(z):
        z = np.asarray(z, dtype=np.complex128)
        acc = np.zeros(z.shape, dtype=np.complex128)
        for coeff, pole, k in terms:
            if k == 0:
                acc = acc + coeff
            else:
                acc = acc + coeff * np.conj((z - pole) ** (-k))
        return acc

    return fn


@dataclass(eq=False)
class Density:
    """A bounded measurable coefficient on a disk.

    ``values`` always holds samples on the disk's quadrature grid; ``fn``
    is an optional everywhere-evaluator.  Densities built from conjugated
    pole terms carry both, and additions keep whichever structure survives.
    """

    disk: Disk
    grid: PolarGrid
    values: np.ndarray
    fn: Callable | None = None
    terms: tuple | None = None  # ((coeff, pole, k), ...) meaning coeff * conj((z-pole)^-k)
    _fine: tuple | None = field(default=None, repr=False)
    _interp: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.size,):
            raise ValueError("values must be flat samples on the density's grid")
        if self.fn is not None and self.terms is not None:
            probe = self.fn(self.grid.nodes[:: max(1, self.grid.size // 64)])
            ref = _terms_fn(self.terms)(self.grid.nodes[:: max(1, self.grid.size // 64)])
            scale = max(1.0, float(np.max(np.abs(ref))))
            if np.max(np.abs(probe - ref)) > 1e-10 * scale:
                raise ValueError("fn and terms disagree on the grid")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_terms(disk: Disk, terms: Sequence, n_rad: int | None = None,
                   n_ang: int | None = None) -> "Density":
        grid = polar_grid(disk.center, disk.radius,
                          n_rad or DEFAULT_CONFIG.n_rad, n_ang or DEFAULT_CONFIG.n_ang)
        terms = tuple((complex(c), complex(p), int(k)) for c, p, k in terms)
        for _, pole, k in terms:
            if k > 0 and abs(pole - disk.center) <= disk.radius * (1 + 1e-12):
                raise SingularKernelError("pole of a basis term touches the support disk")
        fn = _terms_fn(terms)
        return Density(disk, grid, fn(grid.nodes), fn, terms)

    @staticmethod
    def from_function(disk: Disk, fn: Callable, n_rad: int | None = None,
                      n_ang: int | None = None) -> "Density":
        grid = polar_grid(disk.center, disk.radius,
                          n_rad or DEFAULT_CONFIG.n_rad, n_ang or DEFAULT_CONFIG.n_ang)
        return Density(disk, grid, np.asarray(fn(grid.nodes), dtype=np.complex128), fn)

    @staticmethod
    def from_grid(disk: Disk, values: np.ndarray, grid: PolarGrid) -> "Density":
        return Density(disk, grid, values)

    @staticmethod
    def constant(disk: Disk, value: complex, n_rad: int | None = None,
                 n_ang: int | None = None) -> "Density":
        return Density.from_terms(disk, [(complex(value), 0j, 0)], n_rad, n_ang)

    # -- algebra --------------------------------------------------------------

    def _compatible(self, other: "Density"):
        if (self.disk != other.disk or self.grid.n_rad != other.grid.n_rad
                or self.grid.n_ang != other.grid.n_ang):
            raise ValueError("densities live on different grids")

    def __add__(self, other: "Density") -> "Density":
        self._compatible(other)
        terms = None
        fn = None
        if self.terms is not None and other.terms is not None:
            terms = self.terms + other.terms
            fn = _terms_fn(terms)
        elif self.fn is not None and other.fn is not None:
            a, b = self.fn, other.fn
            fn = lambda z: a(z) + b(z)
        return Density(self.disk, self.grid, self.values + other.values, fn, terms)

    def __mul__(self, scalar) -> "Density":
        s = complex(scalar)
        terms = tuple((c * s, p, k) for c, p, k in self.terms) if self.terms is not None else None
        fn = None
        if terms is not None:
            fn = _terms_fn(terms)
        elif self.fn is not None:
            g = self.fn
            fn = lambda z: s * g(z)
        return Density(self.disk, self.grid, self.values * s, fn, terms)

    __rmul__ = __mul__

    @property
    def sup(self) -> float:
        """Sup-norm surrogate: the max over the quadrature grid."""
        return float(np.max(np.abs(self.values)))

    # -- point evaluation ------------------------------------------------------

    def eval_points(self, z) -> np.ndarray:
        """Values at arbitrary points of the closed disk.

        Uses the exact evaluator when one is attached, otherwise trigonometric
        interpolation in the angle and barycentric polynomial interpolation in
        the radius of the stored grid samples.
        """
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        if self.fn is not None:
            return np.asarray(self.fn(z), dtype=np.complex128)
        if self._interp is None:
            modes = np.fft.fft(self.grid.values_matrix(self.values), axis=1) / self.grid.n_ang
            freqs = np.fft.fftfreq(self.grid.n_ang, d=1.0 / self.grid.n_ang)
            # drop angular modes below relative noise; smooth densities keep few
            peak = np.abs(modes).max(axis=0)
            keep = peak > 1e-14 * max(peak.max(), 1e-300)
            object.__setattr__(self, "_interp", (np.ascontiguousarray(modes[:, keep]),
                                                 freqs[keep]))
        modes, freqs = self._interp
        u = z - self.disk.center
        t = np.abs(u)
        psi = np.angle(u)
        B = barycentric_matrix(self.grid.t, t)          # (P, n_rad)
        radial = B @ modes                              # (P, n_ang) per-mode values
        phase = np.exp(1j * np.outer(psi, freqs))       # (P, n_ang)
        return (radial * phase).sum(axis=1)

    def fine_sum_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Upsampled (nodes, weights, values) for near-boundary exterior sums."""
        if self._fine is None:
            g = self.grid
            fine = polar_grid(g.center, g.radius, g.n_rad * _FINE_RAD, g.n_ang * _FINE_ANG)
            B = barycentric_matrix(g.t, fine.t)
            vals = B @ self.grid.values_matrix(self.values)       # (fine n_rad, n_ang)
            vals = upsample_angular(vals, _FINE_ANG)
            object.__setattr__(self, "_fine", (fine.nodes, fine.weights,
                                               np.ascontiguousarray(vals.ravel())))
        return self._fine


# ---------------------------------------------------------------------------
# pairings and transforms


def pairing(nu: Density, phi) -> complex:
    """Area pairing <nu, phi> = -(1/pi) * integral of nu * phi over the disk.

    phi is either a callable or a pair (pole, k) meaning 1/(z - pole)^k; the
    pole must stay off the closed support disk.
    """
    if callable(phi):
        vals = np.asarray(phi(nu.grid.nodes), dtype=np.complex128)
    else:
        pole, k = phi
        if abs(complex(pole) - nu.disk.center) <= nu.disk.radius * (1 + 1e-12):
            raise SingularKernelError("pairing kernel pole touches the support disk")
        vals = (nu.grid.nodes - complex(pole)) ** (-int(k))
    return complex(-(1.0 / np.pi) * np.sum(nu.grid.weights * nu.values * vals))


def cauchy_chi(disk: Disk, w) -> np.ndarray:
    """Closed-form Cauchy transform of the disk indicator."""
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    u = w - disk.center
    inside = np.abs(u) < disk.radius
    out = np.empty(w.shape, dtype=np.complex128)
    out[inside] = np.conj(u[inside])
    u_out = u[~inside]
    out[~inside] = disk.radius**2 / u_out
    return out


def _spider(rho: Density, targets: np.ndarray, kind: str,
            n_rad: int | None = None, n_ang: int | None = None) -> np.ndarray:
    """Singularity-removed integral over the disk on target-centered polar rays.

    kind "cauchy":   integral of (rho(z)-rho(w))/(z-w)   dA
    kind "beurling": integral of (rho(z)-rho(w))/(z-w)^2 dA
    Both integrands are bounded after the polar change of variables.
    """
    disk = rho.disk
    n_rad = n_rad or rho.grid.n_rad
    n_ang = n_ang or rho.grid.n_ang
    x, gw = gauss_legendre_01(n_rad)
    phis = 2.0 * np.pi * np.arange(n_ang) / n_ang
    e = np.exp(1j * phis)
    rho_w = rho.eval_points(targets)
    out = np.empty(len(targets), dtype=np.complex128)
    for i, w in enumerate(targets):
        v = w - disk.center
        b = np.real(np.conj(v) * e)
        S = -b + np.sqrt(b * b + disk.radius**2 - abs(v) ** 2)
        s = S[None, :] * x[:, None]                     # (n_rad, n_ang)
        zeta = w + s * e[None, :]
        dv = rho.eval_points(zeta.ravel()).reshape(s.shape) - rho_w[i]
        if kind == "cauchy":
            integrand = dv * np.conj(e)[None, :]
        else:
            integrand = dv / s * (np.conj(e) ** 2)[None, :]
        radial = gw @ integrand                          # length n_ang
        out[i] = (2.0 * np.pi / n_ang) * np.sum(S * radial)
    return out


def _route(rho: Density, w: np.ndarray):
    dist = np.abs(w - rho.disk.center)
    inside = dist < rho.disk.radius
    near = (~inside) & (dist < _NEAR_FACTOR * rho.disk.radius)
    far = (~inside) & (~near)
    return inside, near, far


def cauchy_T(rho: Density, w, n_rad: int | None = None, n_ang: int | None = None) -> np.ndarray:
    """Cauchy transform of rho at points w (any mix of regimes)."""
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    out = np.empty(w.shape, dtype=np.complex128)
    inside, near, far = _route(rho, w)
    if far.any():
        s = kernels.cauchy_sum(rho.grid.nodes, rho.grid.weights, rho.values,
                               np.ascontiguousarray(w[far]))
        out[far] = -s / np.pi
    if near.any():
        nodes, weights, vals = rho.fine_sum_arrays()
        s = kernels.cauchy_sum(nodes, weights, vals, np.ascontiguousarray(w[near]))
        out[near] = -s / np.pi
    if inside.any():
        wi = np.ascontiguousarray(w[inside])
        sub = _spider(rho, wi, "cauchy", n_rad, n_ang)
        rho_w = rho.eval_points(wi)
        out[inside] = -sub / np.pi + rho_w * np.conj(wi - rho.disk.center)
    return out


def asymptotic_T(rho: Density, w) -> np.ndarray:
    """Leading small-radius model rho(center) * radius^2 / (w - center)."""
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    rho_c = rho.eval_points(np.array([rho.disk.center]))[0]
    return rho_c * rho.disk.radius**2 / (w - rho.disk.center)


def beurling_Pi(rho: Density, w, n_rad: int | None = None, n_ang: int | None = None) -> np.ndarray:
    """Beurling transform of rho at points w.

    Outside the support the kernel is smooth and the plain grid sum applies;
    inside, the principal value reduces to the subtracted integral because the
    indicator's Beurling transform vanishes there.
    """
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    out = np.empty(w.shape, dtype=np.complex128)
    inside, near, far = _route(rho, w)
    zero = np.zeros(int(far.sum()), dtype=np.complex128)
    if far.any():
        s = kernels.beurling_points(rho.grid.nodes, rho.grid.weights, rho.values,
                                    np.ascontiguousarray(w[far]), zero)
        out[far] = -s / np.pi
    if near.any():
        nodes, weights, vals = rho.fine_sum_arrays()
        s = kernels.beurling_points(nodes, weights, vals, np.ascontiguousarray(w[near]),
                                    np.zeros(int(near.sum()), dtype=np.complex128))
        out[near] = -s / np.pi
    if inside.any():
        wi = np.ascontiguousarray(w[inside])
        out[inside] = -_spider(rho, wi, "beurling", n_rad, n_ang) / np.pi
    return out
