"""Sums of boundary double poles as approximants in growth norm.

The model class is r(z) = sum_j d_j / (z - exp(i theta_j))^2 with all poles
on the unit circle, the natural shape for Schwarzian-type targets.  Fitting
alternates a weighted least-squares solve for the strengths d_j (weight
(1 - |z|^2)^(p+1), which keeps boundary-singular targets square-integrable)
with a golden-section sweep of one pole angle at a time, strengths refit
inside the sweep objective.  Reported errors are growth-norm sups from
:func:`qcdeform.spaces.bp_norm`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import bp_norm

__all__ = ["DoublePoleRational", "FitResult", "fit_double_poles", "error_curve"]

_MIN_SEP = 1e-6  # radians; closer poles make the strength solve collapse


@dataclass(frozen=True)
class DoublePoleRational:
    angles: tuple
    strengths: tuple

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        object.__setattr__(self, "strengths", tuple(complex(d) for d in self.strengths))

    @property
    def poles(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.angles))

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape, dtype=np.complex128)
        for a, d in zip(self.poles, self.strengths):
            out += d / (z - a) ** 2
        return out


@dataclass(frozen=True)
class FitResult:
    rational: DoublePoleRational
    sup_error: float    # growth-norm sup of target - rational
    l2_residual: float  # weighted least-squares residual of the final solve
    n_rounds: int


def _sample_set(p: float) -> tuple[np.ndarray, np.ndarray]:
    radii = np.concatenate([np.linspace(0.15, 0.9, 8), 1.0 - 0.5 ** np.arange(2, 11)])
    ang = np.exp(2j * np.pi * np.arange(128) / 128)
    z = np.outer(radii, ang).ravel()
    w = (1.0 - np.abs(z) ** 2) ** (p + 1.0)
    return z, w


def _strength_solve(wb: np.ndarray, z: np.ndarray, w: np.ndarray,
                    angles: np.ndarray, real_strengths: bool):
    A = w[:, None] / (z[:, None] - np.exp(1j * angles)[None, :]) ** 2
    if real_strengths:
        As = np.vstack([A.real, A.imag])
        bs = np.concatenate([wb.real, wb.imag])
        d, *_ = np.linalg.lstsq(As, bs, rcond=None)
        resid = float(np.linalg.norm(As @ d - bs))
        return d.astype(np.complex128), resid
    d, *_ = np.linalg.lstsq(A, wb, rcond=None)
    return d, float(np.linalg.norm(A @ d - wb))


def _golden(fn, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 90) -> float:
    g = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = fn(x2)
    return 0.5 * (lo + hi)


def _separate(angles: np.ndarray, n: int) -> bool:
    if n < 2:
        return True
    a = np.sort(angles % (2.0 * np.pi))
    gaps = np.diff(np.concatenate([a, [a[0] + 2.0 * np.pi]]))
    return bool(np.min(gaps) > _MIN_SEP)


def fit_double_poles(target, n_poles: int, p: float = 2.0,
                     real_strengths: bool = False,
                     init_angles=None, rounds: int = 8) -> FitResult:
    """Best n-pole approximant of a callable target on the unit disk.

    Without init_angles the poles are placed greedily, each new one at the
    angle where the weighted residual of the previous fit peaks on a circle
    near the boundary.
    """
    if n_poles < 1:
        raise ValueError("need at least one pole")
    z, w = _sample_set(p)
    wb = w * np.asarray(target(z), dtype=np.complex128)

    def resid_for(angles: np.ndarray) -> float:
        return _strength_solve(wb, z, w, angles, real_strengths)[1]

    if init_angles is None:
        scan = 2.0 * np.pi * np.arange(64) / 64
        angles = np.array([scan[int(np.argmin([resid_for(np.array([t])) for t in scan]))]])
        while len(angles) < n_poles:
            d, _ = _strength_solve(wb, z, w, angles, real_strengths)
            angles = np.append(angles, _peak_angle(target, DoublePoleRational(angles, d), p))
    else:
        angles = np.asarray(init_angles, dtype=np.float64).copy()
        if len(angles) != n_poles:
            raise ValueError("init_angles length must equal n_poles")

    span = np.pi / 8.0
    perturbed = False
    n_rounds = 0
    for rnd in range(rounds):
        n_rounds = rnd + 1
        before = resid_for(angles)
        for jj in range(n_poles):
            def obj(t, jj=jj):
                trial = angles.copy()
                trial[jj] = t
                return resid_for(trial)

            angles[jj] = _golden(obj, angles[jj] - span, angles[jj] + span)
        if not _separate(angles, n_poles):
            if perturbed:
                break
            perturbed = True
            order = np.argsort(angles % (2.0 * np.pi))
            sa = (angles % (2.0 * np.pi))[order]
            gaps = np.diff(np.concatenate([sa, [sa[0] + 2.0 * np.pi]]))
            angles[order[int(np.argmin(gaps))]] += np.pi / (8.0 * n_poles)
        after = resid_for(angles)
        span = max(span * 0.35, 1e-4)
        if before - after <= 1e-12 * max(after, 1e-300) and rnd > 0:
            break
    d, resid = _strength_solve(wb, z, w, angles, real_strengths)
    rational = DoublePoleRational(angles, d)
    sup = bp_norm(lambda zz: np.asarray(target(zz)) - rational(zz), p)
    return FitResult(rational, sup, resid, n_rounds)


def _peak_angle(target, rational: DoublePoleRational, p: float) -> float:
    r = 1.0 - 2.0**-8
    t = 2.0 * np.pi * np.arange(256) / 256
    z = r * np.exp(1j * t)
    res = (1.0 - r * r) ** (p + 1.0) * np.abs(np.asarray(target(z)) - rational(z))
    # The residual also peaks at slightly-misplaced existing poles; mask those
    # neighborhoods so the new pole lands on genuinely unfit structure.
    masked = res.copy()
    for a in rational.angles:
        gap = np.abs((t - a + np.pi) % (2.0 * np.pi) - np.pi)
        masked[gap < np.pi / 8.0] = -1.0
    if np.max(masked) > 0.0:
        return float(t[int(np.argmax(masked))])
    return float(t[int(np.argmax(res))])


def error_curve(target, n_max: int, p: float = 2.0,
                real_strengths: bool = False) -> tuple[np.ndarray, list]:
    """Growth-norm errors of the best fits for 1 .. n_max poles.

    Each fit warm-starts from the previous pole set plus one pole at the
    residual peak; if refitting ever comes out worse, the previous approximant
    is kept with a zero-strength extra pole, so the curve never increases.
    """
    errors = np.empty(n_max)
    fits: list[FitResult] = []
    prev: FitResult | None = None
    for n in range(1, n_max + 1):
        if prev is None:
            fit = fit_double_poles(target, n, p, real_strengths)
        else:
            init = np.append(np.asarray(prev.rational.angles),
                             _peak_angle(target, prev.rational, p))
            fit = fit_double_poles(target, n, p, real_strengths, init_angles=init)
            if fit.sup_error > prev.sup_error:
                carried = DoublePoleRational(
                    prev.rational.angles + (init[-1],),
                    prev.rational.strengths + (0j,))
                fit = FitResult(carried, prev.sup_error, prev.l2_residual, fit.n_rounds)
        fits.append(fit)
        errors[n - 1] = fit.sup_error
        prev = fit
    return errors, fits
