"""Coefficient extremum search over zero-free functions, and sampled
non-falsification of the coefficient-domination inequalities.

Two desk-scale tools:

* ``hsz_search`` produces certified lower bounds for the largest |c_n| among
  zero-free functions of unit Hilbert norm.  Candidates are exponentials of
  random polynomials (zero-free by construction), their homotopy dilations
  f(rz) including the constant r = 0, and coordinate-ascent tweaks of the
  incumbent.  The stream of evaluations is a deterministic function of the
  seed, so enlarging the budget only extends it: the running best never
  decreases for a fixed seed.

* ``check_thm2_consistency`` samples a family of small Schwarzian-sized
  functions, singles out the member maximizing |c_1|, and tabulates the
  domination inequalities |c_n| <= max(|c_1^0|, |c_n^0|) on the members and
  |a_m| <= |a_m^0| on the attached ratio-of-solutions expansions.  Violations
  are reported verbatim, never suppressed.  The output is exploratory
  evidence about a finite sample whose boundary hypothesis is unchecked, not
  a theorem verification; the report header says so.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import HoloSeries
from .spaces import SpaceSpec, hilbert_norm
from .schwarzian import solve_schwarz

__all__ = [
    "SearchRecord",
    "hsz_search",
    "FamilySpec",
    "Thm2Report",
    "check_thm2_consistency",
]


@dataclass(frozen=True)
class SearchRecord:
    space: SpaceSpec
    n: int
    best_value: float
    best_f: HoloSeries | None
    samples: int
    seed: int
    history: tuple  # (evaluation index, value, candidate) at each improvement


def _normalized_exp(space: SpaceSpec, g_coeffs: np.ndarray, n_keep: int) -> HoloSeries:
    g = np.zeros(n_keep + 1, dtype=np.complex128)
    g[: len(g_coeffs)] = g_coeffs
    f = HoloSeries(g, radius=np.inf).exp()
    nrm = hilbert_norm(space, f)
    return HoloSeries(f.coeffs / nrm, radius=1.0)


def hsz_search(space: SpaceSpec, n: int, budget: int, seed: int = 0,
               degree: int = 12, n_keep: int = 48) -> SearchRecord:
    """Lower bound for sup |c_n| over zero-free f with ||f||_H = 1.

    Every evaluated candidate is exp(polynomial) rescaled to unit norm, so it
    is zero-free and on the unit sphere by construction.  Returns the best
    value found within the evaluation budget.
    """
    rng = np.random.default_rng(seed)
    best = 0.0
    best_f: HoloSeries | None = None
    history: list = []
    evals = 0
    sweep = (0.0, 0.25, 0.5, 0.75, 1.0)
    scales = 0.5 ** np.arange(degree + 1)
    incumbent_g: np.ndarray | None = None
    fresh_count = 0

    def consider(g_coeffs: np.ndarray) -> bool:
        nonlocal best, best_f, evals
        if evals >= budget:
            return False
        evals += 1
        f = _normalized_exp(space, g_coeffs, n_keep)
        val = abs(f.coefficient(n))
        if val > best:
            best = val
            best_f = f
            history.append((evals, val, f))
            return True
        return False

    while evals < budget:
        g = scales * (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
        fresh_count += 1
        improved_here = False
        for r in sweep:
            if consider(g * r ** np.arange(degree + 1)):
                incumbent_g = g * r ** np.arange(degree + 1)
                improved_here = True
            if evals >= budget:
                break
        if improved_here is False and incumbent_g is None:
            incumbent_g = g
        # periodic local ascent around the incumbent
        if fresh_count % 16 == 0 and incumbent_g is not None and evals < budget:
            step = 0.25
            for _ in range(8):
                if evals >= budget:
                    break
                tweak = np.zeros(degree + 1, dtype=np.complex128)
                m = int(rng.integers(0, degree + 1))
                tweak[m] = step * np.exp(2j * np.pi * rng.random())
                if consider(incumbent_g + tweak):
                    incumbent_g = incumbent_g + tweak
                else:
                    step *= 0.7
    return SearchRecord(space, n, best, best_f, evals, seed, tuple(history))


# ---------------------------------------------------------------------------
# sampled domination inequalities


@dataclass(frozen=True)
class FamilySpec:
    """Generator recipe for a sampled family of small disk functions."""

    kind: str = "random_b2"
    size: int = 1000
    degree: int = 10
    sigma0: float = 0.2
    decay: float = 0.5
    b2_bound: float = 0.2
    ray_target: HoloSeries | None = None

    @staticmethod
    def random_b2(size: int = 1000, degree: int = 10, sigma0: float = 0.2,
                  decay: float = 0.5, b2_bound: float = 0.2) -> "FamilySpec":
        return FamilySpec("random_b2", size, degree, sigma0, decay, b2_bound)

    @staticmethod
    def ray(target: HoloSeries, size: int = 11) -> "FamilySpec":
        return FamilySpec("ray", size=size, ray_target=target)

    def generate(self, seed: int) -> list[HoloSeries]:
        if self.kind == "ray":
            if self.ray_target is None:
                raise ValueError("ray family needs its target function")
            ts = np.linspace(0.0, 1.0, self.size)
            return [HoloSeries(t * self.ray_target.coeffs,
                               self.ray_target.center, self.ray_target.radius)
                    for t in ts]
        if self.kind != "random_b2":
            raise ValueError(f"unknown family kind {self.kind!r}")
        rng = np.random.default_rng(seed)
        sig = self.sigma0 * self.decay ** np.arange(self.degree + 1)
        out = []
        for _ in range(self.size):
            c = sig * (rng.standard_normal(self.degree + 1)
                       + 1j * rng.standard_normal(self.degree + 1))
            f = HoloSeries(c, radius=np.inf)
            b2 = _grid_b2(f)
            if b2 > self.b2_bound:
                f = HoloSeries(c * (self.b2_bound / b2), radius=np.inf)
            out.append(f)
        return out


def _grid_b2(f: HoloSeries) -> float:
    """Single-grid estimate of the growth norm, cheap enough per sample."""
    radii = np.concatenate([np.arange(64) / 64, 1.0 - 0.5 ** np.arange(2, 9)])
    ang = np.exp(2j * np.pi * np.arange(128) / 128)
    z = np.outer(np.unique(radii), ang).ravel()
    return float(np.max((1.0 - np.abs(z) ** 2) ** 2 * np.abs(f.evaluate(z))))


_HEADER = (
    "exploratory evidence: finite sampled family, boundary hypothesis unchecked; "
    "f0 is the sampled argmax of |c_1|, not a certified extremal; "
    "this report does not verify any theorem"
)


@dataclass(frozen=True)
class Thm2Report:
    header: str
    n: int
    n_samples: int
    seed: int
    f0_index: int
    c1_0: float
    cn_0: float
    rows: tuple               # per sample: (index, |c_n|, bound, ok)
    coeff_violations: tuple   # sample indices with |c_n| > bound + tol
    expansion_rows: tuple     # (index, m, |a_m|, |a_m^0|, ok) comparisons
    expansion_violations: tuple
    tol: float

    def to_dict(self) -> dict:
        return {
            "header": self.header,
            "n": self.n,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "f0_index": self.f0_index,
            "c1_0": self.c1_0,
            "cn_0": self.cn_0,
            "coeff_violations": list(self.coeff_violations),
            "expansion_violations": [list(v) for v in self.expansion_violations],
            "rows": [list(r) for r in self.rows],
            "expansion_rows": [list(r) for r in self.expansion_rows],
            "tol": self.tol,
        }


def check_thm2_consistency(space: SpaceSpec, family, n: int = 2,
                           samples: int | None = None, seed: int = 0,
                           tol: float = 1e-9, m_max: int = 6,
                           ode_degree: int = 16) -> Thm2Report:
    """Tabulate the coefficient-domination inequalities on a sampled family.

    family is a FamilySpec or an iterable of HoloSeries.  The |c_n| of every
    member is compared against max(|c_1^0|, |c_n^0|) of the member maximizing
    |c_1|; the expansions solving the attached second-order equation are
    compared coefficientwise the same way.  All violations are listed.
    """
    if isinstance(family, FamilySpec):
        if samples is not None:
            family = FamilySpec(**{**family.__dict__, "size": samples})
        members = family.generate(seed)
    else:
        members = list(family)
        if samples is not None:
            members = members[:samples]
    if not members:
        return Thm2Report(_HEADER, n, 0, seed, -1, 0.0, 0.0, (), (), (), (), tol)

    c1 = np.array([abs(f.coefficient(1)) for f in members])
    i0 = int(np.argmax(c1))
    f0 = members[i0]
    c1_0 = float(c1[i0])
    cn_0 = abs(f0.coefficient(n))
    bound = max(c1_0, cn_0)

    rows = []
    bad_coeff = []
    for i, f in enumerate(members):
        cn = abs(f.coefficient(n))
        ok = cn <= bound + tol
        rows.append((i, cn, bound, ok))
        if not ok:
            bad_coeff.append(i)

    w0 = solve_schwarz(f0, ode_degree)
    a0 = np.abs([w0.coefficient(m) for m in range(m_max + 1)])
    exp_rows = []
    bad_exp = []
    for i, f in enumerate(members):
        w = solve_schwarz(f, ode_degree)
        for m in range(3, m_max + 1):
            am = abs(w.coefficient(m))
            ok = bool(am <= a0[m] + tol)
            exp_rows.append((i, m, am, float(a0[m]), ok))
            if not ok:
                bad_exp.append((i, m))

    return Thm2Report(_HEADER, n, len(members), seed, i0, c1_0, cn_0,
                      tuple(rows), tuple(bad_coeff), tuple(exp_rows), tuple(bad_exp), tol)
