"""Hyperparameters and rate bounds for GD, GDM, EG and EGM on cross-shaped
spectra, plus the exhaustive grid search used for the untuned methods."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .optimizers import final_distances_batch
from .polyoracle import Hyperparams, robust_region_case2
from .spectrum import Spectrum, extremes

SQRT5 = math.sqrt(5)


class DivergenceError(RuntimeError):
    """Every candidate of a grid search diverged."""


@dataclass(frozen=True)
class RateReport:
    method: str
    per_iter_bound: float
    per_eval_bound: float
    tau: float
    squared_bound: Optional[float] = None
    closed_form_squared_bound: Optional[float] = None
    notes: str = ""


def _check_mu_L(mu, L):
    if not (math.isfinite(mu) and math.isfinite(L)) or not 0 < mu <= L:
        raise ValueError(f"need 0 < mu <= L, got mu={mu}, L={L}")


def optimal_egm(mu, L, c):
    """Step size, extrapolation step and momentum that make the EGM robust
    region coincide with the cross ``[mu, L] U {(mu+L)/2 + bi : |b| <= c}``."""
    _check_mu_L(mu, L)
    if not math.isfinite(c) or c < 0:
        raise ValueError(f"c must be finite and >= 0, got {c}")
    s = math.sqrt(4 * c**2 + (mu + L) ** 2)
    r = math.sqrt(4 * mu * L)
    h = 16 * (mu + L) / (s + r) ** 2
    # s - r = (s^2 - r^2)/(s + r) avoids cancellation when mu ~ L and c ~ 0
    m = ((4 * c**2 + (L - mu) ** 2) / (s + r) ** 2) ** 2
    return Hyperparams(h=h, gamma=1 / (mu + L), m=m)


def optimal_egm_equal_length(mu, L):
    """Closed form of :func:`optimal_egm` for ``c = (L - mu)/2``."""
    _check_mu_L(mu, L)
    s = math.sqrt(mu**2 + L**2)
    r = math.sqrt(2 * mu * L)
    h = 8 * (mu + L) / (s + r) ** 2
    m = ((L - mu) ** 2 / (s + r) ** 2) ** 2
    return Hyperparams(h=h, gamma=1 / (mu + L), m=m)


def matching_residuals(p, mu, L, c):
    """Relative residuals of the three equalities tying the robust region to
    the cross: lower real end = mu, upper real end = L, half-height = c."""
    region = robust_region_case2(p)

    def rel(x, y):
        return abs(x - y) / abs(y) if y else abs(x)

    return rel(region.real_lo, mu), rel(region.real_hi, L), rel(region.complex_b_max, c)


@dataclass(frozen=True)
class RateExpansion:
    exact: float
    first_order: Optional[float]  # None when mu == L


def egm_rate_expansion(mu, L, c):
    """Exact optimal EGM rate ``m^{1/4}`` next to its first-order expansion
    ``1 - 2 sqrt(tau) / sqrt((2c/L)^2 + 1)`` in ``tau = mu/L``."""
    p = optimal_egm(mu, L, c)
    exact = p.m**0.25
    if mu == L:
        return RateExpansion(exact, None)
    tau = mu / L
    return RateExpansion(exact, 1 - 2 * math.sqrt(tau) / math.sqrt((2 * c / L) ** 2 + 1))


def _spectrum(s):
    return s if isinstance(s, Spectrum) else Spectrum(s)


def gd_theory_step(s):
    return extremes(_spectrum(s)).min_re_inv


def gd_rate_bound(s):
    ex = extremes(_spectrum(s))
    sq = max(1 - ex.min_re_inv * ex.min_re, 0.0)
    rho = math.sqrt(sq)
    return RateReport("GD", rho, rho, ex.tau, squared_bound=sq,
                      notes="step h = min Re(1/lambda)")


def eg_theory_step(s):
    return 1 / (4 * extremes(_spectrum(s)).max_abs)


def eg_closed_form_bound(mu, L):
    """Closed-form squared EG bound for the equal-length cross, with the
    second term scaled by 1/16 relative to the general formula."""
    _check_mu_L(mu, L)
    if L >= (math.sqrt(2) + 1) * mu:
        return 1 - 0.25 * (mu / L + mu**2 / (16 * L**2))
    return 1 - 0.25 * (mu / L + (L - mu) ** 2 / (16 * L**2))


def eg_rate_bound(s, model=None):
    """EG bound from the spectral extremes.

    When ``model`` is an equal-length cross (``c = (L - mu)/2``) the
    closed form of :func:`eg_closed_form_bound` is reported alongside; the
    two differ by a factor 16 in the second term.
    """
    ex = extremes(_spectrum(s))
    sq = 1 - 0.25 * (ex.min_re / ex.max_abs + ex.min_abs_sq / ex.max_abs**2)
    rho = math.sqrt(sq)
    closed = None
    notes = "step h = 1/(4 max|lambda|)"
    if model is not None and math.isclose(model.c, (model.L - model.mu) / 2, rel_tol=1e-12, abs_tol=1e-300):
        closed = eg_closed_form_bound(model.mu, model.L)
        notes += "; closed form uses min|lambda|^2/(16 max|lambda|^2)"
    return RateReport("EG", rho, math.sqrt(rho), ex.tau, squared_bound=sq,
                      closed_form_squared_bound=closed, notes=notes)


def egm_rate_report(mu, L, c):
    p = optimal_egm(mu, L, c)
    return RateReport("EGM", math.sqrt(p.m), p.m**0.25, mu / L, squared_bound=p.m,
                      notes="optimal hyperparameters; rho per iteration = sqrt(m)")


def gdm_rate_bound(tau, theta):
    """Leading-order GDM bound on an ellipse of half-height ``L tau^theta``.

    Returns ``(bound, branch)`` with branch one of ``"theta>1/2"``,
    ``"theta=1/2"``, ``"theta<1/2"``.
    """
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    if theta <= 0:
        raise ValueError("theta must be > 0")
    if theta > 0.5:
        return 1 - 2 * math.sqrt(tau), "theta>1/2"
    if theta == 0.5:
        return 1 - 2 * (math.sqrt(2) - 1) * math.sqrt(tau), "theta=1/2"
    return 1 - tau ** (1 - theta), "theta<1/2"


def gdm_acceleration_threshold(mu, L):
    """True when ``L/mu > sqrt(5)``, the condition-number threshold above
    which GDM cannot accelerate on the equal-length cross.

    Note the half-height test ``(L - mu)/2 > sqrt(mu L)`` is stricter: it
    holds iff ``L/mu > 3 + 2 sqrt(2)``; ``sqrt(5)`` is implied by it.
    """
    _check_mu_L(mu, L)
    return L / mu > SQRT5


# -- grid search -------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    h_lo: float
    h_hi: float
    h_step: float
    m_lo: Optional[float] = None
    m_hi: Optional[float] = None
    m_step: Optional[float] = None

    def __post_init__(self):
        if self.h_step <= 0 or self.h_lo > self.h_hi or self.h_lo <= 0:
            raise ValueError(f"invalid step-size grid {self}")
        if self.m_lo is not None:
            if self.m_step is None or self.m_hi is None or self.m_step <= 0 or self.m_lo > self.m_hi:
                raise ValueError(f"invalid momentum grid {self}")
            if not (0 <= self.m_lo and self.m_hi < 1):
                raise ValueError("momentum grid must lie in [0, 1)")

    @staticmethod
    def _axis(lo, hi, step):
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        # rounding keeps 0.005 + 3*0.001 at 0.008 rather than 0.008000000000000002
        return np.round(lo + step * np.arange(n), 12)

    def h_values(self):
        return self._axis(self.h_lo, self.h_hi, self.h_step)

    def m_values(self):
        if self.m_lo is None:
            return np.zeros(1)
        return self._axis(self.m_lo, self.m_hi, self.m_step)

    def points(self):
        """Grid as ``(hs, ms)`` in h-major, m-minor ascending order."""
        hs, ms = np.meshgrid(self.h_values(), self.m_values(), indexing="ij")
        return hs.ravel(), ms.ravel()


GDM_GRID = GridSpec(0.005, 0.015, 1e-3, 0.01, 0.99, 1e-2)
GD_GRID = GridSpec(0.005, 0.015, 1e-3)
EG_GRID = GridSpec(0.001, 0.05, 1e-4)
DEFAULT_GRIDS = {"GD": GD_GRID, "GDM": GDM_GRID, "EG": EG_GRID}


@dataclass(frozen=True)
class GridResult:
    best: Hyperparams
    final_distance: float
    n_candidates: int
    n_diverged: int


def grid_search(game, method, spec=None, iters=2000, w0=None):
    """Exhaustive search; best = smallest final distance, ties to smaller h
    then smaller m. Diverged candidates are dropped."""
    method = method.upper()
    if method not in DEFAULT_GRIDS:
        raise ValueError(f"grid search supports GD, GDM and EG, not {method!r}")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    spec = DEFAULT_GRIDS[method] if spec is None else spec
    hs, ms = spec.points()
    if method != "GDM":
        ms = np.zeros_like(ms)
    final, dead = final_distances_batch(game, method, hs, ms, w0=w0, iters=iters)
    if dead.all():
        raise DivergenceError(f"all {hs.size} {method} candidates diverged")
    # points() is ordered by (h, m), so the first minimiser wins ties
    i = int(np.argmin(np.where(dead, np.inf, final)))
    gamma = hs[i] if method == "EG" else 0.0
    return GridResult(
        best=Hyperparams(float(hs[i]), float(gamma), float(ms[i])),
        final_distance=float(final[i]),
        n_candidates=int(hs.size),
        n_diverged=int(dead.sum()),
    )
