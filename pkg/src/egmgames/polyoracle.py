"""Chebyshev polynomials, residual polynomials of EGM and GDM, and the
robust region of EGM.

All evaluators use plain arithmetic, so ``lam`` may be a Python complex or
a numpy array of complex values (evaluated elementwise).
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

REAL_TOL = 1e-12


@dataclass(frozen=True)
class Hyperparams:
    h: float
    gamma: float = 0.0
    m: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.h) and math.isfinite(self.gamma) and math.isfinite(self.m)):
            raise ValueError(f"hyperparameters must be finite: {self}")
        if self.h <= 0:
            raise ValueError(f"step size h must be > 0, got {self.h}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not 0 <= self.m < 1:
            raise ValueError(f"momentum m must lie in [0, 1), got {self.m}")


def chebyshev_T(t, z):
    if t < 0:
        raise ValueError("t must be >= 0")
    prev, cur = 1.0 + 0 * z, z
    if t == 0:
        return prev
    for _ in range(t - 1):
        prev, cur = cur, 2 * z * cur - prev
    return cur


def chebyshev_U(t, z):
    if t < 0:
        raise ValueError("t must be >= 0")
    prev, cur = 1.0 + 0 * z, 2 * z
    if t == 0:
        return prev
    for _ in range(t - 1):
        prev, cur = cur, 2 * z * cur - prev
    return cur


def _require_momentum(p):
    if p.m <= 0:
        raise ValueError("the Chebyshev form divides by sqrt(m); use the recurrence for m = 0")


def link_sigma(p, lam):
    """EGM link function, quadratic in ``lam``."""
    _require_momentum(p)
    return (1 + p.m - p.h * lam * (1 - p.gamma * lam)) / (2 * math.sqrt(p.m))


def link_xi(p, lam):
    """GDM link function, linear in ``lam``."""
    _require_momentum(p)
    return (1 + p.m - p.h * lam) / (2 * math.sqrt(p.m))


def momentum_combination(m, t, z):
    """``(2m/(1+m)) T_t(z) + ((1-m)/(1+m)) U_t(z)``."""
    return (2 * m / (1 + m)) * chebyshev_T(t, z) + ((1 - m) / (1 + m)) * chebyshev_U(t, z)


def _residual_recurrence(step, m, t):
    # step = h*lam*(1 - gamma*lam) for EGM, h*lam for GDM
    prev = 1.0 + 0 * step
    if t == 0:
        return prev
    cur = 1 - step / (1 + m)
    for _ in range(t - 1):
        prev, cur = cur, (1 + m - step) * cur - m * prev
    return cur


def residual_egm_recurrence(p, lam, t):
    if t < 0:
        raise ValueError("t must be >= 0")
    return _residual_recurrence(p.h * lam * (1 - p.gamma * lam), p.m, t)


def residual_gdm_recurrence(p, lam, t):
    """GDM residual polynomial via its three-term recurrence (total in m)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return _residual_recurrence(p.h * lam, p.m, t)


def residual_egm_chebyshev(p, lam, t):
    if t < 0:
        raise ValueError("t must be >= 0")
    return p.m ** (t / 2) * momentum_combination(p.m, t, link_sigma(p, lam))


def residual_gdm(p, lam, t):
    if t < 0:
        raise ValueError("t must be >= 0")
    return p.m ** (t / 2) * momentum_combination(p.m, t, link_xi(p, lam))


class Mode(Enum):
    CASE1_ALL_REAL = 1
    CASE2_COMPLEX_AND_REAL = 2
    CASE3_ALL_COMPLEX = 3


@dataclass(frozen=True)
class ModeClass:
    mode: Mode
    minus_one: tuple  # the two preimages sigma^{-1}(-1)
    plus_one: tuple  # the two preimages sigma^{-1}(1)

    def points_real(self):
        """(sigma^{-1}(-1) real?, sigma^{-1}(1) real?) measured from the points."""
        return (
            all(abs(z.imag) <= REAL_TOL for z in self.minus_one),
            all(abs(z.imag) <= REAL_TOL for z in self.plus_one),
        )


def sigma_preimages(p, value):
    """Both solutions of ``sigma(lam) = value`` for real ``value`` in {-1, 1}."""
    if p.gamma <= 0:
        raise ValueError("gamma must be > 0 for the extreme points")
    sm = math.sqrt(p.m)
    k = (1 - value * sm) ** 2  # (1 + sqrt m)^2 for value -1, (1 - sqrt m)^2 for +1
    centre = 1 / (2 * p.gamma)
    root = cmath.sqrt(1 / (4 * p.gamma**2) - k / (p.h * p.gamma))
    return (centre - root, centre + root)


def classify_mode(p):
    if p.gamma <= 0:
        raise ValueError("classify_mode needs gamma > 0")
    ratio = p.h / (4 * p.gamma)
    sm = math.sqrt(p.m)
    if ratio >= (1 + sm) ** 2:
        mode = Mode.CASE1_ALL_REAL
    elif (1 - sm) ** 2 <= ratio:
        mode = Mode.CASE2_COMPLEX_AND_REAL
    else:
        mode = Mode.CASE3_ALL_COMPLEX
    return ModeClass(mode, sigma_preimages(p, -1), sigma_preimages(p, 1))


@dataclass(frozen=True)
class RobustRegion:
    real_lo: float
    real_hi: float
    complex_re: float
    complex_b_max: float


def robust_region_case2(p):
    """``sigma^{-1}([-1, 1])`` in the mixed mode: a real interval plus a
    vertical segment at ``1/(2 gamma)``."""
    if classify_mode(p).mode is not Mode.CASE2_COMPLEX_AND_REAL:
        raise ValueError("robust_region_case2 requires Case-2 hyperparameters")
    sm = math.sqrt(p.m)
    centre = 1 / (2 * p.gamma)
    prod = (1 - sm) ** 2 / (p.h * p.gamma)  # product of the two real endpoints
    half = math.sqrt(max(centre**2 - prod, 0.0))
    hi = centre + half
    # lo = centre - half, rationalised to avoid cancellation when lo << hi
    lo = prod / hi
    b_max = math.sqrt(max((1 + sm) ** 2 / (p.h * p.gamma) - centre**2, 0.0))
    return RobustRegion(lo, hi, centre, b_max)


def worst_case_rate_bound(m, t):
    """``m^{t/2} (t + 2)``: bound on the worst-case residual inside the robust region."""
    if not 0 < m < 1:
        raise ValueError("m must lie in (0, 1)")
    if t < 0:
        raise ValueError("t must be >= 0")
    return m ** (t / 2) * (t + 2)


def asymptotic_rate(m):
    """Per-vector-field-evaluation asymptotic rate ``m^{1/4}``."""
    if not 0 <= m < 1:
        raise ValueError("m must lie in [0, 1)")
    return m**0.25


def in_robust_region(p, lam, tol=1e-12):
    """True where ``|sigma(lam)|`` is real and in [-1, 1] up to ``tol``."""
    s = np.asarray(link_sigma(p, lam))
    return (np.abs(s.imag) <= tol) & (np.abs(s.real) <= 1 + tol)
