"""Cross-shaped spectra: a real segment [mu, L] plus the vertical segment
{c' + bi : |b| <= c}."""

from dataclasses import dataclass

import numpy as np

from .core import check_complex


@dataclass(frozen=True)
class SpectrumModel:
    mu: float
    L: float
    c: float
    c_prime: float

    def __post_init__(self):
        for name in ("mu", "L", "c", "c_prime"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if not 0 < self.mu <= self.L:
            raise ValueError(f"need 0 < mu <= L, got mu={self.mu}, L={self.L}")
        if self.c < 0:
            raise ValueError(f"c must be >= 0, got {self.c}")
        if self.c_prime <= 0:
            raise ValueError(f"c_prime must be > 0, got {self.c_prime}")

    @classmethod
    def equal_length(cls, mu, L):
        """Cross whose two segments have length L - mu, centred at (mu+L)/2."""
        return cls(mu, L, (L - mu) / 2, (mu + L) / 2)

    @property
    def tau(self):
        return self.mu / self.L


class Spectrum:
    """A finite eigenvalue set, closed under conjugation, in the open right
    half-plane."""

    def __init__(self, eigenvalues):
        ev = np.asarray(eigenvalues, dtype=complex).ravel()
        if ev.size == 0:
            raise ValueError("spectrum must be non-empty")
        if not np.all(np.isfinite(ev)):
            raise ValueError("eigenvalues must be finite")
        if np.any(ev.real <= 0):
            raise ValueError("all eigenvalues must have strictly positive real part")
        if not _conjugate_closed(ev):
            raise ValueError("spectrum is not closed under conjugation")
        ev.setflags(write=False)
        self.eigenvalues = ev

    def __len__(self):
        return self.eigenvalues.size

    def __iter__(self):
        return iter(self.eigenvalues)

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return np.array_equal(self.eigenvalues, other.eigenvalues)

    def __repr__(self):
        return f"Spectrum({self.eigenvalues.tolist()!r})"


def _conjugate_closed(ev):
    complex_part = ev[ev.imag != 0]
    upper = np.sort_complex(complex_part[complex_part.imag > 0])
    lower = np.sort_complex(np.conj(complex_part[complex_part.imag < 0]))
    return upper.shape == lower.shape and np.array_equal(upper, lower)


@dataclass(frozen=True)
class SpectralExtremes:
    min_re: float
    max_abs: float
    min_abs_sq: float
    min_re_inv: float  # min over eigenvalues of Re(1/lambda)
    tau: float  # min_re / max_abs; equals mu/L on the cross


def contains(model, lam, tol=0.0):
    """True iff ``lam`` lies within ``tol`` of the cross described by ``model``."""
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    lam = check_complex(lam, "lambda")
    x, y = lam.real, lam.imag
    # distance to the real segment [mu, L]
    dx = max(model.mu - x, 0.0, x - model.L)
    d_real = np.hypot(dx, y)
    # distance to the vertical segment at re = c'
    dy = max(abs(y) - model.c, 0.0)
    d_imag = np.hypot(x - model.c_prime, dy)
    return bool(min(d_real, d_imag) <= tol)


def sample_cross(model, n_real, n_pairs):
    """Evenly spaced eigenvalues on both segments, endpoints hit exactly.

    Real eigenvalues come first (ascending), then the conjugate pairs
    ``c' + b_k i, c' - b_k i`` with ``b_k = c*k/n_pairs``.
    """
    if n_real < 2:
        raise ValueError(f"n_real must be >= 2, got {n_real}")
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be >= 1, got {n_pairs}")
    if model.c <= 0:
        raise ValueError("c = 0 leaves no room for complex conjugate pairs")
    reals = np.linspace(model.mu, model.L, n_real)
    reals[0], reals[-1] = model.mu, model.L
    b = model.c * np.arange(1, n_pairs + 1) / n_pairs
    b[-1] = model.c
    pairs = np.empty(2 * n_pairs, dtype=complex)
    pairs[0::2] = model.c_prime + 1j * b
    pairs[1::2] = model.c_prime - 1j * b
    return Spectrum(np.concatenate([reals.astype(complex), pairs]))


def extremes(spectrum):
    ev = spectrum.eigenvalues if isinstance(spectrum, Spectrum) else Spectrum(spectrum).eigenvalues
    abs_sq = ev.real**2 + ev.imag**2
    min_re = float(ev.real.min())
    max_abs = float(np.sqrt(abs_sq.max()))
    return SpectralExtremes(
        min_re=min_re,
        max_abs=max_abs,
        min_abs_sq=float(abs_sq.min()),
        min_re_inv=float((ev.real / abs_sq).min()),
        tau=min_re / max_abs,
    )
