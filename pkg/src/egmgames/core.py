"""Dense numerics foundation.

Complex scalars are plain Python ``complex`` (or numpy ``complex128``),
vectors and matrices are ``float64`` numpy arrays. Randomness comes from
numpy's ``PCG64`` bit generator wrapped in ``numpy.random.Generator``;
the algorithm is fixed so a seed reproduces a game bit for bit.
"""

import math

import numpy as np

RNG_ALGORITHM = "PCG64"


def make_rng(seed):
    """Return a ``numpy.random.Generator`` backed by PCG64 for ``seed``."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def check_complex(z, name="z"):
    """Coerce ``z`` to ``complex`` and reject NaN/Inf components."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


def as_vector(x, name="x"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d array, got shape {x.shape}")
    return x


def as_matrix(a, name="A"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {a.shape}")
    return a


def matvec(A, x):
    """Dense product ``A @ x`` with a dimension check."""
    A = as_matrix(A)
    x = as_vector(x)
    if A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has length {x.shape[0]}")
    return A @ x


def euclidean_norm(x):
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


def random_orthogonal(d, rng):
    """Random orthogonal ``d x d`` matrix.

    QR of a standard-normal matrix, with column signs fixed so that the
    diagonal of R is positive (this makes the distribution Haar).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    g = rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs
