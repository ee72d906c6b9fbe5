"""Input checks shared by the estimator classes."""

import numbers

import numpy as np
from sklearn.exceptions import NotFittedError

from .gamegen import QuadraticGame


def check_game(game):
    """Accept a :class:`QuadraticGame` or a square matrix.

    A bare matrix ``A`` is wrapped as the game ``v(w) = A w`` with
    stationary point zero.
    """
    if isinstance(game, QuadraticGame):
        return game
    A = np.asarray(game, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a QuadraticGame or a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains NaN or Inf")
    return QuadraticGame.from_matrix(A, np.zeros(A.shape[0]))


def check_start(w0, game):
    if w0 is None:
        return np.zeros(game.dim)
    w0 = np.asarray(w0, dtype=float)
    if w0.shape != (game.dim,):
        raise ValueError(f"w0 must have shape ({game.dim},), got {w0.shape}")
    if not np.all(np.isfinite(w0)):
        raise ValueError("w0 contains NaN or Inf")
    return w0


def check_scalar(x, name, min_val=None, max_val=None, include_min=True, include_max=True):
    if isinstance(x, bool) or not isinstance(x, numbers.Real) or not np.isfinite(x):
        raise TypeError(f"{name} must be a finite real number, got {x!r}")
    if min_val is not None and (x < min_val or (x == min_val and not include_min)):
        raise ValueError(f"{name} = {x} is below its allowed range")
    if max_val is not None and (x > max_val or (x == max_val and not include_max)):
        raise ValueError(f"{name} = {x} is above its allowed range")
    return x


def check_n_iter(n_iter):
    if isinstance(n_iter, bool) or not isinstance(n_iter, numbers.Integral) or n_iter < 1:
        raise ValueError(f"n_iter must be a positive integer, got {n_iter!r}")
    return int(n_iter)


def check_is_fitted(estimator, attr="trace_"):
    if not hasattr(estimator, attr):
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet. Call 'fit' first."
        )
