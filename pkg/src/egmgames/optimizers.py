"""GD, GDM, EG and EGM on the linear field of a quadratic game.

Every method shares one iteration:

    y_t     = w_t - gamma v(w_t)             (extragradient methods only)
    w_1     = w_0 - h/(1+m) v(y_0)
    w_{t+1} = w_t - h v(y_t) + m (w_t - w_{t-1})

GD is ``m = 0`` without extrapolation, EG is ``m = 0, gamma = h``. The
damped first step is what makes the iterate error equal to the residual
polynomial times the initial error.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import as_vector
from .polyoracle import Hyperparams

DIVERGENCE_RATIO = 1e12
FLOOR_RATIO = 1e-13

VF_EVALS_PER_ITER = {"GD": 1, "GDM": 1, "EG": 2, "EGM": 2}


@dataclass
class RunTrace:
    method: str
    params: Hyperparams
    distances: np.ndarray
    vf_evals: np.ndarray
    diverged: bool = False
    final_iterate: np.ndarray = field(default=None, repr=False)

    @property
    def iters(self):
        return len(self.distances) - 1

    def relative(self):
        d0 = self.distances[0]
        return self.distances / d0 if d0 > 0 else self.distances.copy()


def _check_start(game, w0):
    if w0 is None:
        return np.zeros(game.dim)
    w0 = as_vector(w0, "w0")
    if w0.shape[0] != game.dim:
        raise ValueError(f"dimension mismatch: game has dim {game.dim}, w0 has {w0.shape[0]}")
    return w0


def _run(game, method, h, gamma, m, extrapolate, w0, iters):
    if iters < 1:
        raise ValueError(f"iters must be >= 1, got {iters}")
    A, b, w_star = game.A, game.b, game.w_star
    w = _check_start(game, w0).copy()
    per = VF_EVALS_PER_ITER[method]

    def field_at(x):
        return A @ x + b

    d0 = float(np.linalg.norm(w - w_star))
    limit = DIVERGENCE_RATIO * d0 if d0 > 0 else DIVERGENCE_RATIO
    distances = [d0]
    diverged = False
    w_prev = w
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(iters):
            g = field_at(w)
            if extrapolate:
                g = field_at(w - gamma * g)
            if t == 0:
                w_next = w - (h / (1 + m)) * g
            else:
                w_next = w - h * g
                if m:
                    w_next = w_next + m * (w - w_prev)
            w_prev, w = w, w_next
            dist = float(np.linalg.norm(w - w_star))
            if not np.isfinite(dist):
                distances.append(float("inf"))
                diverged = True
                break
            distances.append(dist)
            if dist > limit:
                diverged = True
                break
    n = len(distances)
    return RunTrace(
        method=method,
        params=Hyperparams(h, gamma, m) if h > 0 else None,
        distances=np.array(distances),
        vf_evals=per * np.arange(n),
        diverged=diverged,
        final_iterate=w,
    )


def run_gd(game, h, w0=None, iters=2000):
    if h < 0:
        raise ValueError("h must be >= 0")
    return _run(game, "GD", h, 0.0, 0.0, False, w0, iters)


def run_gdm(game, h, m, w0=None, iters=2000):
    if h < 0 or not 0 <= m < 1:
        raise ValueError("need h >= 0 and 0 <= m < 1")
    return _run(game, "GDM", h, 0.0, m, False, w0, iters)


def run_eg(game, h, w0=None, iters=2000):
    if h < 0:
        raise ValueError("h must be >= 0")
    return _run(game, "EG", h, h, 0.0, True, w0, iters)


def run_egm(game, p, w0=None, iters=2000):
    return _run(game, "EGM", p.h, p.gamma, p.m, True, w0, iters)


def run_method(game, method, params, w0=None, iters=2000):
    """Dispatch on ``method`` in {GD, GDM, EG, EGM}."""
    method = method.upper()
    if method == "GD":
        return run_gd(game, params.h, w0, iters)
    if method == "GDM":
        return run_gdm(game, params.h, params.m, w0, iters)
    if method == "EG":
        return run_eg(game, params.h, w0, iters)
    if method == "EGM":
        return run_egm(game, params, w0, iters)
    raise ValueError(f"unknown method {method!r}; expected GD, GDM, EG or EGM")


def final_distances_batch(game, method, hs, ms=None, w0=None, iters=2000):
    """Run ``len(hs)`` candidates of one method side by side.

    Candidates are the columns of one iterate matrix, so each iteration is a
    single matrix-matrix product. Returns ``(final_distance, diverged)``
    arrays; a diverged candidate's distance is ``inf``.
    """
    method = method.upper()
    hs = np.asarray(hs, dtype=float)
    ms = np.zeros_like(hs) if ms is None else np.asarray(ms, dtype=float)
    extrapolate = method in ("EG", "EGM")
    if method == "EGM":
        raise ValueError("batched runs cover GD, GDM and EG")
    gammas = hs if extrapolate else np.zeros_like(hs)
    A, b, w_star = game.A, game.b[:, None], game.w_star[:, None]
    w0 = _check_start(game, w0)
    k = hs.size
    W = np.repeat(w0[:, None], k, axis=1)
    W_prev = W.copy()
    d0 = float(np.linalg.norm(w0 - game.w_star))
    limit = DIVERGENCE_RATIO * d0 if d0 > 0 else DIVERGENCE_RATIO
    dead = np.zeros(k, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(iters):
            G = A @ W + b
            if extrapolate:
                G = A @ (W - gammas * G) + b
            if t == 0:
                W_next = W - (hs / (1 + ms)) * G
            else:
                W_next = W - hs * G + ms * (W - W_prev)
            W_prev, W = W, W_next
            dist = np.linalg.norm(W - w_star, axis=0)
            bad = ~np.isfinite(dist) | (dist > limit)
            if bad.any():
                dead |= bad
                W[:, bad] = w0[:, None]
                W_prev[:, bad] = w0[:, None]
    final = np.linalg.norm(W - w_star, axis=0)
    final[dead] = np.inf
    return final, dead


def fit_rate(trace, window):
    """Empirical per-iteration contraction factor over ``[t_lo, t_hi]``.

    Least-squares slope of ``log(distance)`` against ``t``, exponentiated.
    """
    t_lo, t_hi = window
    if not 0 <= t_lo < t_hi <= trace.iters:
        raise ValueError(f"window {window} outside trace of {trace.iters} iterations")
    d = trace.distances[t_lo:t_hi + 1]
    floor = FLOOR_RATIO * trace.distances[0]
    if np.any(~np.isfinite(d)) or np.any(d <= floor) or np.any(d <= 0):
        raise ValueError("window touches the numerical floor")
    t = np.arange(t_lo, t_hi + 1, dtype=float)
    slope = np.polyfit(t, np.log(d), 1)[0]
    return float(np.exp(slope))
