"""Estimator-style wrappers around the four first-order methods.

Each solver is a scikit-learn ``BaseEstimator``: hyperparameters live in
``__init__``, ``fit(game)`` runs the method and stores ``trace_``,
``w_`` and ``n_vf_evals_``. ``score`` is the negative final distance to
the stationary point, so ``clone`` and ``get_params`` work as usual.

    >>> from egmgames import SpectrumModel, build_cross_game
    >>> game = build_cross_game(SpectrumModel(1, 200, 99.5, 100.5), 100, 50, seed=0)
    >>> est = OptimalMomentumExtragradient(n_iter=400).fit(game)
    >>> bool(est.trace_.relative()[-1] < 1e-12)
    True
"""

import numpy as np
from sklearn.base import BaseEstimator, clone

from .optimizers import run_eg, run_egm, run_gd, run_gdm
from .polyoracle import Hyperparams
from .tuner import GridSpec, grid_search, optimal_egm
from .validation import check_game, check_is_fitted, check_n_iter, check_scalar, check_start


class _SolverMixin:
    def _run(self, game, w0):
        raise NotImplementedError

    def fit(self, game, w0=None):
        game = check_game(game)
        check_n_iter(self.n_iter)
        w0 = check_start(w0, game)
        self.trace_ = self._run(game, w0)
        self.w_ = self.trace_.final_iterate
        self.n_vf_evals_ = int(self.trace_.vf_evals[-1])
        self.diverged_ = self.trace_.diverged
        return self

    def predict(self, game=None):
        """The final iterate, an approximation of the stationary point."""
        check_is_fitted(self)
        return self.w_

    def score(self, game):
        check_is_fitted(self)
        game = check_game(game)
        if not np.all(np.isfinite(self.w_)):
            return -np.inf
        return -float(np.linalg.norm(self.w_ - game.w_star))


class GradientDescent(_SolverMixin, BaseEstimator):
    def __init__(self, h=0.005, n_iter=2000):
        self.h = h
        self.n_iter = n_iter

    def _run(self, game, w0):
        check_scalar(self.h, "h", 0, include_min=False)
        return run_gd(game, self.h, w0, self.n_iter)


class GradientDescentMomentum(_SolverMixin, BaseEstimator):
    def __init__(self, h=0.005, m=0.5, n_iter=2000):
        self.h = h
        self.m = m
        self.n_iter = n_iter

    def _run(self, game, w0):
        check_scalar(self.h, "h", 0, include_min=False)
        check_scalar(self.m, "m", 0, 1, include_max=False)
        return run_gdm(game, self.h, self.m, w0, self.n_iter)


class Extragradient(_SolverMixin, BaseEstimator):
    """EG with the same step for extrapolation and update."""

    def __init__(self, h=0.00125, n_iter=2000):
        self.h = h
        self.n_iter = n_iter

    def _run(self, game, w0):
        check_scalar(self.h, "h", 0, include_min=False)
        return run_eg(game, self.h, w0, self.n_iter)


class MomentumExtragradient(_SolverMixin, BaseEstimator):
    def __init__(self, h=0.03, gamma=0.005, m=0.5, n_iter=2000):
        self.h = h
        self.gamma = gamma
        self.m = m
        self.n_iter = n_iter

    def _run(self, game, w0):
        p = Hyperparams(self.h, self.gamma, self.m)
        return run_egm(game, p, w0, self.n_iter)


class OptimalMomentumExtragradient(_SolverMixin, BaseEstimator):
    """EGM with hyperparameters tuned to a cross spectrum.

    ``mu``, ``L`` and ``c`` default to the values the game was built from
    (``game.model``); pass them explicitly for games without a model.
    """

    def __init__(self, mu=None, L=None, c=None, n_iter=2000):
        self.mu = mu
        self.L = L
        self.c = c
        self.n_iter = n_iter

    def _run(self, game, w0):
        model = game.model
        mu = self.mu if self.mu is not None else getattr(model, "mu", None)
        L = self.L if self.L is not None else getattr(model, "L", None)
        c = self.c if self.c is not None else getattr(model, "c", None)
        if mu is None or L is None or c is None:
            raise ValueError("mu, L and c are required when the game has no spectrum model")
        self.params_ = optimal_egm(mu, L, c)
        return run_egm(game, self.params_, w0, self.n_iter)


_METHODS = {
    GradientDescent: "GD",
    GradientDescentMomentum: "GDM",
    Extragradient: "EG",
}


class GridSearchSolver(BaseEstimator):
    """Exhaustive hyperparameter grid for GD, GDM or EG.

    After ``fit`` the refitted solver is in ``best_estimator_`` and the
    chosen hyperparameters in ``best_params_``.
    """

    def __init__(self, estimator, grid=None, n_iter=2000):
        self.estimator = estimator
        self.grid = grid
        self.n_iter = n_iter

    def fit(self, game, w0=None):
        game = check_game(game)
        check_n_iter(self.n_iter)
        method = _METHODS.get(type(self.estimator))
        if method is None:
            raise TypeError(f"cannot grid-search {type(self.estimator).__name__}")
        if self.grid is not None and not isinstance(self.grid, GridSpec):
            raise TypeError("grid must be a GridSpec")
        w0 = check_start(w0, game)
        res = grid_search(game, method, self.grid, iters=self.n_iter, w0=w0)
        self.best_params_ = {"h": res.best.h}
        if method == "GDM":
            self.best_params_["m"] = res.best.m
        self.best_score_ = -res.final_distance
        self.n_candidates_ = res.n_candidates
        self.n_diverged_ = res.n_diverged
        self.best_estimator_ = clone(self.estimator).set_params(n_iter=self.n_iter, **self.best_params_)
        self.best_estimator_.fit(game, w0)
        return self

    def predict(self, game=None):
        check_is_fitted(self, "best_estimator_")
        return self.best_estimator_.predict(game)

    def score(self, game):
        check_is_fitted(self, "best_estimator_")
        return self.best_estimator_.score(game)
