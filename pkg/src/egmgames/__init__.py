"""Momentum extragradient on games with cross-shaped Jacobian spectra."""

from .estimators import (
    Extragradient,
    GradientDescent,
    GradientDescentMomentum,
    GridSearchSolver,
    MomentumExtragradient,
    OptimalMomentumExtragradient,
)
from .gamegen import (
    BlockSpec,
    QuadraticGame,
    build_cross_game,
    eval_vector_field,
    load_game,
    save_game,
    verify_game,
)
from .optimizers import RunTrace, fit_rate, run_eg, run_egm, run_gd, run_gdm
from .polyoracle import Hyperparams, classify_mode
from .spectrum import Spectrum, SpectrumModel, contains, extremes, sample_cross
from .tuner import grid_search, optimal_egm, optimal_egm_equal_length

__all__ = [
    "BlockSpec", "Extragradient", "GradientDescent", "GradientDescentMomentum",
    "GridSearchSolver", "Hyperparams", "MomentumExtragradient",
    "OptimalMomentumExtragradient", "QuadraticGame", "RunTrace", "Spectrum",
    "SpectrumModel", "build_cross_game", "classify_mode", "contains",
    "eval_vector_field", "extremes", "fit_rate", "grid_search", "load_game",
    "optimal_egm", "optimal_egm_equal_length", "run_eg", "run_egm", "run_gd",
    "run_gdm", "sample_cross", "save_game", "verify_game",
]
