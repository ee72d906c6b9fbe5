import numpy as np
import pytest

from egmgames.gamegen import QuadraticGame, build_cross_game
from egmgames.spectrum import SpectrumModel

REF_MODEL = SpectrumModel(1.0, 200.0, 99.5, 100.5)


def scalar_game(lam, w_star=None):
    """Game whose Jacobian acts as multiplication by ``lam``.

    Real ``lam`` gives a 1-d game; complex ``lam = a + bi`` the 2x2 block
    ``[[a, -b], [b, a]]``, which multiplies ``x + iy`` by ``lam``.
    """
    lam = complex(lam)
    if lam.imag == 0:
        A = np.array([[lam.real]])
        w_star = np.array([0.7]) if w_star is None else w_star
    else:
        A = np.array([[lam.real, -lam.imag], [lam.imag, lam.real]])
        w_star = np.array([0.7, -0.3]) if w_star is None else w_star
    return QuadraticGame.from_matrix(A, w_star)


def as_complex(v):
    return complex(v[0], v[1]) if v.shape[0] == 2 else complex(v[0])


@pytest.fixture(scope="session")
def ref_model():
    return REF_MODEL


@pytest.fixture(scope="session")
def ref_game():
    return build_cross_game(REF_MODEL, 100, 50, seed=0)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def record_criterion(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture(scope="session")
def fig4_run():
    from egmgames.harness import ExperimentConfig, run_fig4

    return run_fig4(ExperimentConfig())
