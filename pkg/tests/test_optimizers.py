import numpy as np
import pytest
from conftest import as_complex, scalar_game

from egmgames.gamegen import QuadraticGame
from egmgames.optimizers import (
    RunTrace,
    final_distances_batch,
    fit_rate,
    run_eg,
    run_egm,
    run_gd,
    run_gdm,
    run_method,
)
from egmgames.polyoracle import (
    Hyperparams,
    residual_egm_recurrence,
    residual_gdm_recurrence,
)


def unit_game(lam=1.0):
    # w* = 1 so that w0 = 0 starts at distance 1
    return QuadraticGame.from_matrix([[lam]], [1.0])


def test_gd_geometric():
    tr = run_gd(unit_game(), 0.5, iters=5)
    assert tr.distances.tolist() == [1, 0.5, 0.25, 0.125, 0.0625, 0.03125]


def test_gd_zero_step_is_constant():
    tr = run_gd(unit_game(), 0.0, iters=4)
    assert tr.distances.tolist() == [1.0] * 5


def test_gd_oscillates_at_twice_critical_step():
    tr = run_gd(unit_game(), 2.0, iters=6)
    assert tr.distances.tolist() == [1.0] * 7


def test_gdm_one_step_convergence():
    tr = run_gdm(unit_game(), 1.0, 0.0, iters=3)
    assert tr.distances.tolist() == [1, 0, 0, 0]


def test_eg_factor():
    tr = run_eg(unit_game(), 0.5, iters=10)
    ratios = tr.distances[1:] / tr.distances[:-1]
    assert np.allclose(ratios, 0.75, rtol=0, atol=1e-15)
    assert run_eg(unit_game(), 0.0, iters=3).distances.tolist() == [1.0] * 4


def test_reduction_identities_bitwise(ref_game):
    g = ref_game
    gd = run_gd(g, 0.007, iters=200)
    gdm = run_gdm(g, 0.007, 0.0, iters=200)
    assert np.array_equal(gd.distances, gdm.distances)
    assert np.array_equal(gd.final_iterate, gdm.final_iterate)
    eg = run_eg(g, 0.004, iters=200)
    egm = run_egm(g, Hyperparams(0.004, 0.004, 0.0), iters=200)
    assert np.array_equal(eg.distances, egm.distances)
    assert np.array_equal(eg.final_iterate, egm.final_iterate)


def test_determinism(ref_game):
    p = Hyperparams(0.03, 0.005, 0.6)
    a = run_egm(ref_game, p, iters=50)
    b = run_egm(ref_game, p, iters=50)
    assert np.array_equal(a.distances, b.distances)


@pytest.mark.parametrize("method, per", [("GD", 1), ("GDM", 1), ("EG", 2), ("EGM", 2)])
def test_vf_eval_accounting(method, per):
    p = Hyperparams(0.1, 0.05, 0.3 if method in ("GDM", "EGM") else 0.0)
    tr = run_method(unit_game(), method, p, iters=17)
    assert tr.vf_evals[-1] == 17 * per
    assert np.all(np.diff(tr.vf_evals) == per)
    assert tr.iters == 17 and tr.method == method


def test_divergence_truncates_trace():
    tr = run_gd(unit_game(), 5.0, iters=1000)
    assert tr.diverged
    assert tr.iters < 1000
    assert tr.distances[-1] > 1e12


def test_nonfinite_recorded_as_inf():
    g = QuadraticGame.from_matrix([[1e200]], [1.0])
    tr = run_gd(g, 1e200, iters=10)
    assert tr.diverged and tr.distances[-1] == np.inf


def test_start_validation(ref_game):
    with pytest.raises(ValueError, match="dimension mismatch"):
        run_gd(ref_game, 0.01, w0=np.zeros(3), iters=1)
    with pytest.raises(ValueError):
        run_gd(ref_game, 0.01, iters=0)
    with pytest.raises(ValueError):
        run_method(ref_game, "adam", Hyperparams(0.1), iters=1)


def test_w0_override():
    tr = run_gd(unit_game(), 0.5, w0=[3.0], iters=1)
    assert tr.distances.tolist() == [2.0, 1.0]


# Polynomial oracle: on a linear field the iterate error is the residual
# polynomial at lambda times the initial error.
rng = np.random.default_rng(2024)
LAMS = [complex(x) for x in rng.uniform(1, 200, 4)] + \
       [complex(100.5, b) for b in rng.uniform(-99.5, 99.5, 4)]

CASES = {
    "GD": (Hyperparams(0.004), lambda p, lam, t: residual_gdm_recurrence(Hyperparams(p.h, 0, 0), lam, t)),
    "GDM": (Hyperparams(0.004, 0.0, 0.5), residual_gdm_recurrence),
    "EG": (Hyperparams(0.003, 0.003, 0.0), residual_egm_recurrence),
    "EGM": (Hyperparams(0.0332, 1 / 201, 0.669), residual_egm_recurrence),
}


def _errors(game, method, p, iters):
    # replay the run recording the full error vector each step
    out = []
    for t in range(iters + 1):
        if t == 0:
            out.append(-game.w_star.copy())
        else:
            out.append(run_method(game, method, p, iters=t).final_iterate - game.w_star)
    return out


@pytest.mark.parametrize("method", list(CASES))
@pytest.mark.parametrize("lam", LAMS[::3])
def test_polynomial_identity(method, lam):
    p, poly = CASES[method]
    game = scalar_game(lam)
    e0 = as_complex(-game.w_star)
    for t, e in enumerate(_errors(game, method, p, 60)):
        want = poly(p, lam, t) * e0
        got = as_complex(e)
        # roundoff in the iterate is absolute (~eps |w*|), so measure against |e0|
        assert abs(got - want) <= 1e-9 * abs(e0), (t, got, want)
        if abs(want) >= 1e-3 * abs(e0):
            assert abs(got - want) <= 1e-9 * abs(want), (t, got, want)


def test_fit_rate_examples():
    geo = RunTrace("GD", None, 0.5 ** np.arange(30), np.arange(30))
    assert fit_rate(geo, (0, 29)) == pytest.approx(0.5, abs=1e-12)
    const = RunTrace("GD", None, np.full(10, 3.0), np.arange(10))
    assert fit_rate(const, (2, 9)) == pytest.approx(1.0, abs=1e-15)


def test_fit_rate_rejects_floor_and_bad_window():
    tr = RunTrace("GD", None, 0.1 ** np.arange(20), np.arange(20))
    with pytest.raises(ValueError, match="floor"):
        fit_rate(tr, (0, 19))
    with pytest.raises(ValueError):
        fit_rate(tr, (5, 40))


def test_batch_matches_single_runs(ref_game):
    hs = np.array([0.006, 0.009, 0.012, 0.05])
    ms = np.array([0.0, 0.2, 0.5, 0.1])
    final, dead = final_distances_batch(ref_game, "GDM", hs, ms, iters=300)
    for h, m, f, d in zip(hs, ms, final, dead):
        tr = run_gdm(ref_game, h, m, iters=300)
        assert d == tr.diverged
        if not d:
            assert f == pytest.approx(tr.distances[-1], rel=1e-8, abs=1e-13 * tr.distances[0])
    assert dead[-1] and final[-1] == np.inf


def test_batch_rejects_egm(ref_game):
    with pytest.raises(ValueError):
        final_distances_batch(ref_game, "EGM", [0.1])


def test_egm_reference_converges_by_400(ref_game):
    from egmgames.tuner import optimal_egm

    tr = run_egm(ref_game, optimal_egm(1, 200, 99.5), iters=400)
    assert tr.relative()[-1] <= 1e-12
