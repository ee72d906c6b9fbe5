import json
import time

import numpy as np
import pytest

from egmgames.cli import main
from egmgames.gamegen import load_game
from egmgames.harness import FIG4_SERIES, ExperimentConfig, fig4_start, read_traces_csv, run_fig4

LABELS = sorted(FIG4_SERIES)


def ranking(traces):
    return sorted(traces, key=lambda k: traces[k].distances[-1])


def test_reproduce_fig4_cli(tmp_path, capsys):
    out = tmp_path / "fig4"
    start = time.perf_counter()
    code = main(["reproduce-fig4", "--out", str(out)])
    elapsed = time.perf_counter() - start
    assert code == 0
    assert elapsed < 60, f"reproduce-fig4 took {elapsed:.1f}s"
    summary = json.loads(capsys.readouterr().out)["series"]
    assert sorted(summary) == LABELS

    rows = read_traces_csv(out / "fig4_traces.csv")
    assert sorted(rows) == LABELS
    for label, (it, ev, dist) in rows.items():
        assert it.tolist() == list(range(2001))
        assert ev[-1] == (4000 if label.startswith("eg") else 2000)
        assert dist[-1] == summary[label]["final_distance"]
    finals = {k: v[2][-1] for k, v in rows.items()}
    assert min(finals, key=finals.get) == "egm_optimal"

    svg = (out / "fig4.svg").read_text()
    assert svg.count("<polyline") == 6
    assert all(label in svg for label in LABELS)
    game = load_game(out / "fig4_game.json")
    assert game.dim == 200


def test_orderings_stable_across_seeds(fig4_run):
    reference = ranking(fig4_run[1])
    assert reference[0] == "egm_optimal"
    for seed in (1, 2):
        _, traces, _ = run_fig4(ExperimentConfig(seed=seed))
        assert ranking(traces) == reference, seed


def test_b_zero_variant(fig4_run):
    config = ExperimentConfig(b_zero=True)
    game, traces, _ = run_fig4(config)
    assert not game.w_star.any()
    w0 = fig4_start(config, game)
    assert np.array_equal(w0, fig4_start(config, game)) and w0.any()
    assert ranking(traces) == ranking(fig4_run[1])


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(iters=0)
    with pytest.raises(ValueError):
        ExperimentConfig(mu=-1)
