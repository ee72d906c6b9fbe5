"""Trace files, the SVG convergence plot and the fig4 comparison pipeline."""

import csv
import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .core import make_rng
from .gamegen import build_cross_game, save_game, verify_game
from .optimizers import run_eg, run_egm, run_gd, run_gdm
from .spectrum import SpectrumModel
from .tuner import (
    DEFAULT_GRIDS,
    eg_theory_step,
    gd_theory_step,
    grid_search,
    optimal_egm_equal_length,
)

log = logging.getLogger(__name__)

CSV_HEADER = ["iter", "vf_evals", "method", "distance"]
SVG_WIDTH, SVG_HEIGHT = 900, 600
LOG_FLOOR = -16.0

# series label -> colour, in legend order
FIG4_SERIES = {
    "egm_optimal": "#1f3a93",
    "gd_theory": "#f39c12",
    "eg_theory": "#8e44ad",
    "gd_grid": "#27ae60",
    "eg_grid": "#8b4513",
    "gdm_grid": "#e74c3c",
}


@dataclass
class ExperimentConfig:
    mu: float = 1.0
    L: float = 200.0
    c: float = 99.5
    c_prime: float = 100.5
    n_real: int = 100
    n_pairs: int = 50
    iters: int = 2000
    seed: int = 0
    b_zero: bool = False
    grids: dict = field(default_factory=lambda: dict(DEFAULT_GRIDS))

    def __post_init__(self):
        if self.iters < 1:
            raise ValueError("iters must be >= 1")
        SpectrumModel(self.mu, self.L, self.c, self.c_prime)

    @property
    def model(self):
        return SpectrumModel(self.mu, self.L, self.c, self.c_prime)


def format_distance(x):
    return format(float(x), ".16e")


def write_traces_csv(target, traces):
    """Write ``{label: RunTrace}`` as long-format CSV, sorted by label then iter.

    ``target`` is a path or an open text stream.
    """
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", newline="") as f:
            return write_traces_csv(f, traces)
    w = csv.writer(target, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for label in sorted(traces):
        tr = traces[label]
        for t, (ev, d) in enumerate(zip(tr.vf_evals, tr.distances)):
            w.writerow([t, int(ev), label, format_distance(d)])


def read_traces_csv(path):
    """Inverse of :func:`write_traces_csv`: ``{label: (iters, vf_evals, distances)}``."""
    rows = {}
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for r in reader:
            rows.setdefault(r["method"], []).append((int(r["iter"]), int(r["vf_evals"]), float(r["distance"])))
    return {k: tuple(np.array(col) for col in zip(*v)) for k, v in rows.items()}


def render_svg(series, iters, title="Relative distance to the stationary point"):
    """Self-contained SVG: log10 relative distance against iteration.

    ``series`` maps label to ``(relative_distances, colour)``.
    """
    left, right, top, bottom = 80, 200, 50, 60
    pw = SVG_WIDTH - left - right
    ph = SVG_HEIGHT - top - bottom
    y_hi = 0.0
    for rel, _ in series.values():
        finite = rel[np.isfinite(rel) & (rel > 0)]
        if finite.size:
            y_hi = max(y_hi, math.ceil(np.log10(finite.max())))
    y_lo = LOG_FLOOR

    def px(t):
        return left + pw * t / max(iters, 1)

    def py(v):
        return top + ph * (y_hi - v) / (y_hi - y_lo)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH / 2 - 100}" y="25" font-size="14">{title}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for e in range(int(y_lo), int(y_hi) + 1, 2):
        y = py(e)
        out.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + pw}" y2="{y:.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end">1e{e}</text>')
    for k in range(6):
        t = iters * k / 5
        x = px(t)
        out.append(f'<text x="{x:.1f}" y="{top + ph + 20}" text-anchor="middle">{int(round(t))}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{SVG_HEIGHT - 15}" text-anchor="middle">iteration</text>')
    out.append(
        f'<text x="20" y="{top + ph / 2}" transform="rotate(-90 20 {top + ph / 2})" '
        'text-anchor="middle">log10 relative distance</text>'
    )
    for i, (label, (rel, colour)) in enumerate(series.items()):
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.log10(rel)
        logs = np.where(np.isnan(logs), y_hi, logs)
        logs = np.clip(logs, y_lo, y_hi)
        pts = " ".join(f"{px(t):.2f},{py(v):.2f}" for t, v in enumerate(logs))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 20 + 20 * i
        out.append(f'<line x1="{left + pw + 15}" y1="{ly}" x2="{left + pw + 40}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 45}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def fig4_start(config, game):
    """Initial point: zero, unless ``b_zero`` puts the solution at zero too,
    in which case a seeded standard-normal start is used."""
    if not config.b_zero:
        return np.zeros(game.dim)
    return make_rng(config.seed + 1).standard_normal(game.dim)


def run_fig4(config):
    """Build the game and run the six fig4 series.

    Returns ``(game, traces, chosen_params)``.
    """
    model = config.model
    game = build_cross_game(model, config.n_real, config.n_pairs, seed=config.seed, b_zero=config.b_zero)
    report = verify_game(game)
    if not report.ok:
        raise RuntimeError(f"generated game failed verification: {report.failures()}")
    w0 = fig4_start(config, game)
    it = config.iters

    params = {
        "egm_optimal": optimal_egm_equal_length(model.mu, model.L),
        "gd_theory": gd_theory_step(game.declared),
        "eg_theory": eg_theory_step(game.declared),
    }
    for method in ("GD", "EG", "GDM"):
        log.info("grid search for %s", method)
        res = grid_search(game, method, config.grids[method], iters=it, w0=w0)
        params[f"{method.lower()}_grid"] = res.best

    traces = {
        "egm_optimal": run_egm(game, params["egm_optimal"], w0, it),
        "gd_theory": run_gd(game, params["gd_theory"], w0, it),
        "eg_theory": run_eg(game, params["eg_theory"], w0, it),
        "gd_grid": run_gd(game, params["gd_grid"].h, w0, it),
        "eg_grid": run_eg(game, params["eg_grid"].h, w0, it),
        "gdm_grid": run_gdm(game, params["gdm_grid"].h, params["gdm_grid"].m, w0, it),
    }
    return game, traces, params


def reproduce_fig4(outdir, config=None):
    """Run the pipeline and write ``fig4_traces.csv``, ``fig4.svg`` and
    ``fig4_game.json`` into ``outdir``."""
    config = ExperimentConfig() if config is None else config
    os.makedirs(outdir, exist_ok=True)
    game, traces, params = run_fig4(config)
    csv_path = os.path.join(outdir, "fig4_traces.csv")
    svg_path = os.path.join(outdir, "fig4.svg")
    write_traces_csv(csv_path, traces)
    series = {label: (traces[label].relative(), colour) for label, colour in FIG4_SERIES.items()}
    with open(svg_path, "w") as f:
        f.write(render_svg(series, config.iters))
    save_game(game, os.path.join(outdir, "fig4_game.json"))
    return game, traces, params
