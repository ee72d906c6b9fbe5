"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure or
fatal divergence.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict

import numpy as np

from . import polyoracle as po
from .gamegen import build_cross_game, dumps_game, load_game, verify_game
from .harness import ExperimentConfig, reproduce_fig4, write_traces_csv
from .optimizers import run_method
from .spectrum import SpectrumModel, sample_cross
from .tuner import (
    DEFAULT_GRIDS,
    DivergenceError,
    GridSpec,
    egm_rate_expansion,
    eg_rate_bound,
    eg_theory_step,
    gd_rate_bound,
    gd_theory_step,
    gdm_acceleration_threshold,
    grid_search,
    optimal_egm,
)

EXIT_USAGE = 1
EXIT_FATAL = 2


class UsageError(Exception):
    pass


class FatalError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _finite(text):
    x = float(text)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return x


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _params_dict(p):
    return None if p is None else asdict(p)


# -- subcommands -------------------------------------------------------------

def cmd_tune(args):
    mu, L, c = args.mu, args.L, args.c
    try:
        p = optimal_egm(mu, L, c)
    except ValueError as e:
        raise UsageError(str(e))
    exp = egm_rate_expansion(mu, L, c)
    out = {
        "mu": mu, "L": L, "c": c, "tau": mu / L,
        "egm": {"h": p.h, "gamma": p.gamma, "m": p.m,
                "rate_per_iter": math.sqrt(p.m), "rate_per_eval": exp.exact},
        "expansion": {"exact": exp.exact, "first_order": exp.first_order},
        "gdm_cannot_accelerate": gdm_acceleration_threshold(mu, L),
    }
    if c > 0:
        # theory steps need the four extreme points of the cross
        model = SpectrumModel(mu, L, c, (mu + L) / 2)
        spec = sample_cross(model, 2, 1)
        gd, eg = gd_rate_bound(spec), eg_rate_bound(spec, model)
        out["gd"] = {"h": gd_theory_step(spec), "squared_bound": gd.squared_bound,
                     "rate_per_iter": gd.per_iter_bound}
        out["eg"] = {"h": eg_theory_step(spec), "squared_bound": eg.squared_bound,
                     "closed_form_squared_bound": eg.closed_form_squared_bound,
                     "rate_per_iter": eg.per_iter_bound}
    _emit(out)


def cmd_generate(args):
    try:
        model = SpectrumModel(args.mu, args.L, args.c,
                              args.c_prime if args.c_prime is not None else (args.mu + args.L) / 2)
        game = build_cross_game(model, args.n_real, args.n_pairs, seed=args.seed, b_zero=args.b_zero)
    except ValueError as e:
        raise UsageError(str(e))
    report = verify_game(game)
    if not report.ok:
        raise FatalError(f"verification failed: {report.failures()}; nothing written")
    text = dumps_game(game)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)
        _emit({"written": args.out, "dim": game.dim, "d1": game.d1, "d2": game.d2,
               "block_residual": report.block_residual})


def _load(path):
    try:
        return load_game(path)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot read game file {path!r}: {e}")


def _default_params(game, method, args):
    model = game.model
    if method == "EGM":
        if args.h is not None:
            return po.Hyperparams(args.h, args.gamma if args.gamma is not None else 0.0, args.m or 0.0)
        return optimal_egm(model.mu, model.L, model.c)
    if method == "GDM":
        if args.h is None or args.m is None:
            raise UsageError("gdm needs --h and --m")
        return po.Hyperparams(args.h, 0.0, args.m)
    if args.h is not None:
        h = args.h
    elif method == "GD":
        h = gd_theory_step(game.declared)
    else:
        h = eg_theory_step(game.declared)
    return po.Hyperparams(h, h if method == "EG" else 0.0, 0.0)


def cmd_run(args):
    method = args.method.upper()
    if method not in ("GD", "GDM", "EG", "EGM"):
        raise UsageError(f"unknown method {args.method!r}")
    game = _load(args.game)
    try:
        params = _default_params(game, method, args)
    except ValueError as e:
        raise UsageError(str(e))
    w0 = None
    if args.w0 is not None:
        with open(args.w0) as f:
            w0 = np.array(json.load(f), dtype=float)
    try:
        trace = run_method(game, method, params, w0=w0, iters=args.iters)
    except ValueError as e:
        raise UsageError(str(e))
    label = method.lower()
    write_traces_csv(sys.stdout if args.out in (None, "-") else args.out, {label: trace})
    print(json.dumps({"method": label, "params": _params_dict(params), "iters": trace.iters,
                      "diverged": trace.diverged,
                      "final_distance": float(trace.distances[-1])}), file=sys.stderr)


def cmd_grid(args):
    method = args.method.upper()
    if method not in DEFAULT_GRIDS:
        raise UsageError(f"grid supports gd, gdm and eg, not {args.method!r}")
    game = _load(args.game)
    spec = DEFAULT_GRIDS[method]
    if args.h_lo is not None or args.h_hi is not None or args.h_step is not None:
        try:
            spec = GridSpec(
                args.h_lo if args.h_lo is not None else spec.h_lo,
                args.h_hi if args.h_hi is not None else spec.h_hi,
                args.h_step if args.h_step is not None else spec.h_step,
                spec.m_lo, spec.m_hi, spec.m_step,
            )
        except ValueError as e:
            raise UsageError(str(e))
    try:
        res = grid_search(game, method, spec, iters=args.iters)
    except DivergenceError as e:
        raise FatalError(str(e))
    _emit({"method": method.lower(), "best": asdict(res.best), "final_distance": res.final_distance,
           "candidates": res.n_candidates, "diverged": res.n_diverged})


def _complex_json(z):
    return {"re": float(z.real), "im": float(z.imag)}


def cmd_modes(args):
    try:
        p = po.Hyperparams(args.h, args.gamma, args.m)
        mc = po.classify_mode(p)
    except ValueError as e:
        raise UsageError(str(e))
    out = {"case": mc.mode.value, "label": mc.mode.name,
           "h_over_4gamma": p.h / (4 * p.gamma),
           "sigma_inv_minus_one": [_complex_json(z) for z in mc.minus_one],
           "sigma_inv_plus_one": [_complex_json(z) for z in mc.plus_one]}
    if mc.mode is po.Mode.CASE2_COMPLEX_AND_REAL:
        out["robust_region"] = asdict(po.robust_region_case2(p))
    _emit(out)


def cmd_respoly(args):
    lam = complex(args.lam_re, args.lam_im)
    try:
        p = po.Hyperparams(args.h, args.gamma, args.m)
    except ValueError as e:
        raise UsageError(str(e))
    if args.t < 0:
        raise UsageError("--t must be >= 0")
    out = {"lambda": _complex_json(lam), "t": args.t,
           "egm_recurrence": _complex_json(po.residual_egm_recurrence(p, lam, args.t)),
           "gdm_recurrence": _complex_json(po.residual_gdm_recurrence(p, lam, args.t))}
    if p.m > 0:
        out["egm_chebyshev"] = _complex_json(po.residual_egm_chebyshev(p, lam, args.t))
        out["gdm_chebyshev"] = _complex_json(po.residual_gdm(p, lam, args.t))
        out["sigma"] = _complex_json(po.link_sigma(p, lam))
        out["xi"] = _complex_json(po.link_xi(p, lam))
        out["worst_case_bound"] = po.worst_case_rate_bound(p.m, args.t)
    _emit(out)


def cmd_reproduce(args):
    try:
        config = ExperimentConfig(mu=args.mu, L=args.L, c=args.c, c_prime=args.c_prime,
                                  n_real=args.n_real, n_pairs=args.n_pairs, iters=args.iters,
                                  seed=args.seed, b_zero=args.b_zero)
    except ValueError as e:
        raise UsageError(str(e))
    try:
        _, traces, params = reproduce_fig4(args.out, config)
    except DivergenceError as e:
        raise FatalError(str(e))
    except RuntimeError as e:
        raise FatalError(str(e))
    summary = {}
    for label, tr in traces.items():
        p = params[label]
        summary[label] = {
            "params": _params_dict(p) if isinstance(p, po.Hyperparams) else {"h": p},
            "final_distance": float(tr.distances[-1]),
            "final_relative": float(tr.relative()[-1]),
            "diverged": tr.diverged,
        }
    _emit({"outdir": args.out, "series": summary})


# -- parser ------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="egmgames", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_args(p, c_default=None):
        p.add_argument("--mu", type=_finite, default=1.0)
        p.add_argument("--L", type=_finite, default=200.0)
        p.add_argument("--c", type=_finite, default=c_default)

    p = sub.add_parser("tune", help="optimal EGM hyperparameters and theory rates")
    p.add_argument("--mu", type=_finite, required=True)
    p.add_argument("--L", type=_finite, required=True)
    p.add_argument("--c", type=_finite, required=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("generate", help="write a quadratic game file")
    model_args(p, 99.5)
    p.add_argument("--c-prime", type=_finite, default=None, help="default (mu+L)/2")
    p.add_argument("--n-real", type=int, default=100)
    p.add_argument("--n-pairs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--b-zero", action="store_true", help="b = 0 and w_star = 0")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run one method and write a trace CSV")
    p.add_argument("--game", required=True)
    p.add_argument("--method", required=True)
    p.add_argument("--h", type=_finite)
    p.add_argument("--gamma", type=_finite)
    p.add_argument("--m", type=_finite)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--w0", default=None, help="JSON array with the initial point (default zeros)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("grid", help="grid search for gd, gdm or eg")
    p.add_argument("--game", required=True)
    p.add_argument("--method", required=True)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--h-lo", type=_finite)
    p.add_argument("--h-hi", type=_finite)
    p.add_argument("--h-step", type=_finite)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("modes", help="classify EGM hyperparameters")
    p.add_argument("--h", type=_finite, required=True)
    p.add_argument("--gamma", type=_finite, required=True)
    p.add_argument("--m", type=_finite, required=True)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("respoly", help="evaluate residual polynomials")
    p.add_argument("--h", type=_finite, required=True)
    p.add_argument("--gamma", type=_finite, default=0.0)
    p.add_argument("--m", type=_finite, default=0.0)
    p.add_argument("--lam-re", type=_finite, required=True)
    p.add_argument("--lam-im", type=_finite, default=0.0)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_respoly)

    p = sub.add_parser("reproduce-fig4", help="run the six-method comparison")
    model_args(p, 99.5)
    p.add_argument("--c-prime", type=_finite, default=100.5)
    p.add_argument("--n-real", type=int, default=100)
    p.add_argument("--n-pairs", type=int, default=50)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--b-zero", action="store_true")
    p.add_argument("--out", default="fig4_out")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FatalError as e:
        print(f"fatal: {e}", file=sys.stderr)
        return EXIT_FATAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
