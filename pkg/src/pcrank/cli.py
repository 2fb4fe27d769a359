"""Command-line front end.

Exit codes: 0 success (or certified), 1 not certified, 2 input error,
3 degenerate input (tied weights, no convergence).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import __version__
from .bounds import certificate_from_gaps, certificate_from_weights, full_certificate, md_bounds
from .errors import NoConvergence, PCError, TiesPresent
from .inconsistency import inconsistency_report
from .io import load_matrix
from .matrix import ScaleBound
from .montecarlo import McConfig, run_experiment, write_outputs
from .prioritize import evm, gmm
from .rankstats import kendall_tau, manhattan_distance, ordinal_ranking, spearman_rho

EXIT_OK, EXIT_NOT_CERTIFIED, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(fmt: str, data: dict, plain: str) -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, value in data.items():
            w.writerow([key, json.dumps(value) if isinstance(value, (list, dict)) else value])
        print(buf.getvalue(), end="")
    else:
        print(plain)


def _labels(order) -> str:
    return " > ".join(f"O{i + 1}" for i in order)


def cmd_rank(args) -> int:
    m = load_matrix(args.input)
    methods = {"ev": ["ev"], "gm": ["gm"], "both": ["ev", "gm"]}[args.method]
    vectors = {}
    if "ev" in methods:
        vectors["ev"] = evm(m, args.tol)
    if "gm" in methods:
        vectors["gm"] = gmm(m)
    rankings = {k: ordinal_ranking(v) for k, v in vectors.items()}

    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["object", *methods, *(f"rank_{k}" for k in methods)])
        for i in range(m.n):
            w.writerow([i, *(repr(float(vectors[k].weights[i])) for k in methods),
                        *(rankings[k].rank_of[i] for k in methods)])
        print(buf.getvalue(), end="")
        return EXIT_OK

    data = {"n": m.n}
    for k, v in vectors.items():
        data[k] = {
            "weights": v.tolist(),
            "order": list(rankings[k].order),
            "rank_of": list(rankings[k].rank_of),
            "tied": rankings[k].tied,
        }
        if v.lambda_max is not None:
            data[k]["lambda_max"] = v.lambda_max
    lines = ["object  " + "  ".join(f"{k.upper():>10}" for k in methods)]
    for i in range(m.n):
        lines.append(f"O{i + 1:<6} " + "  ".join(f"{vectors[k].weights[i]:10.6f}" for k in methods))
    if "ev" in vectors:
        lines.append(f"lambda_max = {vectors['ev'].lambda_max:.10g}")
    for k in methods:
        tie = " (ties)" if rankings[k].tied else ""
        lines.append(f"{k.upper()} ranking: {_labels(rankings[k].order)}{tie}")
    _emit("json" if args.format == "json" else "plain", data, "\n".join(lines))
    return EXIT_OK


def cmd_inconsistency(args) -> int:
    rep = inconsistency_report(load_matrix(args.input), args.tol)
    plain = "\n".join(f"{k:<11}= {v:.10g}" for k, v in rep.to_dict().items())
    _emit(args.format, rep.to_dict(), plain)
    return EXIT_OK


def _certificate_text(cert: dict) -> str:
    lines = [f"{k:<12}= {v}" for k, v in cert.items()]
    verdict = "CERTIFIED: EV and GM rankings are identical" if cert["prop1_holds"] else "not certified"
    return "\n".join([*lines, verdict])


def cmd_certify(args) -> int:
    if args.input is not None:
        cert = full_certificate(load_matrix(args.input), args.tol)
    elif args.ki is None:
        raise argparse.ArgumentTypeError("certify needs --input, or --ki with --weights or --d/--n")
    elif args.weights is not None:
        w = [float(x) for x in args.weights.split(",")]
        cert = certificate_from_weights(w, args.ki)
    elif args.d is not None and args.n is not None:
        cert = certificate_from_gaps(args.n, args.ki, args.d, args.dstar)
    else:
        raise argparse.ArgumentTypeError("bounds-only mode needs --weights, or both --d and --n")
    data = cert.to_dict()
    _emit(args.format, data, _certificate_text(data))
    return EXIT_OK if cert.prop1_holds else EXIT_NOT_CERTIFIED


def cmd_compare(args) -> int:
    m = load_matrix(args.input)
    ev, gm = evm(m, args.tol), gmm(m)
    rep = inconsistency_report(m, args.tol)
    r_ev, r_gm = ordinal_ranking(ev), ordinal_ranking(gm)
    lower, upper = md_bounds(rep.ki)
    data = {
        "n": m.n,
        "ki": rep.ki,
        "md": manhattan_distance(ev, gm),
        "md_lower": lower,
        "md_upper": upper,
        "tau": kendall_tau(r_ev, r_gm),
        "rho": spearman_rho(r_ev, r_gm),
        "ev_order": list(r_ev.order),
        "gm_order": list(r_gm.order),
    }
    plain = "\n".join([
        f"EV ranking: {_labels(r_ev.order)}",
        f"GM ranking: {_labels(r_gm.order)}",
        f"KI         = {rep.ki:.10g}",
        f"MD         = {data['md']:.10g}",
        f"MD bounds  = [{lower:.10g}, {upper:.10g}]",
        f"tau        = {data['tau']:.10g}",
        f"rho        = {data['rho']:.10g}",
    ])
    _emit(args.format, data, plain)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    try:
        cfg = McConfig(
            n=args.n,
            base_count=args.bases,
            beta_start=args.beta_start,
            beta_step=args.beta_step,
            beta_end=args.beta_max,
            master_seed=args.seed,
            clamp=None if args.clamp is None else ScaleBound.symmetric(args.clamp),
            ki_bins=args.ki_bins,
            ci_bins=args.ci_bins,
            tol=args.tol,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    result = run_experiment(cfg, workers=args.workers)
    paths = write_outputs(result, args.out)
    if args.format == "json":
        print(result.to_json(), end="")
    else:
        print(f"trials: {result.total_trials}")
        print(f"meeting condition: {result.trials_meeting_condition} "
              f"({100 * result.fraction_meeting:.3f}%)")
        print(f"tied trials: {result.tied_trial_count}, failed: {result.failed_trial_count}")
        for name, count in result.checks.items():
            print(f"{name}: {count}")
        for name, path in paths.items():
            print(f"wrote {name}: {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pcrank", description="EV/GM priority analysis of pairwise comparison matrices")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--tol", type=float, default=1e-12, help="power-iteration tolerance")

    s = sub.add_parser("rank", parents=[common], help="priority vectors and rankings")
    s.add_argument("--input", required=True)
    s.add_argument("--method", choices=("ev", "gm", "both"), default="both")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("inconsistency", parents=[common], help="KI, kappa, lambda_max, CI")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_inconsistency)

    s = sub.add_parser("certify", parents=[common], help="rank-stability certificate")
    s.add_argument("--input")
    s.add_argument("--ki", type=float, help="bounds-only: inconsistency index")
    s.add_argument("--d", type=float, help="bounds-only: smallest adjacent EV gap")
    s.add_argument("--dstar", type=float, help="bounds-only: gap between the top two EV weights")
    s.add_argument("--n", type=int, help="bounds-only: number of objects")
    s.add_argument("--weights", help="bounds-only: comma-separated EV weights instead of --d/--dstar/--n")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("compare", parents=[common], help="MD, tau and rho between EV and GM")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("montecarlo", parents=[common], help="run the disturbance study")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--bases", type=int, default=250)
    s.add_argument("--beta-start", type=float, default=1.0)
    s.add_argument("--beta-max", type=float, default=30.0)
    s.add_argument("--beta-step", type=float, default=0.02)
    s.add_argument("--seed", type=int, default=McConfig.master_seed)
    s.add_argument("--clamp", type=float, nargs="?", const=9.0, default=None,
                   help="clip disturbed comparisons to [1/HI, HI] (default HI = 9)")
    s.add_argument("--ki-bins", type=int, default=50)
    s.add_argument("--ci-bins", type=int, default=50)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default="mc_out")
    s.set_defaults(func=cmd_montecarlo)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (TiesPresent, NoConvergence) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (PCError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
