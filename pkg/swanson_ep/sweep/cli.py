import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from swanson_ep.exceptions import ConfigError, DomainError, InputError, NumericalFailure
from swanson_ep.linalg.poly_utils import discriminant_quartic
from swanson_ep.linalg.spectrum import eig
from swanson_ep.models.phase_utils import classify_phase
from swanson_ep.models.swanson.utils import (
    ETA_GATE_TOL,
    build_matrix,
    char_coeffs_closed,
    closed_form_eigenvalues,
    match_multisets,
    resolve_params,
)
from swanson_ep.sweep.configuration_sweep import SweepConfig, read_config_file
from swanson_ep.sweep.utils import emit_csv, emit_plot_script, first_ep, run_sweep, sweep_transitions
from swanson_ep.sweep.verify import verify_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_MISMATCH = 3

EPILOG = """
delta may be a number or auto-minus / auto-plus (recomputed per point so a pair of
eigenvalues stays at omega); eta may be a number or auto (= -epsilon).
gamma does not enter the pinned-branch spectra, it only has to keep the delta radicand
non-negative: the shipped presets use gamma=2.5, rho=1 on [-3, 1] (minus branch) and
gamma=1, rho=0.5 on [-0.4, 1.4] (plus branch). The sweep grids are choices, not data.
"""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors exit with 1, not argparse's 2
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _model_flags():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="key = value file; flags override its entries")
    for name in ("omega", "gamma", "rho", "epsilon"):
        parent.add_argument(f"--{name}", type=float)
    parent.add_argument("--delta", help="number, auto-minus or auto-plus")
    parent.add_argument("--eta", help="number or auto")
    parent.add_argument("--root-tol", type=float)
    parent.add_argument("--rank-tol", type=float)
    parent.add_argument("--phase-tol", type=float)
    parent.add_argument("--progress", action="store_true", default=None, help="show tqdm progress bars")
    parent.add_argument("-v", "--verbose", action="count", default=0)
    return parent


def _grid_flags():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--param", help="swept parameter (default epsilon)")
    parent.add_argument("--from", dest="t_from", type=float)
    parent.add_argument("--to", dest="t_to", type=float)
    parent.add_argument("--steps", type=int)
    return parent


def build_parser():
    model, grid = _model_flags(), _grid_flags()
    parser = _Parser(
        prog="swanson-ep",
        description="Spectra and exceptional points of the coupled Swanson oscillator matrix.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("spectrum", parents=[model], help="eigenvalues, multiplicities and phase at one point")

    sweep = sub.add_parser("sweep", parents=[model, grid], help="tracked branches over a grid as CSV")
    sweep.add_argument("--out", help="CSV path (default stdout)")
    sweep.add_argument("--plot", help="write a gnuplot script here")
    sweep.add_argument("--style", help="plot labelling: minus or plus")
    sweep.add_argument("--sorted", action="store_true", default=None, help="sorted instead of tracked columns")

    sub.add_parser("find-ep", parents=[model, grid], help="refined transitions and exceptional points")

    verify = sub.add_parser("verify", parents=[model], help="closed forms vs numerical linear algebra")
    verify.add_argument("--samples", type=int)
    verify.add_argument("--seed", type=int)
    return parser


def _config_from_args(args):
    entries = read_config_file(args.config) if args.config else {}
    flags = {
        "omega": args.omega,
        "gamma": args.gamma,
        "rho": args.rho,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "eta": args.eta,
        "root_tol": args.root_tol,
        "rank_tol": args.rank_tol,
        "phase_tol": args.phase_tol,
        "progress": args.progress,
        "param": getattr(args, "param", None),
        "from": getattr(args, "t_from", None),
        "to": getattr(args, "t_to", None),
        "steps": getattr(args, "steps", None),
        "out": getattr(args, "out", None),
        "plot": getattr(args, "plot", None),
        "style": getattr(args, "style", None),
        "sorted": getattr(args, "sorted", None),
        "samples": getattr(args, "samples", None),
        "seed": getattr(args, "seed", None),
    }
    entries.update({k: v for k, v in flags.items() if v is not None})
    return SweepConfig(entries)


def _fmt(z):
    return f"{z.real:+.12g} {z.imag:+.12g}i"


def cmd_spectrum(cfg):
    base = cfg.base_params()
    params = resolve_params(base, cfg.param, base[cfg.param], cfg.delta, cfg.eta)
    if not params.is_canonical:
        logger.warning("gamma, rho, delta, eta are not all >= 0: %s", params.get())
    m = build_matrix(params)
    spec = eig(m, tol=cfg.root_tol, rank_tol=cfg.rank_tol)

    print("params: " + ", ".join(f"{k}={v!r}" for k, v in params.get().items()))
    print(f"canonical: {params.is_canonical}")
    for i, z in enumerate(spec.eigenvalues, start=1):
        print(f"E{i}: {_fmt(z)}  residual={spec.residuals[i - 1]:.2e}")
    for c in spec.clusters:
        print(f"cluster {_fmt(c.value)}: algebraic={c.algebraic} geometric={c.geometric}")
    print(f"phase: {classify_phase(spec, cfg.phase_tol).name}")
    print(f"|discriminant|: {abs(discriminant_quartic(spec.char_poly)):.6e}")

    closed = char_coeffs_closed(params).as_array()
    numeric = spec.char_poly.coeffs[::-1]
    print(f"closed-form coefficient deviation: {np.abs(closed - numeric).max():.3e}")
    if abs(params.eta + params.epsilon) <= ETA_GATE_TOL:
        expected = closed_form_eigenvalues(params)
        _, dev = match_multisets(expected, spec.eigenvalues)
        print("closed form: " + ", ".join(_fmt(z) for z in expected) + f"  max deviation={dev.max():.3e}")
    return EXIT_OK


def cmd_sweep(cfg):
    rows = run_sweep(cfg)
    text = emit_csv(rows)
    if cfg.out:
        Path(cfg.out).write_text(text)
        logger.info("wrote %d rows to %s", len(rows), cfg.out)
    else:
        sys.stdout.write(text)
    if cfg.plot:
        ep_t = first_ep(sweep_transitions(cfg)) if cfg.steps >= 3 else None
        script = emit_plot_script(rows, cfg.style, csv_path=cfg.out or "sweep.csv", ep_t=ep_t, xlabel=cfg.param)
        Path(cfg.plot).write_text(script)
        logger.info("wrote gnuplot script to %s", cfg.plot)
    return EXIT_OK


def cmd_find_ep(cfg):
    if cfg.steps < 3:
        raise ConfigError("find-ep needs steps >= 3")
    candidates = sweep_transitions(cfg)
    for c in candidates:
        print(c)
    print(f"{len(candidates)} candidate(s) on {cfg.param} in [{cfg.t_from!r}, {cfg.t_to!r}]")
    return EXIT_OK


def cmd_verify(cfg):
    report = verify_suite(cfg.samples, cfg.seed, progress=cfg.progress)
    print(report.format())
    return EXIT_OK if report.passed else EXIT_MISMATCH


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "find-ep": cmd_find_ep,
    "verify": cmd_verify,
}


def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as err:
        # --help
        return EXIT_OK if not err.code else EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        cfg = _config_from_args(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, InputError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(cli_main())
