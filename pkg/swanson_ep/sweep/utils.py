import csv
import io
import logging
from dataclasses import dataclass

import numpy as np
from tqdm.auto import tqdm

from swanson_ep.ep.ep_utils import (
    TransitionKind,
    coalescence_metrics,
    find_transitions,
    swanson_family,
    track_branches,
)
from swanson_ep.exceptions import ConfigError, DomainError, InputError, NumericalFailure
from swanson_ep.linalg.poly_utils import discriminant_quartic
from swanson_ep.linalg.spectrum import eig
from swanson_ep.models.phase_utils import PhaseLabel, classify_phase
from swanson_ep.models.swanson.utils import DELTA_MODES, build_matrix, resolve_params

logger = logging.getLogger(__name__)

CSV_HEADER = [
    "t",
    "re_e1",
    "im_e1",
    "re_e2",
    "im_e2",
    "re_e3",
    "im_e3",
    "re_e4",
    "im_e4",
    "max_abs_im",
    "min_gap",
    "abs_disc",
    "phase",
]

PLOT_TITLES = {
    "minus": "delta_- branch: pinned pair at omega, EP at epsilon = -rho",
    "plus": "delta_+ branch: pinned pair at omega, EP at epsilon = rho",
}


@dataclass(frozen=True)
class SweepRow:
    t: float
    branches: tuple
    max_abs_im: float
    min_gap: float
    abs_disc: float
    phase: PhaseLabel

    def values(self):
        out = [self.t]
        for z in self.branches:
            out += [z.real, z.imag]
        return out + [self.max_abs_im, self.min_gap, self.abs_disc]


def sweep_grid(cfg):
    return np.linspace(cfg.t_from, cfg.t_to, cfg.steps)


def _check_radicand(cfg, grid):
    # auto delta must exist on every grid point before any work is done
    if cfg.delta not in DELTA_MODES:
        return
    base = cfg.base_params()
    for t in grid:
        try:
            resolve_params(base, cfg.param, float(t), cfg.delta, cfg.eta)
        except DomainError as err:
            raise ConfigError(f"{cfg.delta} is undefined at {cfg.param}={float(t)!r}: {err}") from err


def run_sweep(cfg, progress=None):
    """One row per grid point, branches tracked across the sweep (or sorted with cfg.sorted)."""
    progress = cfg.progress if progress is None else progress
    grid = sweep_grid(cfg)
    _check_radicand(cfg, grid)
    base = cfg.base_params()

    spectra = []
    for t in tqdm(grid, desc=f"sweep {cfg.param}", disable=not progress):
        t = float(t)
        params = resolve_params(base, cfg.param, t, cfg.delta, cfg.eta)
        if not params.is_canonical:
            logger.debug("non-canonical parameters at %s=%r", cfg.param, t)
        try:
            spectra.append(eig(build_matrix(params), tol=cfg.root_tol, rank_tol=cfg.rank_tol, with_vectors=False))
        except NumericalFailure as err:
            err.t = t
            raise

    if cfg.sorted:
        columns = np.array([s.eigenvalues[np.lexsort((s.eigenvalues.imag, s.eigenvalues.real))] for s in spectra])
    else:
        columns = track_branches(spectra)

    rows = []
    for t, spec, branch in zip(grid, spectra, columns):
        min_gap, _, max_abs_im = coalescence_metrics(spec)
        rows.append(
            SweepRow(
                t=float(t),
                branches=tuple(complex(z) for z in branch),
                max_abs_im=max_abs_im,
                min_gap=min_gap,
                abs_disc=abs(discriminant_quartic(spec.char_poly)),
                phase=classify_phase(spec, cfg.phase_tol),
            )
        )
    return rows


def sweep_transitions(cfg, progress=None):
    """find_transitions on the family a sweep config describes."""
    progress = cfg.progress if progress is None else progress
    _check_radicand(cfg, sweep_grid(cfg))
    family = swanson_family(cfg.base_params(), param=cfg.param, delta_mode=cfg.delta, eta_mode=cfg.eta)
    return find_transitions(
        family,
        cfg.t_from,
        cfg.t_to,
        max(cfg.steps, 3),
        tol=cfg.phase_tol,
        root_tol=cfg.root_tol,
        progress=progress,
    )


def first_ep(candidates):
    for c in candidates:
        if c.kind is TransitionKind.ExceptionalPoint:
            return c.t_star
    return None


def emit_csv(rows):
    if not rows:
        raise InputError("emit_csv needs at least one row")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        # repr gives the shortest string that round-trips to the same float
        writer.writerow([repr(float(v)) for v in row.values()] + [row.phase.name])
    return buf.getvalue()


def emit_plot_script(rows, style, csv_path="sweep.csv", ep_t=None, output_stem=None, xlabel="epsilon"):
    """
    gnuplot script with two panels written to <stem>_re.eps and <stem>_im.eps:
    real parts of the four branches, then imaginary parts. ep_t adds a vertical marker.
    """
    if not rows:
        raise InputError("emit_plot_script needs at least one row")
    if style not in PLOT_TITLES:
        raise InputError(f"unknown plot style {style!r}")
    stem = output_stem or str(csv_path).rsplit(".", 1)[0]
    t0, t1 = rows[0].t, rows[-1].t

    def series(first_col):
        parts = []
        for k in range(4):
            source = f"'{csv_path}'" if k == 0 else "''"
            parts.append(f'{source} every ::1 using 1:{first_col + 2 * k} title "E{k + 1}" with lines lw 2')
        return "plot " + ", \\\n     ".join(parts)

    lines = [
        f"# {PLOT_TITLES[style]}",
        f"# data: {csv_path} ({len(rows)} rows)",
        'set datafile separator ","',
        "set term postscript eps enhanced color",
        f'set xlabel "{xlabel}"',
        f"set xrange [{t0!r}:{t1!r}]",
    ]
    if ep_t is not None:
        ep_t = float(ep_t)
        lines.append(f"set arrow 1 from first {ep_t!r}, graph 0 to first {ep_t!r}, graph 1 nohead lt 0")
    lines += [
        "",
        f'set output "{stem}_re.eps"',
        f'set title "Re E, {PLOT_TITLES[style]}"',
        'set ylabel "Re(E)"',
        series(2),
        "",
        f'set output "{stem}_im.eps"',
        f'set title "Im E, {PLOT_TITLES[style]}"',
        'set ylabel "Im(E)"',
        series(3),
        "",
    ]
    return "\n".join(lines)
