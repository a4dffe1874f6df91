import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.optimize import bisect, linear_sum_assignment, minimize_scalar
from tqdm.auto import tqdm

from swanson_ep.exceptions import DomainError, InputError, NumericalFailure
from swanson_ep.linalg.matrix_utils import as_complex_matrix, inf_norm, rank
from swanson_ep.linalg.spectrum import DEFAULT_ROOT_TOL, eig
from swanson_ep.models.swanson.utils import build_matrix, resolve_params

logger = logging.getLogger(__name__)

BISECT_MAXITER = 100
GOLDEN_MAXITER = 200
REFINE_XTOL = 1e-10
# full coalescence accepted when the largest gap is below this times (1 + |center|)
COALESCENCE_GAP = 1e-3
NEAR_COALESCENCE_RANK_TOL = 1e-6
JORDAN_TOL = 1e-6
# real/complex boundaries this many grid steps from a coalescence are folded into it
MERGE_STEPS = 2


class TransitionKind(Enum):
    RealComplexTransition = "RealComplexTransition"
    Degeneracy = "Degeneracy"
    ExceptionalPoint = "ExceptionalPoint"


@dataclass(frozen=True)
class MatrixFamily:
    evaluate: Callable[[float], np.ndarray]
    name: str = "t"
    interval: tuple = (-math.inf, math.inf)

    def __call__(self, t):
        lo, hi = self.interval
        slack = 1e-12 * (1.0 + abs(t))
        if t < lo - slack or t > hi + slack:
            raise DomainError(f"{self.name}={t!r} outside the validity interval [{lo}, {hi}]")
        return as_complex_matrix(self.evaluate(t))


@dataclass(frozen=True)
class EpCandidate:
    t_star: float
    cluster_value: complex
    algebraic_multiplicity: int
    geometric_multiplicity: int
    jordan_chain_length: Optional[int]
    max_gap_at_t: float
    kind: TransitionKind

    def __post_init__(self):
        # plain float, so repr(t_star) parses back
        object.__setattr__(self, "t_star", float(self.t_star))

    def __str__(self):
        jordan = "not probed" if self.jordan_chain_length is None else str(self.jordan_chain_length)
        return (
            f"{self.kind.value} t*={self.t_star!r} value={self.cluster_value:.10g} "
            f"am={self.algebraic_multiplicity} gm={self.geometric_multiplicity} "
            f"jordan={jordan} max_gap={self.max_gap_at_t:.3e}"
        )


def swanson_family(base, param="epsilon", delta_mode="auto-plus", eta_mode="auto"):
    """
    One-parameter family of coupling matrices. For the auto delta modes
    swept in epsilon the validity interval is where the delta radicand is >= 0.
    """
    base = dict(base)
    interval = (-math.inf, math.inf)
    if param == "epsilon" and delta_mode in ("auto-minus", "auto-plus"):
        g, r = abs(base["gamma"]), base["rho"]
        center = -r if delta_mode == "auto-minus" else r
        interval = (center - g, center + g)

    def evaluate(t):
        return build_matrix(resolve_params(base, param, t, delta_mode, eta_mode))

    return MatrixFamily(evaluate=evaluate, name=param, interval=interval)


def _pair_gaps(values):
    values = np.asarray(values)
    iu, ju = np.triu_indices(values.size, k=1)
    return np.sort(np.abs(values[iu] - values[ju]))


def coalescence_metrics(spec):
    """(min_gap, sorted pairwise gaps, max |Im|) of the reported eigenvalues."""
    values = spec.eigenvalues if hasattr(spec, "eigenvalues") else np.asarray(spec)
    gaps = _pair_gaps(values)
    return float(gaps[0]), gaps, float(np.max(np.abs(np.imag(values))))


def geometric_multiplicity(m, lam, tol=1e-8):
    a = as_complex_matrix(m)
    n = a.shape[0]
    return n - rank(a - lam * np.eye(n), tol)


def jordan_chain_length(m, lam, tol=1e-8, root_tol=DEFAULT_ROOT_TOL):
    """
    Nilpotency index of N = (m - lam I)/||m - lam I||_inf: smallest k with
    ||N^k||_inf <= tol. Only defined when every eigenvalue sits at lam.
    """
    a = as_complex_matrix(m)
    n = a.shape[0]
    spec = eig(a, tol=root_tol, with_vectors=False)
    if np.any(np.abs(spec.roots - lam) > spec.cluster_radius):
        raise DomainError(
            f"jordan_chain_length needs all {n} eigenvalues at {lam}; "
            f"farthest is {np.max(np.abs(spec.roots - lam)):.3e} away"
        )
    shifted = a - lam * np.eye(n)
    norm = inf_norm(shifted)
    if norm == 0:
        return 1
    nil = shifted / norm
    power = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        power = power @ nil
        if inf_norm(power) <= tol:
            return k
    raise NumericalFailure(f"(m - lam I)^k did not vanish for k <= {n} at tol {tol:g}")


def track_branches(spectra):
    """
    Continuous branches: each step is matched to the previous one by the
    minimal total-distance assignment. Returns an array of shape (steps, n).
    """
    if len(spectra) < 2:
        raise InputError("track_branches needs at least 2 spectra")
    rows = [np.asarray(s.eigenvalues if hasattr(s, "eigenvalues") else s, dtype=np.complex128) for s in spectra]
    tracked = np.empty((len(rows), rows[0].size), dtype=np.complex128)
    tracked[0] = rows[0]
    for k in range(1, len(rows)):
        cost = np.abs(tracked[k - 1][:, None] - rows[k][None, :])
        branch, col = linear_sum_assignment(cost)
        tracked[k, branch] = rows[k][col]
    return tracked


class _Scanner:
    """Caches spectra of a family so refinement never recomputes a point."""

    def __init__(self, family, root_tol):
        self.family = family
        self.root_tol = root_tol
        self._cache = {}

    def spectrum(self, t):
        t = float(t)
        if t not in self._cache:
            try:
                self._cache[t] = eig(self.family(t), tol=self.root_tol, with_vectors=False)
            except NumericalFailure as err:
                err.t = t
                raise
        return self._cache[t]

    def max_abs_im(self, t):
        return float(np.max(np.abs(self.spectrum(t).eigenvalues.imag)))

    def max_gap(self, t):
        return float(_pair_gaps(self.spectrum(t).roots)[-1])

    def min_gap(self, t):
        return float(_pair_gaps(self.spectrum(t).roots)[0])


def _golden(objective, t_lo, t_hi, bracket):
    # golden's stopping rule is relative to |x|; work in s = 1 + (t - t_lo)/width
    width = t_hi - t_lo

    def to_t(s):
        return t_lo + (s - 1.0) * width

    try:
        res = minimize_scalar(
            lambda s: objective(to_t(s)),
            bracket=tuple(1.0 + (b - t_lo) / width for b in bracket),
            method="golden",
            options={"xtol": REFINE_XTOL, "maxiter": GOLDEN_MAXITER},
        )
    except ValueError:
        # grid minimum did not survive re-evaluation
        logger.debug("no bracket around t=%r", bracket[1])
        return None, None
    if not res.success:
        raise NumericalFailure(
            f"golden-section refinement failed near t={bracket[1]!r}: {res.message}",
            iterates=np.array([to_t(res.x)]),
            residuals=np.array([res.fun]),
            t=float(bracket[1]),
        )
    return float(to_t(res.x)), float(res.fun)


def _bounded(objective, t_lo, t_hi, a, b):
    """Minimum of objective on the closed cell [a, b], for minima the grid cannot bracket."""
    width = t_hi - t_lo

    def to_t(s):
        return t_lo + (s - 1.0) * width

    res = minimize_scalar(
        lambda s: objective(to_t(s)),
        bounds=(1.0 + (a - t_lo) / width, 1.0 + (b - t_lo) / width),
        method="bounded",
        options={"xatol": REFINE_XTOL, "maxiter": GOLDEN_MAXITER},
    )
    if not res.success:
        raise NumericalFailure(
            f"bounded refinement failed in [{a!r}, {b!r}]: {res.message}",
            iterates=np.array([to_t(res.x)]),
            residuals=np.array([res.fun]),
            t=float(a),
        )
    # the bounded search never evaluates the cell ends themselves
    gap, t = min((float(res.fun), float(to_t(res.x))), (objective(a), float(a)), (objective(b), float(b)))
    return t, gap


def _strict_minima(values):
    return [k for k in range(1, len(values) - 1) if values[k] < values[k - 1] and values[k] < values[k + 1]]


def _cluster_structure(scanner, t, rank_tol, full):
    """Cluster at t with the largest multiplicity and its Jordan structure."""
    spec = scanner.spectrum(t)
    m = scanner.family(t)
    cluster = max(spec.clusters, key=lambda c: (c.algebraic, -abs(c.value.imag)))
    am = cluster.algebraic
    gm = min(am, max(1, geometric_multiplicity(m, cluster.value, rank_tol)))
    jordan = None
    if full and am == spec.n:
        jordan = jordan_chain_length(m, cluster.value, tol=JORDAN_TOL, root_tol=scanner.root_tol)
    return cluster.value, am, gm, jordan


def find_transitions(
    family,
    t_lo,
    t_hi,
    steps,
    tol=1e-8,
    root_tol=DEFAULT_ROOT_TOL,
    rank_tol=NEAR_COALESCENCE_RANK_TOL,
    progress=False,
):
    """
    Scan a family on a grid and refine:
      - real/complex boundaries (sign change of max|Im| - tol) by bisection,
      - full coalescences (grid minima of the largest pairwise gap) by golden section,
        or by a bounded search when the minimum sits in the first or last cell,
      - isolated pair degeneracies (grid minima of the smallest gap) by golden section.
    The quartic discriminant is no use here: on the pinned branches it is zero everywhere.
    """
    if not t_lo < t_hi:
        raise InputError(f"need t_lo < t_hi, got [{t_lo}, {t_hi}]")
    if steps < 3:
        raise InputError(f"need steps >= 3, got {steps}")
    lo, hi = family.interval
    if t_lo < lo or t_hi > hi:
        raise InputError(f"[{t_lo}, {t_hi}] is not inside the validity interval [{lo}, {hi}] of {family.name}")

    scanner = _Scanner(family, root_tol)
    grid = np.linspace(t_lo, t_hi, steps)
    step = grid[1] - grid[0]
    for t in tqdm(grid, desc=f"scan {family.name}", disable=not progress):
        scanner.spectrum(t)

    im = np.array([scanner.max_abs_im(t) for t in grid])
    max_gap = np.array([scanner.max_gap(t) for t in grid])
    min_gap = np.array([scanner.min_gap(t) for t in grid])
    xtol = REFINE_XTOL * (t_hi - t_lo)

    def accept_threshold(t):
        return COALESCENCE_GAP * (1.0 + abs(scanner.spectrum(t).roots.mean()))

    candidates = []
    coalesced = []

    def coalescence(t_star, gap):
        # returns True when t_star is accepted as a full coalescence
        if t_star is None:
            return False
        if gap > accept_threshold(t_star):
            logger.debug("max-gap minimum at t=%r rejected (gap %.3e)", t_star, gap)
            return False
        if any(abs(t_star - c) <= 10 * xtol for c in coalesced):
            return True
        value, am, gm, jordan = _cluster_structure(scanner, t_star, rank_tol, full=True)
        kind = TransitionKind.ExceptionalPoint if gm < am else TransitionKind.Degeneracy
        logger.info("coalescence at %s=%r: am=%d gm=%d jordan=%s", family.name, t_star, am, gm, jordan)
        candidates.append(EpCandidate(t_star, complex(value), am, gm, jordan, gap, kind))
        coalesced.append(t_star)
        return True

    for k in _strict_minima(max_gap):
        coalescence(*_golden(scanner.max_gap, t_lo, t_hi, (grid[k - 1], grid[k], grid[k + 1])))
    # minima in the first or last cell have no grid bracket
    if max_gap[0] < max_gap[1]:
        coalescence(*_bounded(scanner.max_gap, t_lo, t_hi, grid[0], grid[1]))
    if max_gap[-1] < max_gap[-2]:
        coalescence(*_bounded(scanner.max_gap, t_lo, t_hi, grid[-2], grid[-1]))

    for k in _strict_minima(min_gap):
        threshold = accept_threshold(grid[k])
        if min_gap[k - 1] <= threshold or min_gap[k + 1] <= threshold:
            continue
        if any(abs(grid[k] - c) <= MERGE_STEPS * step for c in coalesced):
            continue
        t_star, gap = _golden(scanner.min_gap, t_lo, t_hi, (grid[k - 1], grid[k], grid[k + 1]))
        if t_star is None or gap > accept_threshold(t_star):
            continue
        value, am, gm, _ = _cluster_structure(scanner, t_star, rank_tol, full=False)
        candidates.append(
            EpCandidate(t_star, complex(value), am, gm, None, scanner.max_gap(t_star), TransitionKind.Degeneracy)
        )

    def excess(t):
        return scanner.max_abs_im(t) - tol

    for k in range(steps - 1):
        a, b = grid[k], grid[k + 1]
        if (im[k] > tol) == (im[k + 1] > tol):
            continue
        if any(abs(a - c) <= MERGE_STEPS * step or abs(b - c) <= MERGE_STEPS * step for c in coalesced):
            continue
        try:
            t_star = float(bisect(excess, a, b, xtol=xtol, maxiter=BISECT_MAXITER))
        except (RuntimeError, ValueError) as err:
            raise NumericalFailure(f"bisection failed in [{a!r}, {b!r}]: {err}", t=float(a)) from err
        # the cluster that turns complex, read off on the broken side
        broken = a if im[k] > tol else b
        spec = scanner.spectrum(broken)
        target = spec.eigenvalues[np.argmax(np.abs(spec.eigenvalues.imag))].real
        here = scanner.spectrum(t_star)
        cluster = min(here.clusters, key=lambda c: abs(c.value - target))
        if cluster.algebraic == here.n and coalescence(*_bounded(scanner.max_gap, t_lo, t_hi, a, b)):
            # all eigenvalues meet here: a coalescence the max-gap scan did not bracket
            continue
        gm = min(
            cluster.algebraic,
            max(1, geometric_multiplicity(family(t_star), cluster.value, rank_tol)),
        )
        candidates.append(
            EpCandidate(
                t_star,
                complex(cluster.value),
                cluster.algebraic,
                gm,
                None,
                scanner.max_gap(t_star),
                TransitionKind.RealComplexTransition,
            )
        )

    return sorted(candidates, key=lambda c: c.t_star)
