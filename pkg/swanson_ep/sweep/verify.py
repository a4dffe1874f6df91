"""
Oracle suite: the closed forms of the coupling model against the numerical
linear algebra, on seeded random draws.

1. coefficients    closed-form quartic coefficients vs Faddeev-LeVerrier
2. closed form     closed-form eigenvalues vs eig, eta = -epsilon
3. pinned pair     omega is a (>= double) eigenvalue on both delta branches
4. branch spectra  branch formulas vs eig
5. EP structure    rank(M - omega I) = 3 and a Jordan chain of length 4 at epsilon = -+rho
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from tqdm.auto import tqdm

from swanson_ep.ep.ep_utils import jordan_chain_length
from swanson_ep.exceptions import InputError, NumericalFailure
from swanson_ep.linalg.matrix_utils import rank
from swanson_ep.linalg.poly_utils import char_poly
from swanson_ep.linalg.spectrum import eig
from swanson_ep.models.swanson.configuration_swanson import ModelParams
from swanson_ep.models.swanson.utils import (
    branch_spectrum_minus,
    branch_spectrum_plus,
    build_matrix,
    char_coeffs_closed,
    closed_form_eigenvalues,
    delta_minus,
    delta_plus,
    match_multisets,
)

logger = logging.getLogger(__name__)

COEFF_TOL = 1e-10
SIMPLE_TOL = 1e-8
CLUSTER_TOL = 1e-3
# an expected eigenvalue closer than this to another one counts as clustered
CLUSTER_GAP = 1e-2
COEFF_NAMES = ("p", "q", "r", "s")


@dataclass
class CheckResult:
    name: str
    draws: int = 0
    max_deviation: float = 0.0
    worst_ratio: float = 0.0
    failures: int = 0
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return self.failures == 0

    def record(self, deviation, limit, note=None, count=True):
        if count:
            self.draws += 1
        self.max_deviation = max(self.max_deviation, deviation)
        ratio = deviation / limit if limit > 0 else (0.0 if deviation == 0 else np.inf)
        self.worst_ratio = max(self.worst_ratio, ratio)
        if not ratio <= 1.0:
            self.failures += 1
            if note and len(self.notes) < 5:
                self.notes.append(note)


@dataclass
class VerifyReport:
    samples: int
    seed: int
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def format(self):
        lines = [f"verify: samples={self.samples} seed={self.seed}"]
        for i, c in enumerate(self.checks, start=1):
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"  {i}. {c.name:<16} {status}  draws={c.draws:<5d} "
                f"max_dev={c.max_deviation:.3e}  worst/limit={c.worst_ratio:.3e}"
            )
            lines += [f"       {note}" for note in c.notes]
        lines.append("all checks passed" if self.passed else "MISMATCH FOUND")
        return "\n".join(lines)


def _draw_general(rng, signed):
    omega = rng.uniform(0.5, 3.0)
    gamma, rho, epsilon, delta, eta = rng.uniform(0.0, 2.0, size=5)
    if signed:
        epsilon, eta = rng.uniform(-2.0, 2.0, size=2)
    return ModelParams(omega, gamma, rho, epsilon, delta, eta)


def _draw_branch(rng, branch):
    omega = rng.uniform(0.5, 3.0)
    rho = rng.uniform(0.1, 2.0)
    epsilon = rng.uniform(-2.0, 2.0)
    shift = epsilon + rho if branch == "minus" else epsilon - rho
    gamma = abs(shift) + rng.uniform(0.0, 2.0)
    delta = delta_minus(gamma, epsilon, rho) if branch == "minus" else delta_plus(gamma, epsilon, rho)
    return ModelParams(omega, gamma, rho, epsilon, delta, -epsilon)


def _expected_tolerances(expected):
    dist = np.abs(expected[:, None] - expected[None, :])
    np.fill_diagonal(dist, np.inf)
    return np.where(dist.min(axis=1) > CLUSTER_GAP, SIMPLE_TOL, CLUSTER_TOL)


def _record_multiset(check, expected, found, params):
    _, dev = match_multisets(expected, found)
    tols = _expected_tolerances(expected)
    worst = int(np.argmax(dev / tols))
    check.record(dev[worst], tols[worst], note=f"deviation {dev[worst]:.3e} at {params.get()}")


def _check_coefficients(rng, samples, coeffs_fn, progress):
    check = CheckResult("coefficients")
    worst_term = None
    for signed in (False, True):
        for _ in tqdm(range(samples), desc="coefficients", disable=not progress):
            params = _draw_general(rng, signed)
            closed = coeffs_fn(params).as_array()
            numeric = char_poly(build_matrix(params)).coeffs[::-1]
            diff = np.abs(closed - numeric)
            # relative per coefficient, absolute below magnitude 1
            rel = diff / np.maximum(np.abs(numeric), 1.0)
            idx = int(np.argmax(rel))
            dev = float(rel[idx])
            term = COEFF_NAMES[idx]
            check.record(dev, COEFF_TOL, note=f"differing term {term}: closed - numeric = {closed[idx] - numeric[idx]:.6g} at {params.get()}")
            if dev > COEFF_TOL:
                worst_term = term
    if worst_term is not None:
        logger.warning("coefficient mismatch, differing term %s", worst_term)
    return check


def _check_closed_form(rng, samples, progress):
    check = CheckResult("closed form")
    for _ in tqdm(range(samples), desc="closed form", disable=not progress):
        omega = rng.uniform(0.5, 3.0)
        gamma, rho, epsilon, delta = rng.uniform(0.0, 2.0, size=4)
        params = ModelParams(omega, gamma, rho, epsilon, delta, -epsilon)
        try:
            found = eig(build_matrix(params), with_vectors=False).eigenvalues
        except NumericalFailure as err:
            check.record(np.inf, SIMPLE_TOL, note=f"eig failed: {err}")
            continue
        _record_multiset(check, closed_form_eigenvalues(params), found, params)
    return check


def _branch_spectrum(params, branch):
    fn = branch_spectrum_minus if branch == "minus" else branch_spectrum_plus
    return fn(params.omega, params.gamma, params.rho, params.epsilon)


def _branches(draws):
    return [branch for branch in ("minus", "plus") for _ in range(draws)]


def _check_pinned_pair(rng, draws, progress):
    check = CheckResult("pinned pair")
    for branch in tqdm(_branches(draws), desc="pinned pair", disable=not progress):
        params = _draw_branch(rng, branch)
        spec = eig(build_matrix(params), with_vectors=False)
        expected = _branch_spectrum(params, branch)
        outer = np.abs(expected - params.omega).max()
        limit = SIMPLE_TOL if outer > CLUSTER_GAP else CLUSTER_TOL
        near = np.argsort(np.abs(spec.eigenvalues - params.omega), kind="stable")[:2]
        dev = np.abs(spec.eigenvalues[near] - params.omega).max()
        if spec.cluster_of(int(near[0])).algebraic < 2:
            dev = np.inf
        check.record(dev, limit, note=f"{branch}: omega off by {dev:.3e} at {params.get()}")
    return check


def _check_branch_spectra(rng, draws, progress):
    check = CheckResult("branch spectra")
    for branch in tqdm(_branches(draws), desc="branch spectra", disable=not progress):
        params = _draw_branch(rng, branch)
        found = eig(build_matrix(params), with_vectors=False).eigenvalues
        expected = _branch_spectrum(params, branch)
        _record_multiset(check, expected, found, params)
        if branch == "plus" and params.rho - params.epsilon > CLUSTER_GAP:
            # broken side: exactly one conjugate pair, centred on omega
            complex_ = found[np.abs(found.imag) > SIMPLE_TOL]
            ok = complex_.size == 2 and np.all(np.abs(complex_.real - params.omega) <= SIMPLE_TOL)
            check.record(
                0.0 if ok else np.inf, SIMPLE_TOL, note=f"plus: no single conjugate pair at {params.get()}", count=False
            )
    return check


def _check_ep_structure(rng, draws, progress):
    check = CheckResult("EP structure")
    for branch in tqdm(_branches(draws), desc="EP structure", disable=not progress):
        omega = rng.uniform(0.5, 3.0)
        gamma = rng.uniform(0.2, 2.0)
        rho = rng.uniform(0.1, 2.0)
        if branch == "minus":
            params = ModelParams(omega, gamma, rho, -rho, delta_minus(gamma, -rho, rho), rho)
        else:
            params = ModelParams(omega, gamma, rho, rho, delta_plus(gamma, rho, rho), -rho)
        m = build_matrix(params)
        r = rank(m - omega * np.eye(4), 1e-8)
        try:
            j = jordan_chain_length(m, omega, tol=1e-8)
        except (NumericalFailure, ValueError) as err:
            check.record(np.inf, 1.0, note=f"jordan chain failed: {err}")
            continue
        dev = abs(r - 3) + abs(j - 4)
        check.record(float(dev), 0.0, note=f"rank {r}, jordan {j} at {params.get()}")
    return check


def verify_suite(samples, seed, coeffs_fn=None, progress=False):
    """
    Runs the five checks on draws from np.random.default_rng(seed). Check 1 uses
    `samples` non-negative and `samples` signed draws, check 2 `samples`, checks
    3-5 samples // 5 (at least 1) on each delta branch. coeffs_fn replaces the
    closed-form coefficients.
    """
    if samples < 1:
        raise InputError(f"samples must be >= 1, got {samples}")
    coeffs_fn = char_coeffs_closed if coeffs_fn is None else coeffs_fn
    rng = np.random.default_rng(seed)
    draws = max(1, samples // 5)
    checks = [
        _check_coefficients(rng, samples, coeffs_fn, progress),
        _check_closed_form(rng, samples, progress),
        _check_pinned_pair(rng, draws, progress),
        _check_branch_spectra(rng, draws, progress),
        _check_ep_structure(rng, draws, progress),
    ]
    report = VerifyReport(samples=samples, seed=seed, checks=checks)
    logger.info("verify suite %s", "passed" if report.passed else "failed")
    return report
