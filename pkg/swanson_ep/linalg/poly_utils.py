import logging
import math
from dataclasses import dataclass

import numpy as np

from swanson_ep.exceptions import InputError, NumericalFailure
from swanson_ep.linalg.matrix_utils import as_complex_matrix

logger = logging.getLogger(__name__)

EPS = np.finfo(np.float64).eps
MAX_CHAR_POLY_DIM = 16
# fixed phase offset for the starting circle, breaks symmetric stalls
ABERTH_PHASE = 0.37
# multiples of eps in the rounding floor of p(z): stop iterating below the
# first, treat roots as one multiple root within the second
CONVERGENCE_FACTOR = 16.0
SNAP_FACTOR = 32.0
POLISH_SWEEPS = 3


@dataclass(frozen=True, eq=False)
class MonicPoly:
    """
    z^n + c[n-1] z^(n-1) + ... + c[0], coefficients stored lowest order first
    without the implicit leading 1.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size < 1:
            raise InputError("a monic polynomial needs degree >= 1")
        if not np.all(np.isfinite(c)):
            raise InputError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.coeffs.size

    def full(self):
        # highest order first, as numpy.polyval wants
        return np.concatenate(([1.0 + 0j], self.coeffs[::-1]))

    def __call__(self, z):
        return np.polyval(self.full(), z)

    @classmethod
    def from_roots(cls, roots):
        full = np.poly(np.asarray(roots, dtype=np.complex128)).astype(np.complex128)
        return cls(full[1:][::-1])


def char_poly(m):
    """det(lambda I - m) by the Faddeev-LeVerrier trace recursion."""
    a = as_complex_matrix(m)
    n = a.shape[0]
    if n > MAX_CHAR_POLY_DIM:
        raise InputError(f"char_poly supports n <= {MAX_CHAR_POLY_DIM}, got {n}")
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    eye = np.eye(n, dtype=np.complex128)
    mk = np.zeros_like(a)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(a @ mk) / k
    return MonicPoly(coeffs[:n])


def cauchy_bound(p):
    # every root satisfies |z| < 1 + max|c_k|
    return 1.0 + float(np.max(np.abs(p.coeffs)))


def cluster_radius(p, tol):
    return max(1e-6, tol ** 0.25) * (1.0 + cauchy_bound(p))


def roundoff_floor(p, z, factor=CONVERGENCE_FACTOR):
    # size of the rounding error made when evaluating p at z
    return factor * EPS * np.polyval(np.abs(p.full()), np.abs(z))


def _check_tol(tol):
    if not np.isfinite(tol) or tol <= 0:
        raise InputError(f"tolerance must be positive and finite, got {tol!r}")


def poly_roots(p, tol=1e-12, max_iter=500):
    """
    All roots of a monic polynomial, with multiplicity, by Aberth-Ehrlich
    simultaneous iteration started on the Cauchy-bound circle, then Newton
    polishing of the isolated roots.
    """
    _check_tol(tol)
    if max_iter < 1:
        raise InputError(f"max_iter must be >= 1, got {max_iter}")
    n = p.degree
    if n == 1:
        return np.array([-p.coeffs[0]], dtype=np.complex128)

    c = p.full()
    dc = np.polyder(c)
    bound = cauchy_bound(p)
    z = bound * np.exp(1j * (2 * np.pi * np.arange(n) / n + ABERTH_PHASE))

    converged = False
    for it in range(max_iter):
        pz = np.polyval(c, z)
        dpz = np.polyval(dc, z)
        on_root = np.abs(pz) <= roundoff_floor(p, z)

        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            ratio = pz / dpz
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w[on_root] = 0.0
        stuck = ~np.isfinite(w)
        if np.any(stuck):
            # p'(z) = 0 or two iterates collided: nudge off the critical point
            w[stuck] = 1e-3 * (1.0 + np.abs(z[stuck])) * np.exp(1j * ABERTH_PHASE)
        z = z - w
        if not np.all(np.isfinite(z)):
            raise NumericalFailure("Aberth iteration diverged", iterates=z, residuals=None)
        if np.all(on_root | (np.abs(w) <= tol * (1.0 + np.abs(z)))):
            converged = True
            break
    logger.debug("aberth: %d iterations, converged=%s", it + 1, converged)

    z = _polish_isolated(p, z, cluster_radius(p, tol))

    residuals = np.abs(np.polyval(c, z))
    limit = tol * (1.0 + bound) ** n
    if np.any(residuals > limit):
        raise NumericalFailure(
            f"root finder did not converge after {max_iter} iterations "
            f"(max residual {residuals.max():.3e} > {limit:.3e})",
            iterates=z,
            residuals=residuals,
        )
    return z


def _polish_isolated(p, z, radius):
    c = p.full()
    dc = np.polyder(c)
    z = z.copy()
    dist = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(dist, np.inf)
    isolated = dist.min(axis=1) > radius
    for _ in range(POLISH_SWEEPS):
        for i in np.flatnonzero(isolated):
            pz = np.polyval(c, z[i])
            dpz = np.polyval(dc, z[i])
            if dpz == 0 or pz == 0:
                continue
            trial = z[i] - pz / dpz
            if abs(np.polyval(c, trial)) < abs(pz):
                z[i] = trial
    return z


def snap_radius(p, center, k):
    # how far a k-fold root at center can be scattered by rounding in p
    c = p.full()
    kth = abs(np.polyval(np.polyder(c, k), center)) / math.factorial(k)
    if kth == 0:
        return np.inf
    return 2.0 * (roundoff_floor(p, center, SNAP_FACTOR) / kth) ** (1.0 / k)


def refine_center(p, points):
    """Newton on the (k-1)-th derivative, which has a simple root at a k-fold root."""
    k = len(points)
    mean = points.mean()
    spread = np.abs(points - mean).max()
    q = np.polyder(p.full(), k - 1)
    dq = np.polyder(q)
    x = mean
    for _ in range(20):
        d = np.polyval(dq, x)
        if d == 0:
            break
        step = np.polyval(q, x) / d
        x = x - step
        if abs(step) <= EPS * (1.0 + abs(x)):
            break
    if not np.isfinite(x) or abs(x - mean) > 2.0 * spread + EPS * (1.0 + abs(mean)):
        return mean
    return x


def merge_multiple_roots(p, roots, radius):
    """
    Groups roots that are indistinguishable from a multiple root under rounding
    and reports each group at one refined value. Groups are grown greedily by
    increasing pairwise distance and never exceed the clustering radius.
    Returns (values, groups).
    """
    roots = np.asarray(roots, dtype=np.complex128)
    n = roots.size
    owner = list(range(n))
    members = {i: [i] for i in range(n)}

    iu, ju = np.triu_indices(n, k=1)
    dist = np.abs(roots[iu] - roots[ju])
    for idx in np.argsort(dist, kind="stable"):
        if dist[idx] > radius:
            break
        gi, gj = owner[iu[idx]], owner[ju[idx]]
        if gi == gj:
            continue
        candidate = sorted(members[gi] + members[gj])
        pts = roots[candidate]
        center = pts.mean()
        spread = np.abs(pts - center).max()
        if spread > radius or spread > snap_radius(p, center, len(pts)):
            continue
        keep, drop = min(gi, gj), max(gi, gj)
        members[keep] = candidate
        del members[drop]
        for i in candidate:
            owner[i] = keep

    values = roots.copy()
    groups = []
    for key in sorted(members):
        group = members[key]
        groups.append(group)
        if len(group) > 1:
            values[group] = refine_center(p, roots[group])
    return values, groups


def discriminant_quartic(p):
    """prod_{i<j} (r_i - r_j)^2 as the 7x7 Sylvester resultant of p and p'."""
    if p.degree != 4:
        raise InputError(f"discriminant_quartic needs a quartic, got degree {p.degree}")
    f = p.full()
    g = np.polyder(f)
    syl = np.zeros((7, 7), dtype=np.complex128)
    for i in range(3):
        syl[i, i : i + 5] = f
    for i in range(4):
        syl[3 + i, i : i + 4] = g
    # (-1)^(n(n-1)/2) = +1 for n = 4 and the leading coefficient is 1
    return complex(np.linalg.det(syl))
