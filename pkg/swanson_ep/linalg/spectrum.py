import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from swanson_ep.exceptions import NumericalFailure
from swanson_ep.linalg.matrix_utils import as_complex_matrix, inf_norm, null_space, rank
from swanson_ep.linalg.poly_utils import (
    MonicPoly,
    char_poly,
    cluster_radius,
    merge_multiple_roots,
    poly_roots,
    refine_center,
)

logger = logging.getLogger(__name__)

DEFAULT_ROOT_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-8
EIGENPAIR_RESIDUAL = 1e-8
MAX_NULL_SPACE_TOL = 1e-2


@dataclass(frozen=True)
class Cluster:
    value: complex
    algebraic: int
    geometric: int
    members: tuple


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    eigenvalues  reported values, multiple roots merged onto one value
    roots        raw root-finder output, same order as eigenvalues
    residuals    ||m v - lambda v|| per eigenvalue
    clusters     roots grouped within cluster_radius
    eigenvectors one unit vector per eigenvalue, or None
    """

    eigenvalues: np.ndarray
    roots: np.ndarray
    residuals: np.ndarray
    clusters: tuple
    cluster_radius: float
    char_poly: MonicPoly
    eigenvectors: Optional[tuple] = None

    @property
    def n(self):
        return self.eigenvalues.size

    def cluster_of(self, index):
        for cluster in self.clusters:
            if index in cluster.members:
                return cluster
        raise KeyError(index)


def _single_linkage(points, radius):
    n = points.size
    owner = list(range(n))

    def find(i):
        while owner[i] != i:
            owner[i] = owner[owner[i]]
            i = owner[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    owner[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def _kernel(a, lam, rank_tol):
    eye = np.eye(a.shape[0])
    return null_space(a - lam * eye, rank_tol)


def _widened_kernel(a, lam, rank_tol):
    tol = rank_tol
    while tol <= MAX_NULL_SPACE_TOL:
        basis = _kernel(a, lam, tol)
        if basis:
            if tol != rank_tol:
                logger.warning("null space at %s needed rank tol %.0e", lam, tol)
            return basis
        tol *= 100.0
    raise NumericalFailure(f"no eigenvector found for eigenvalue {lam}")


def eig(m, tol=DEFAULT_ROOT_TOL, rank_tol=DEFAULT_RANK_TOL, max_iter=500, with_vectors=True):
    """
    Eigenvalues as roots of the characteristic polynomial, with clusters,
    geometric multiplicities and eigenvectors from the null space of m - lambda I.

    The cluster radius is absolute, max(1e-6, tol**0.25) * (1 + Cauchy bound), so
    eigenvalues closer than that share a cluster whatever their magnitude:
    diag(1e-3, 2e-3, 3e-3, 4e-3) is one cluster of multiplicity 4. Rescale first.
    """
    a = as_complex_matrix(m)
    n = a.shape[0]
    p = char_poly(a)
    roots = poly_roots(p, tol=tol, max_iter=max_iter)
    radius = cluster_radius(p, tol)
    values, _ = merge_multiple_roots(p, roots, radius)

    norm = inf_norm(a)
    eye = np.eye(n)
    vectors = [None] * n
    clusters = []
    for members in _single_linkage(roots, radius):
        am = len(members)
        value = values[members[0]] if am == 1 else refine_center(p, roots[members])
        gm = min(am, max(1, n - rank(a - value * eye, rank_tol)))

        basis = _kernel(a, value, rank_tol)
        if basis:
            for j, i in enumerate(members):
                vectors[i] = basis[min(j, len(basis) - 1)]
        else:
            for i in members:
                vectors[i] = _widened_kernel(a, values[i], rank_tol)[0]
        clusters.append(Cluster(value=complex(value), algebraic=am, geometric=gm, members=tuple(members)))

    residuals = np.array(
        [np.linalg.norm(a @ vectors[i] - values[i] * vectors[i]) for i in range(n)]
    )
    for cluster in clusters:
        if cluster.algebraic == 1:
            i = cluster.members[0]
            if residuals[i] > EIGENPAIR_RESIDUAL * max(norm, 1e-300):
                raise NumericalFailure(
                    f"eigenpair residual {residuals[i]:.3e} exceeds {EIGENPAIR_RESIDUAL:g}*||m||",
                    iterates=values,
                    residuals=residuals,
                )

    return Spectrum(
        eigenvalues=values,
        roots=roots,
        residuals=residuals,
        clusters=tuple(clusters),
        cluster_radius=radius,
        char_poly=p,
        eigenvectors=tuple(vectors) if with_vectors else None,
    )
