import numpy as np
import pytest

from swanson_ep.exceptions import InputError
from swanson_ep.linalg import (
    MonicPoly,
    cauchy_bound,
    char_poly,
    discriminant_quartic,
    eig,
    inf_norm,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    null_space,
    poly_roots,
    rank,
    transpose,
)
from swanson_ep.models.swanson import match_multisets

EYE = np.eye(4, dtype=complex)


def _random_matrix(rng, n=4, scale=2.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def _separated_roots(rng, n=4, radius=10.0, min_gap=0.1):
    while True:
        r = radius * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
        d = np.abs(r[:, None] - r[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() > min_gap:
            return r


# char_poly


def test_char_poly_diagonal():
    p = char_poly(np.diag([1, 2, 3, 4]))
    assert p.degree == 4
    np.testing.assert_allclose(p.coeffs, [24, -50, 35, -10], atol=1e-12)


def test_char_poly_zero_matrix():
    np.testing.assert_array_equal(char_poly(np.zeros((4, 4))).coeffs, np.zeros(4))


def test_char_poly_matches_numpy(rng):
    for _ in range(20):
        m = _random_matrix(rng)
        expected = np.poly(m)[1:][::-1]
        np.testing.assert_allclose(char_poly(m).coeffs, expected, rtol=1e-10, atol=1e-10)


def test_char_poly_rejects_bad_input():
    m = np.eye(4)
    m[1, 2] = np.nan
    with pytest.raises(InputError):
        char_poly(m)
    with pytest.raises(InputError):
        char_poly(np.eye(17))
    with pytest.raises(InputError):
        char_poly(np.ones((2, 3)))


# poly_roots


def test_roots_of_integer_quartic():
    roots = poly_roots(MonicPoly([24, -50, 35, -10]))
    np.testing.assert_allclose(np.sort(roots.real), [1, 2, 3, 4], atol=1e-10)
    np.testing.assert_allclose(roots.imag, 0, atol=1e-10)


def test_roots_of_unity_shift():
    roots = poly_roots(MonicPoly([1, 0, 0, 0]))
    expected = np.exp(1j * np.pi * (2 * np.arange(4) + 1) / 4)
    _, dev = match_multisets(expected, roots)
    assert dev.max() < 1e-10


def test_fourfold_root_resolved_to_quarter_precision():
    p = MonicPoly.from_roots([1 + 1j] * 4)
    roots = poly_roots(p)
    assert roots.size == 4
    assert np.abs(roots - (1 + 1j)).max() < 1e-3


def test_root_residual_bound(rng):
    tol = 1e-12
    for _ in range(10):
        p = MonicPoly(rng.uniform(-5, 5, 4) + 1j * rng.uniform(-5, 5, 4))
        roots = poly_roots(p, tol=tol)
        assert np.all(np.abs(p(roots)) <= tol * (1 + cauchy_bound(p)) ** 4)


def test_expand_then_solve_recovers_roots(rng):
    for _ in range(20):
        r = _separated_roots(rng)
        _, dev = match_multisets(r, poly_roots(MonicPoly.from_roots(r)))
        assert dev.max() < 1e-8


def test_linear_polynomial():
    np.testing.assert_allclose(poly_roots(MonicPoly([-3.0])), [3.0])


@pytest.mark.parametrize("tol,max_iter", [(0.0, 10), (-1e-3, 10), (1e-12, 0)])
def test_poly_roots_rejects_bad_arguments(tol, max_iter):
    with pytest.raises(InputError):
        poly_roots(MonicPoly([1, 0, 0, 0]), tol=tol, max_iter=max_iter)


# discriminant_quartic


@pytest.mark.parametrize(
    "roots,expected",
    [
        ([1, 2, 3, 4], 144.0),
        ([1, 1, 2, 3], 0.0),
        ([0, 0, 0, 0], 0.0),
    ],
)
def test_discriminant_examples(roots, expected):
    disc = discriminant_quartic(MonicPoly.from_roots(roots))
    assert abs(disc - expected) < 1e-8


def test_discriminant_matches_root_product(rng):
    for _ in range(20):
        r = _separated_roots(rng, radius=3.0)
        product = np.prod([(r[i] - r[j]) ** 2 for i in range(4) for j in range(i + 1, 4)])
        disc = discriminant_quartic(MonicPoly.from_roots(r))
        assert abs(disc - product) <= 1e-6 * (1 + np.abs(r).max()) ** 12


def test_discriminant_needs_quartic():
    with pytest.raises(InputError):
        discriminant_quartic(MonicPoly([1, 2, 3]))


# rank / null_space


def test_rank_examples(minus_ep_matrix):
    assert rank(EYE, 1e-10) == 4
    assert rank(np.zeros((4, 4)), 1e-10) == 0
    assert rank(minus_ep_matrix - 2 * EYE, 1e-8) == 3


@pytest.mark.parametrize("diag", [[1, 1e-3, 1e-6, 1e-9], [5, 0, 1e-4, 2j]])
def test_rank_monotone_in_tol(diag):
    m = np.diag(diag).astype(complex)
    m[0, 1] = 0.5
    ranks = [rank(m, tol) for tol in np.logspace(-12, 0, 25)]
    assert all(a >= b for a, b in zip(ranks, ranks[1:]))


def test_rank_monotone_at_ep(minus_ep_matrix):
    ranks = [rank(minus_ep_matrix - 2 * EYE, tol) for tol in np.logspace(-12, 0, 25)]
    assert all(a >= b for a, b in zip(ranks, ranks[1:]))


def test_null_space_of_zero_matrix():
    basis = null_space(np.zeros((4, 4)), 1e-8)
    assert len(basis) == 4
    gram = np.array([[np.vdot(u, v) for v in basis] for u in basis])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-10)


def test_null_space_picks_zero_coordinates():
    basis = null_space(np.diag([1, 0, 0, 2]), 1e-8)
    assert len(basis) == 2
    for v in basis:
        assert abs(v[0]) < 1e-12 and abs(v[3]) < 1e-12


def test_null_space_at_ep(minus_ep_matrix):
    tol = 1e-8
    k = minus_ep_matrix - 2 * EYE
    basis = null_space(k, tol)
    assert len(basis) == 1
    v = basis[0]
    assert abs(np.linalg.norm(v) - 1) < 1e-12
    assert np.linalg.norm(k @ v) <= 10 * tol * inf_norm(k)


def test_null_space_orthonormal_and_small_residual(rng):
    tol = 1e-8
    for _ in range(10):
        a = _random_matrix(rng, n=4)[:, :2]
        m = a @ _random_matrix(rng, n=4)[:2, :]  # rank 2
        basis = null_space(m, tol)
        assert len(basis) == 2
        gram = np.array([[np.vdot(u, v) for v in basis] for u in basis])
        np.testing.assert_allclose(gram, np.eye(2), atol=1e-10)
        for v in basis:
            assert np.linalg.norm(m @ v) <= 10 * tol * inf_norm(m)


# eig


def test_eig_distinct_complex_diagonal():
    values = [1 + 1j, 1 - 1j, 2, 3]
    spec = eig(np.diag(values))
    _, dev = match_multisets(values, spec.eigenvalues)
    assert dev.max() < 1e-10
    assert all(c.algebraic == 1 and c.geometric == 1 for c in spec.clusters)


def test_eig_semisimple_double_pairs():
    spec = eig(np.diag([2 - 1j, 2 - 1j, 2 + 1j, 2 + 1j]))
    _, dev = match_multisets([2 - 1j, 2 - 1j, 2 + 1j, 2 + 1j], spec.eigenvalues)
    assert dev.max() < 1e-8
    assert sorted((c.algebraic, c.geometric) for c in spec.clusters) == [(2, 2), (2, 2)]


def test_eig_cluster_radius_is_absolute():
    # eigenvalues stay resolved, but their clusters merge at this scale
    values = [1e-3, 2e-3, 3e-3, 4e-3]
    spec = eig(np.diag(values))
    _, dev = match_multisets(values, spec.eigenvalues)
    assert dev.max() < 1e-9
    assert [c.algebraic for c in spec.clusters] == [4]
    scaled = eig(np.diag(values) * 1e3)
    assert [c.algebraic for c in scaled.clusters] == [1, 1, 1, 1]


def test_eig_at_ep(minus_ep_matrix):
    spec = eig(minus_ep_matrix)
    assert np.abs(spec.eigenvalues - 2).max() < 1e-3
    assert len(spec.clusters) == 1
    (cluster,) = spec.clusters
    assert cluster.algebraic == 4 and cluster.geometric == 1
    assert abs(cluster.value - 2) < 1e-9


def test_eig_trace_and_determinant(rng):
    for _ in range(20):
        m = _random_matrix(rng)
        spec = eig(m)
        tr = np.trace(m)
        assert abs(spec.eigenvalues.sum() - tr) <= 1e-9 * (1 + abs(tr))
        det = np.linalg.det(m)
        assert abs(np.prod(spec.eigenvalues) - det) <= 1e-8 * abs(det)


def test_eig_simple_residuals(rng):
    for _ in range(10):
        m = _random_matrix(rng)
        spec = eig(m)
        for c in spec.clusters:
            if c.algebraic == 1:
                assert spec.residuals[c.members[0]] <= 1e-8 * inf_norm(m)
        for v in spec.eigenvectors:
            assert abs(np.linalg.norm(v) - 1) < 1e-12


def test_eig_matches_numpy(rng):
    for _ in range(20):
        m = _random_matrix(rng)
        _, dev = match_multisets(np.linalg.eigvals(m), eig(m).eigenvalues)
        assert dev.max() < 1e-8


def test_eig_without_vectors():
    assert eig(np.diag([1, 2, 3, 4]), with_vectors=False).eigenvectors is None


# mat_ops


def test_mat_ops(rng):
    a = _random_matrix(rng)
    np.testing.assert_array_equal(mat_mul(EYE, a), a)
    np.testing.assert_array_equal(transpose(transpose(a)), a)
    np.testing.assert_array_equal(mat_sub(mat_add(a, a), a), a)
    np.testing.assert_allclose(mat_scale(a, 2j), 2j * a)
    assert inf_norm(np.diag([3j, -4, 1, 0])) == 4


def test_mat_ops_dimension_mismatch():
    with pytest.raises(InputError):
        mat_add(np.eye(3), np.eye(4))
    with pytest.raises(InputError):
        mat_mul(np.eye(3), np.eye(4))
    with pytest.raises(InputError):
        mat_scale(np.eye(2), np.inf)
