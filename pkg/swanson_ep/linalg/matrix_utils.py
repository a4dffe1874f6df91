"""
Small dense complex matrices are plain numpy complex128 arrays of shape (n, n).
Everything public goes through as_complex_matrix so NaN/Inf never gets in.
"""

import numpy as np

from swanson_ep.exceptions import InputError


def as_complex_matrix(m, name="matrix"):
    try:
        a = np.array(m, dtype=np.complex128)
    except (TypeError, ValueError) as err:
        raise InputError(f"{name} is not numeric: {err}") from err
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InputError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} has non-finite entries")
    return a


def _check_tol(tol):
    if not np.isfinite(tol) or tol <= 0:
        raise InputError(f"tolerance must be positive and finite, got {tol!r}")


def _same_shape(a, b):
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape} vs {b.shape}")


def mat_add(a, b):
    a, b = as_complex_matrix(a), as_complex_matrix(b)
    _same_shape(a, b)
    return a + b


def mat_sub(a, b):
    a, b = as_complex_matrix(a), as_complex_matrix(b)
    _same_shape(a, b)
    return a - b


def mat_scale(a, c):
    c = complex(c)
    if not np.isfinite(c):
        raise InputError(f"scalar must be finite, got {c!r}")
    return as_complex_matrix(a) * c


def mat_mul(a, b):
    a, b = as_complex_matrix(a), as_complex_matrix(b)
    _same_shape(a, b)
    return a @ b


def transpose(a):
    # plain transpose, no conjugation
    return as_complex_matrix(a).T.copy()


def inf_norm(a):
    # max absolute row sum
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=1)))


def row_echelon(m, tol):
    """
    Gaussian elimination with partial (largest-modulus) pivoting.
    A column whose best candidate pivot is <= tol * ||m||_inf is skipped.
    Returns the eliminated copy and the list of pivot columns (pivot i sits in row i).
    """
    a = np.array(m, dtype=np.complex128)
    n_rows, n_cols = a.shape
    thresh = tol * inf_norm(a)
    pivots = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        k = row + int(np.argmax(np.abs(a[row:, col])))
        if abs(a[k, col]) <= thresh or a[k, col] == 0:
            continue
        if k != row:
            a[[row, k]] = a[[k, row]]
        factors = a[row + 1 :, col] / a[row, col]
        a[row + 1 :] -= np.outer(factors, a[row])
        a[row + 1 :, col] = 0
        pivots.append(col)
        row += 1
    return a, pivots


def rank(m, tol=1e-8):
    _check_tol(tol)
    _, pivots = row_echelon(as_complex_matrix(m), tol)
    return len(pivots)


def _gram_schmidt(vectors):
    # modified Gram-Schmidt, run twice
    basis = []
    for v in vectors:
        w = v.copy()
        for _ in range(2):
            for q in basis:
                w = w - np.vdot(q, w) * q
        norm = np.linalg.norm(w)
        if norm == 0:
            continue
        basis.append(w / norm)
    return basis


def null_space(m, tol=1e-8):
    """
    Orthonormal basis of the numerical kernel of m: one back-substitution per free
    column with that free variable set to 1, then orthonormalized.
    """
    _check_tol(tol)
    a = as_complex_matrix(m)
    n = a.shape[1]
    reduced, pivots = row_echelon(a, tol)
    free = [c for c in range(n) if c not in pivots]
    vectors = []
    for f in free:
        x = np.zeros(n, dtype=np.complex128)
        x[f] = 1.0
        for i in reversed(range(len(pivots))):
            c = pivots[i]
            x[c] = -(reduced[i] @ x) / reduced[i, c]
        vectors.append(x)
    return _gram_schmidt(vectors)
