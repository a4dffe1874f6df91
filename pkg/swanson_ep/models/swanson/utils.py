import logging

import numpy as np
from scipy.optimize import linear_sum_assignment

from swanson_ep.exceptions import DomainError, InputError
from swanson_ep.linalg.matrix_utils import as_complex_matrix
from swanson_ep.models.swanson.configuration_swanson import ModelParams, QuarticCoeffs

logger = logging.getLogger(__name__)

# |eta + epsilon| allowed by the closed-form eigenvalues
ETA_GATE_TOL = 1e-12
DELTA_MODES = ("auto-minus", "auto-plus")
ETA_AUTO = "auto"


def build_matrix(params):
    """The 4x4 coupling matrix; rows 1-2 carry -i*gamma, rows 3-4 carry +i*gamma."""
    w, g, r = params.omega, params.gamma, params.rho
    e, d, h = params.epsilon, params.delta, params.eta
    lo, hi = w - 1j * g, w + 1j * g
    return np.array(
        [
            [lo, r, e, 1j * d],
            [-r, lo, -1j * d, h],
            [e, 1j * d, hi, r],
            [-1j * d, h, -r, hi],
        ],
        dtype=np.complex128,
    )


def split_sym_antisym(m):
    a = as_complex_matrix(m)
    return (a + a.T) / 2, (a - a.T) / 2


def char_coeffs_closed(params):
    w, g, r = params.omega, params.gamma, params.rho
    e, d, h = params.epsilon, params.delta, params.eta
    p = -4 * w
    q = 2 * g**2 - 2 * d**2 - e**2 - h**2 + 2 * r**2 + 6 * w**2
    rr = 4j * d * (h + e) * r + 2 * w * (h**2 + e**2) - 4 * w * (r**2 + g**2 - d**2) - 4 * w**3
    s = (
        r**4
        + w**4
        + g**4
        + d**4
        + e**2 * h**2
        + 2 * e * h * r**2
        - 4j * (e + h) * d * w * r
        + 2 * r**2 * w**2
        - w**2 * (e**2 + h**2)
        - g**2 * (2 * d**2 + h**2 + e**2 + 2 * r**2 - 2 * w**2)
        - 2 * d**2 * (e * h - r**2 + w**2)
    )
    return QuarticCoeffs(complex(p), complex(q), complex(rr), complex(s))


def closed_form_eigenvalues(params):
    """
    omega +- sqrt(-gamma^2 + delta^2 + epsilon^2 - rho^2 +- 2 sqrt(rho^2 (gamma^2 - delta^2))),
    principal square roots. Only valid on the reduction eta = -epsilon.
    Order of the returned values carries no meaning.
    """
    if abs(params.eta + params.epsilon) > ETA_GATE_TOL:
        raise DomainError(
            f"closed-form eigenvalues need the reduction eta = -epsilon "
            f"(got eta + epsilon = {params.eta + params.epsilon:.3e})"
        )
    w, g, r, e, d = params.omega, params.gamma, params.rho, params.epsilon, params.delta
    inner = np.sqrt(complex(g**2 * r**2 - d**2 * r**2))
    base = -(g**2) + d**2 + e**2 - r**2
    a = np.sqrt(base + 2 * inner)
    b = np.sqrt(base - 2 * inner)
    return np.array([w - a, w + a, w - b, w + b], dtype=np.complex128)


def _delta_radicand(gamma, shifted):
    # gamma^2 - shifted^2 in factored form, clamped at the boundary
    rad = (abs(gamma) - abs(shifted)) * (abs(gamma) + abs(shifted))
    if rad < 0 and rad >= -1e-14 * (1.0 + gamma**2):
        logger.debug("delta radicand %.3e clamped to 0", rad)
        rad = 0.0
    return rad


def delta_minus(gamma, epsilon, rho):
    """Imaginary coupling that pins a pair to omega on the minus branch: sqrt(gamma^2 - (epsilon + rho)^2)."""
    rad = _delta_radicand(gamma, epsilon + rho)
    if rad < 0:
        raise DomainError(
            f"delta_minus undefined: gamma^2 < (epsilon + rho)^2 by {-rad:.6g} "
            f"(gamma={gamma!r}, epsilon={epsilon!r}, rho={rho!r})",
            deficit=-rad,
        )
    return float(np.sqrt(rad))


def delta_plus(gamma, epsilon, rho):
    """sqrt(gamma^2 - (epsilon - rho)^2)"""
    rad = _delta_radicand(gamma, epsilon - rho)
    if rad < 0:
        raise DomainError(
            f"delta_plus undefined: gamma^2 < (epsilon - rho)^2 by {-rad:.6g} "
            f"(gamma={gamma!r}, epsilon={epsilon!r}, rho={rho!r})",
            deficit=-rad,
        )
    return float(np.sqrt(rad))


def branch_spectrum_minus(omega, gamma, rho, epsilon):
    delta_minus(gamma, epsilon, rho)
    x = np.sqrt(complex(-epsilon * rho - rho**2))
    return np.array([omega, omega, omega - 2 * x, omega + 2 * x], dtype=np.complex128)


def branch_spectrum_plus(omega, gamma, rho, epsilon):
    delta_plus(gamma, epsilon, rho)
    a = 2 * rho * (epsilon - rho)
    b = 2 * rho * abs(epsilon - rho)
    u = np.sqrt(complex(a + b))
    v = np.sqrt(complex(a - b))
    return np.array([omega - u, omega + u, omega - v, omega + v], dtype=np.complex128)


def resolve_params(base, param, t, delta_mode, eta_mode):
    """
    ModelParams at one sweep point: `param` set to t, then eta = -epsilon when
    eta_mode is "auto", then delta from the chosen branch when delta_mode is
    "auto-minus"/"auto-plus". Explicit modes are plain floats.
    """
    values = dict(base)
    if param not in values:
        raise InputError(f"unknown sweep parameter {param!r}")
    values[param] = t
    if eta_mode == ETA_AUTO:
        values["eta"] = -values["epsilon"]
    elif eta_mode is not None:
        values["eta"] = float(eta_mode)
    if delta_mode == "auto-minus":
        values["delta"] = delta_minus(values["gamma"], values["epsilon"], values["rho"])
    elif delta_mode == "auto-plus":
        values["delta"] = delta_plus(values["gamma"], values["epsilon"], values["rho"])
    elif delta_mode is not None:
        values["delta"] = float(delta_mode)
    return ModelParams(**values)


def match_multisets(a, b):
    """
    Minimal total-distance pairing of two equal-size multisets.
    Returns (perm, deviations) with a[i] paired to b[perm[i]].
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise InputError(f"multisets differ in size: {a.shape} vs {b.shape}")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = cols[np.argsort(rows)]
    return perm, np.abs(a - b[perm])
