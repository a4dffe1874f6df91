from enum import Enum

import numpy as np

from swanson_ep.exceptions import InputError
from swanson_ep.linalg.poly_utils import snap_radius

DEFAULT_PHASE_TOL = 1e-8


class PhaseLabel(Enum):
    AllRealSimple = "AllRealSimple"
    RealWithDegeneracy = "RealWithDegeneracy"
    Broken = "Broken"
    FullyCoalesced = "FullyCoalesced"


def classify_phase(spec, tol=DEFAULT_PHASE_TOL):
    if not tol > 0:
        raise InputError(f"tolerance must be positive, got {tol!r}")
    values = spec.eigenvalues
    center = spec.roots.mean()
    # a 4-fold root is only resolved to ~eps^(1/4) and may carry a small imaginary
    # scatter; anything wider than rounding can explain is a real spectrum feature
    if np.all(values == values[0]) or np.abs(spec.roots - center).max() <= snap_radius(
        spec.char_poly, center, spec.n
    ):
        return PhaseLabel.FullyCoalesced
    if np.any(np.abs(values.imag) > tol * (1.0 + np.abs(values.real))):
        return PhaseLabel.Broken
    if any(c.algebraic >= 2 for c in spec.clusters):
        return PhaseLabel.RealWithDegeneracy
    return PhaseLabel.AllRealSimple
