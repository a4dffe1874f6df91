import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from swanson_ep.exceptions import InputError
from swanson_ep.linalg.poly_utils import MonicPoly

"""
omega (`float`): common frequency of the two modes.
gamma (`float`): gain/loss rate, enters the diagonal as -i*gamma / +i*gamma.
rho (`float`): antisymmetric coupling.
epsilon (`float`): symmetric coupling between modes 1 and 3.
delta (`float`): magnitude of the imaginary coupling.
eta (`float`): symmetric coupling between modes 2 and 4.

Canonical parameter sets have gamma, rho, delta, eta >= 0. Sweeps through negative
epsilon are allowed; is_canonical only reports.
"""

PARAM_NAMES = ("omega", "gamma", "rho", "epsilon", "delta", "eta")

@dataclass(frozen=True)
class ModelParams:
    omega: float
    gamma: float
    rho: float
    epsilon: float
    delta: float
    eta: float

    def __post_init__(self):
        for name in PARAM_NAMES:
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError) as err:
                raise InputError(f"{name} must be a real number, got {value!r}") from err
            if not math.isfinite(value):
                raise InputError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def is_canonical(self):
        return min(self.gamma, self.rho, self.delta, self.eta) >= 0

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def get(self):
        # return as dictionary
        return {name: getattr(self, name) for name in PARAM_NAMES}

@dataclass(frozen=True)
class QuarticCoeffs:
    """lambda^4 + p lambda^3 + q lambda^2 + r lambda + s"""

    p: complex
    q: complex
    r: complex
    s: complex

    def as_monic(self):
        return MonicPoly([self.s, self.r, self.q, self.p])

    def as_array(self):
        return np.array([self.p, self.q, self.r, self.s], dtype=np.complex128)
