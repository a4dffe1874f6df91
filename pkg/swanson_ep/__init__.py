from swanson_ep.exceptions import ConfigError, DomainError, InputError, NumericalFailure, SwansonError
from swanson_ep.linalg import (
    MonicPoly,
    Spectrum,
    char_poly,
    discriminant_quartic,
    eig,
    null_space,
    poly_roots,
    rank,
)
from swanson_ep.models import PhaseLabel, classify_phase
from swanson_ep.models.swanson import ModelParams, build_matrix, char_coeffs_closed, closed_form_eigenvalues

__version__ = "0.1.0"
