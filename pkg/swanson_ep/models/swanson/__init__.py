from swanson_ep.models.swanson.configuration_swanson import ModelParams, QuarticCoeffs
from swanson_ep.models.swanson.utils import (
    branch_spectrum_minus,
    branch_spectrum_plus,
    build_matrix,
    char_coeffs_closed,
    closed_form_eigenvalues,
    delta_minus,
    delta_plus,
    match_multisets,
    resolve_params,
    split_sym_antisym,
)
