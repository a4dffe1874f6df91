from swanson_ep.linalg.matrix_utils import (
    as_complex_matrix,
    inf_norm,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    null_space,
    rank,
    transpose,
)
from swanson_ep.linalg.poly_utils import (
    MonicPoly,
    cauchy_bound,
    char_poly,
    discriminant_quartic,
    poly_roots,
    snap_radius,
)
from swanson_ep.linalg.spectrum import Cluster, Spectrum, eig
