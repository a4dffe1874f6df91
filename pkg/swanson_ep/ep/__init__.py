from swanson_ep.ep.ep_utils import (
    EpCandidate,
    MatrixFamily,
    TransitionKind,
    coalescence_metrics,
    find_transitions,
    geometric_multiplicity,
    jordan_chain_length,
    swanson_family,
    track_branches,
)
