from swanson_ep.models.phase_utils import PhaseLabel, classify_phase
