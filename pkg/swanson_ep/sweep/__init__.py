from swanson_ep.sweep.configuration_sweep import SweepConfig, read_config_file
from swanson_ep.sweep.utils import SweepRow, emit_csv, emit_plot_script, run_sweep, sweep_transitions
from swanson_ep.sweep.verify import VerifyReport, verify_suite
