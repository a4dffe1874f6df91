import logging
import sys
from pathlib import Path

from swanson_ep.sweep.configuration_sweep import SweepConfig, read_config_file
from swanson_ep.sweep.utils import emit_csv, emit_plot_script, first_ep, run_sweep, sweep_transitions

"""
Regenerates the data behind both branch figures: for each preset a tracked-branch CSV,
a two-panel gnuplot script with the EP marked, and the list of refined transitions.
usage: python scripts/reproduce_figures.py [out_dir]
"""

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s: %(message)s")
logger = logging.getLogger(__name__)

SE_HOME = Path(__file__).resolve().parents[1]
CONFIG_DIR = SE_HOME / "swanson_ep" / "sweep" / "configs"
BRANCHES = ["minus", "plus"]

if __name__ == "__main__":
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else SE_HOME / "figures"
    out_dir.mkdir(parents=True, exist_ok=True)

    for branch in BRANCHES:
        entries = read_config_file(CONFIG_DIR / f"{branch}_branch.cfg")
        csv_path = out_dir / f"{branch}_branch.csv"
        entries["out"] = str(csv_path)
        cfg = SweepConfig(entries)

        rows = run_sweep(cfg, progress=True)
        csv_path.write_text(emit_csv(rows))

        candidates = sweep_transitions(cfg, progress=True)
        for c in candidates:
            logger.info("%s branch: %s", branch, c)
        script = emit_plot_script(
            rows, cfg.style, csv_path=csv_path.name, ep_t=first_ep(candidates), xlabel=cfg.param
        )
        (out_dir / f"{branch}_branch.gp").write_text(script)
        logger.info("%s branch: %d rows -> %s", branch, len(rows), csv_path)
