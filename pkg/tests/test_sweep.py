import csv
import io
import re

import numpy as np
import pytest

from swanson_ep.exceptions import ConfigError, InputError
from swanson_ep.linalg import eig
from swanson_ep.models import PhaseLabel, classify_phase
from swanson_ep.models.swanson import build_matrix, match_multisets, resolve_params
from swanson_ep.sweep.configuration_sweep import DEFAULTS, SweepConfig, read_config_file
from swanson_ep.sweep.utils import (
    CSV_HEADER,
    emit_csv,
    emit_plot_script,
    first_ep,
    run_sweep,
    sweep_grid,
    sweep_transitions,
)

MINUS = {
    "omega": 2.0,
    "gamma": 2.5,
    "rho": 1.0,
    "delta": "auto-minus",
    "from": -3.0,
    "to": 1.0,
    "steps": 401,
    "style": "minus",
}


@pytest.fixture(scope="module")
def plus_rows():
    return run_sweep(SweepConfig())


@pytest.fixture(scope="module")
def minus_rows():
    return run_sweep(SweepConfig(MINUS))


def _row_at(rows, t):
    return min(rows, key=lambda r: abs(r.t - t))


# SweepConfig


def test_config_defaults():
    cfg = SweepConfig()
    assert cfg.get() == DEFAULTS
    assert (cfg.t_from, cfg.t_to, cfg.steps) == (-0.4, 1.4, 181)
    assert cfg.base_params()["delta"] == 0.0


def test_config_coerces_strings():
    cfg = SweepConfig({"omega": "3", "steps": "11", "sorted": "yes", "delta": "0.25", "eta": "auto"})
    assert cfg.omega == 3.0 and cfg.steps == 11 and cfg.sorted is True
    assert cfg.delta == 0.25 and cfg.base_params()["delta"] == 0.25


@pytest.mark.parametrize(
    "entries",
    [
        {"steps": 1},
        {"steps": 2.5},
        {"from": 1.0, "to": 1.0},
        {"omega": "nan"},
        {"omega": "two"},
        {"kappa": 1.0},
        {"style": "fig3"},
        {"param": "kappa"},
        {"param": "delta"},
        {"param": "eta"},
        {"sorted": "maybe"},
        {"root_tol": 0.0},
        {"samples": 0},
    ],
)
def test_config_rejects(entries):
    with pytest.raises(ConfigError):
        SweepConfig(entries)


def test_read_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# preset\nomega = 3\n\nroot-tol = 1e-11  # tighter\ndelta = auto-minus\n")
    entries = read_config_file(path)
    assert entries == {"omega": "3", "root_tol": "1e-11", "delta": "auto-minus"}
    cfg = SweepConfig(entries)
    assert cfg.omega == 3.0 and cfg.root_tol == 1e-11


def test_read_config_file_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("omega = 3\nkappa = 1\n")
    with pytest.raises(ConfigError, match=":2: unknown key"):
        read_config_file(path)
    path.write_text("omega 3\n")
    with pytest.raises(ConfigError, match=":1:"):
        read_config_file(path)
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "missing.cfg")


def test_shipped_presets_load():
    from pathlib import Path

    import swanson_ep.sweep as sweep_pkg

    configs = Path(sweep_pkg.__file__).parent / "configs"
    minus = SweepConfig(read_config_file(configs / "minus_branch.cfg"))
    plus = SweepConfig(read_config_file(configs / "plus_branch.cfg"))
    assert (minus.delta, minus.style) == ("auto-minus", "minus")
    assert (plus.delta, plus.style) == ("auto-plus", "plus")


# run_sweep


def test_sweep_grid():
    np.testing.assert_array_equal(sweep_grid(SweepConfig({"steps": 3, "from": 0, "to": 1})), [0.0, 0.5, 1.0])


def test_plus_sweep_regions(plus_rows):
    assert len(plus_rows) == 181
    for row in plus_rows:
        if row.t < 0.45:
            assert row.phase is PhaseLabel.Broken
        elif row.t > 0.55:
            assert row.phase is PhaseLabel.RealWithDegeneracy
    assert _row_at(plus_rows, 0.5).phase is PhaseLabel.FullyCoalesced


@pytest.mark.timeout(600)
def test_minus_sweep_regions(minus_rows):
    assert len(minus_rows) == 401
    for row in minus_rows:
        if row.t < -1.05:
            assert row.phase is PhaseLabel.RealWithDegeneracy
        elif row.t > -0.95:
            assert row.phase is PhaseLabel.Broken
    assert _row_at(minus_rows, -1.0).phase is PhaseLabel.FullyCoalesced


def test_sweep_known_rows(plus_rows, minus_rows):
    _, dev = match_multisets([1, 2, 2, 3], _row_at(plus_rows, 1.0).branches)
    assert dev.max() <= 1e-6
    _, dev = match_multisets([0, 2, 2, 4], _row_at(minus_rows, -2.0).branches)
    assert dev.max() <= 1e-6


def test_pinned_pair_along_sweep(minus_rows):
    for row in minus_rows:
        values = np.array(row.branches)
        near = np.sort(np.abs(values - 2.0))[:2]
        limit = 1e-3 if abs(row.t + 1.0) < 1e-9 else 1e-8
        assert near.max() <= limit


def test_sweep_phase_matches_pointwise(plus_rows):
    cfg = SweepConfig()
    base = cfg.base_params()
    for row in plus_rows[::30]:
        m = build_matrix(resolve_params(base, "epsilon", row.t, "auto-plus", "auto"))
        spec = eig(m, tol=cfg.root_tol, rank_tol=cfg.rank_tol, with_vectors=False)
        assert row.phase is classify_phase(spec)


def test_sweep_two_steps():
    rows = run_sweep(SweepConfig({"steps": 2}))
    assert [r.t for r in rows] == [-0.4, 1.4]


def test_sweep_radicand_error():
    with pytest.raises(ConfigError, match="epsilon="):
        run_sweep(SweepConfig({"gamma": 0.1}))


def test_sweep_sorted_columns():
    rows = run_sweep(SweepConfig({"steps": 21, "sorted": True}))
    for row in rows:
        values = np.array(row.branches)
        order = np.lexsort((values.imag, values.real))
        np.testing.assert_array_equal(order, np.arange(4))


def test_sweep_is_deterministic():
    cfg = SweepConfig({"steps": 31})
    assert emit_csv(run_sweep(cfg)) == emit_csv(run_sweep(cfg))


def test_sweep_transitions_first_ep():
    cfg = SweepConfig()
    t = first_ep(sweep_transitions(cfg))
    assert abs(t - 0.5) <= 1e-6
    assert first_ep([]) is None


# emit_csv / emit_plot_script


def test_emit_csv(plus_rows):
    text = emit_csv(plus_rows)
    assert "\r" not in text
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[-1] == ""
    parsed = list(csv.reader(io.StringIO(text)))[1:]
    assert len(parsed) == len(plus_rows)
    for fields, row in zip(parsed, plus_rows):
        assert len(fields) == 13
        assert float(fields[0]) == row.t
        assert complex(float(fields[1]), float(fields[2])) == row.branches[0]
        assert fields[-1] == row.phase.name


def test_emit_csv_needs_rows():
    with pytest.raises(InputError):
        emit_csv([])


def test_emit_plot_script(plus_rows):
    script = emit_plot_script(plus_rows, "plus", csv_path="plus.csv", ep_t=0.5)
    assert script.count("every ::1 using 1:") == 8
    assert "using 1:2 " in script and "using 1:9 " in script
    assert 'set output "plus_re.eps"' in script
    assert 'set output "plus_im.eps"' in script
    assert "set arrow 1 from first 0.5, graph 0 to first 0.5, graph 1 nohead" in script
    assert "'plus.csv'" in script


def test_emit_plot_script_with_found_ep(plus_rows):
    ep_t = first_ep(sweep_transitions(SweepConfig()))
    script = emit_plot_script(plus_rows, "plus", ep_t=ep_t)
    arrow = re.search(r"set arrow 1 from first (\S+), graph 0 to first (\S+), graph 1", script)
    assert arrow is not None
    assert float(arrow.group(1)) == float(arrow.group(2))
    assert abs(float(arrow.group(1)) - 0.5) <= 1e-6
    assert "np." not in script


def test_emit_plot_script_without_ep(minus_rows):
    script = emit_plot_script(minus_rows, "minus", output_stem="figs/minus")
    assert "set arrow" not in script
    assert 'set output "figs/minus_re.eps"' in script
    assert "epsilon = -rho" in script


def test_emit_plot_script_rejects(plus_rows):
    with pytest.raises(InputError):
        emit_plot_script(plus_rows, "fig1")
    with pytest.raises(InputError):
        emit_plot_script([], "plus")
