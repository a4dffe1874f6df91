import logging
import math
from pathlib import Path

from swanson_ep.exceptions import ConfigError
from swanson_ep.models.swanson.configuration_swanson import PARAM_NAMES
from swanson_ep.models.swanson.utils import DELTA_MODES

logger = logging.getLogger(__name__)

"""
omega, gamma, rho, epsilon (`float`): fixed model parameters (the swept one is overwritten per point).
delta (`float` or `"auto-minus"`/`"auto-plus"`): explicit value, or recomputed per point so that a pair
        of eigenvalues stays pinned at omega.
eta (`float` or `"auto"`): explicit value, or -epsilon per point.
param (`str`, defaults to `"epsilon"`): swept parameter.
from, to, steps: sweep grid, np.linspace(from, to, steps).
root_tol, rank_tol, phase_tol: tolerances handed to eig and classify_phase.
out, plot: CSV and gnuplot output paths (None writes CSV to stdout, no plot).
style (`"minus"`/`"plus"`): labelling of the plot script.
sorted (`bool`): sorted eigenvalue columns instead of tracked branches.
samples, seed: verify suite size and generator seed.

gamma never shows up in the pinned-branch spectra, it only has to keep the delta radicand
non-negative over the sweep: the minus preset uses rho=1, gamma=2.5 for epsilon in [-3, 1].
"""

DEFAULTS = {
    "omega": 2.0,
    "gamma": 1.0,
    "rho": 0.5,
    "epsilon": 0.0,
    "delta": "auto-plus",
    "eta": "auto",
    "param": "epsilon",
    "from": -0.4,
    "to": 1.4,
    "steps": 181,
    "root_tol": 1e-12,
    "rank_tol": 1e-8,
    "phase_tol": 1e-8,
    "out": None,
    "plot": None,
    "style": "plus",
    "sorted": False,
    "progress": False,
    "samples": 1000,
    "seed": 42,
}

FLOAT_KEYS = ("omega", "gamma", "rho", "epsilon", "from", "to", "root_tol", "rank_tol", "phase_tol")
INT_KEYS = ("steps", "samples", "seed")
BOOL_KEYS = ("sorted", "progress")
STYLES = ("minus", "plus")


def _to_float(key, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite, got {value!r}")
    return value


def _to_int(key, value):
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    if not as_float.is_integer():
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return int(as_float)


def _to_bool(key, value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {value!r}")


class SweepConfig:
    def __init__(self, config=None):
        config = {} if config is None else dict(config)
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged = dict(DEFAULTS)
        merged.update({k: v for k, v in config.items() if v is not None})

        for key in FLOAT_KEYS:
            setattr(self, key if key not in ("from", "to") else f"t_{key}", _to_float(key, merged[key]))
        for key in INT_KEYS:
            setattr(self, key, _to_int(key, merged[key]))
        for key in BOOL_KEYS:
            setattr(self, key, _to_bool(key, merged[key]))

        delta = merged["delta"]
        self.delta = delta if delta in DELTA_MODES else _to_float("delta", delta)
        eta = merged["eta"]
        self.eta = eta if eta == "auto" else _to_float("eta", eta)

        self.param = str(merged["param"])
        self.style = str(merged["style"])
        self.out = merged["out"]
        self.plot = merged["plot"]

        if self.param not in PARAM_NAMES:
            raise ConfigError(f"param: must be one of {', '.join(PARAM_NAMES)}, got {self.param!r}")
        if self.param == "delta" and self.delta in DELTA_MODES:
            raise ConfigError("param=delta cannot be swept while delta is auto")
        if self.param == "eta" and self.eta == "auto":
            raise ConfigError("param=eta cannot be swept while eta is auto")
        if self.steps < 2:
            raise ConfigError(f"steps: need at least 2, got {self.steps}")
        if not self.t_from < self.t_to:
            raise ConfigError(f"from must be < to, got [{self.t_from}, {self.t_to}]")
        for key in ("root_tol", "rank_tol", "phase_tol"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key}: must be positive")
        if self.samples < 1:
            raise ConfigError(f"samples: need at least 1, got {self.samples}")
        if self.style not in STYLES:
            raise ConfigError(f"style: must be one of {', '.join(STYLES)}, got {self.style!r}")

    def base_params(self):
        # fixed part of the model; explicit delta/eta, zero placeholders for auto modes
        return {
            "omega": self.omega,
            "gamma": self.gamma,
            "rho": self.rho,
            "epsilon": self.epsilon,
            "delta": self.delta if not isinstance(self.delta, str) else 0.0,
            "eta": self.eta if not isinstance(self.eta, str) else 0.0,
        }

    def get(self):
        # return as dictionary
        return {
            "omega": self.omega,
            "gamma": self.gamma,
            "rho": self.rho,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "eta": self.eta,
            "param": self.param,
            "from": self.t_from,
            "to": self.t_to,
            "steps": self.steps,
            "root_tol": self.root_tol,
            "rank_tol": self.rank_tol,
            "phase_tol": self.phase_tol,
            "out": self.out,
            "plot": self.plot,
            "style": self.style,
            "sorted": self.sorted,
            "progress": self.progress,
            "samples": self.samples,
            "seed": self.seed,
        }


def read_config_file(path):
    """`key = value` per line, `#` starts a comment. Returns raw string values."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}")
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        entries[key] = value
    logger.debug("read %d entries from %s", len(entries), path)
    return entries
