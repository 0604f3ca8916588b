"""Experiment configuration: defaults, required keys and file/flag merging."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError

EXPERIMENTS = (
    "ginibre-spectrum",
    "product-spectrum",
    "power-spectrum",
    "map-spectrum",
    "map-singular",
    "map-entropy",
    "baker-spectrum",
    "baker-singular",
    "fc-density",
    "fit-q",
    "product-power-test",
)

# value types of every recognised parameter
PARAM_TYPES = {
    "d": int,
    "M": int,
    "L": int,
    "s": int,
    "N": int,
    "xi": float,
    "q": float,
    "samples": int,
    "bins": int,
    "seed": int,
    "phases": str,
    "variant": str,
    "kind": str,
    "order": int,
    "points": int,
    "law": str,
    "source": str,
    "spacing": str,
}

_COMMON = {"seed": 0}
_MAP = {"d": 20, "M": 20, "s": 1, "samples": 25}
_BAKER = {"d": 40, "M": 10, "L": 20, "s": 1, "samples": 60, "phases": "random"}

DEFAULTS = {
    "ginibre-spectrum": {"N": 400, "xi": 1.0, "samples": 1, "kind": "complex"},
    "product-spectrum": {"N": 500, "xi": 1.0, "s": 2, "samples": 20},
    "power-spectrum": {"N": 500, "xi": 1.0, "s": 2, "samples": 20},
    "map-spectrum": dict(_MAP),
    "map-singular": dict(_MAP, samples=100),
    "map-entropy": dict(_MAP, samples=200),
    "baker-spectrum": dict(_BAKER),
    "baker-singular": dict(_BAKER, s=2, samples=70),
    "fc-density": {"order": 1, "points": 500, "spacing": "auto"},
    "fit-q": {"source": "maps", "bins": 50, "variant": "standard-erfc", "s": 1, "samples": 100,
              "d": 20, "M": 20, "L": 20, "phases": "random"},
    "product-power-test": {"N": 256, "s": 2, "samples": 40},
}

REQUIRED = {
    "fit-q": ("source",),
}


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: dict = field(default_factory=dict)
    output_path: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        unknown = set(self.parameters) - set(PARAM_TYPES)
        if unknown:
            raise ConfigError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        merged = dict(_COMMON)
        merged.update(DEFAULTS[self.experiment])
        merged.update({k: v for k, v in self.parameters.items() if v is not None})
        try:
            self.parameters = {k: PARAM_TYPES[k](v) for k, v in merged.items()}
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad parameter value: {exc}") from None
        for key in REQUIRED.get(self.experiment, ()):
            if key not in self.parameters:
                raise ConfigError(f"{self.experiment} needs parameter {key!r}")
        if not 0 <= self.parameters["seed"] < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.parameters.get("samples", 1) < 1:
            raise ConfigError("samples must be positive")

    def __getitem__(self, key):
        return self.parameters[key]


def load_config_file(path) -> dict:
    """Read a flat JSON object of parameters (plus optional ``experiment`` and ``out``)."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
        raise ConfigError("config file must be a flat key-value object")
    return data
