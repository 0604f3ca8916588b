"""CSV and manifest writers.

Floats are written with ``repr`` (shortest round-tripping form), so files
are byte-identical whenever the underlying doubles are.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ConfigError

SCHEMAS = {
    "eigenvalues": ("sample_id", "re", "im"),
    "singular": ("sample_id", "x"),
    "entropy": ("sample_id", "entropy"),
    "histogram": ("bin_left", "bin_right", "density"),
    "curve": ("x", "density"),
}


def _fmt(v):
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return repr(float(v))


def header_line(experiment: str, params: dict) -> str:
    return "# experiment={} seed={} params={}".format(
        experiment, params.get("seed"), json.dumps(params, sort_keys=True, separators=(",", ":")))


def write_csv(path, schema: str, rows, experiment: str, params: dict) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(header_line(experiment, params) + "\n")
            fh.write(",".join(SCHEMAS[schema]) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None
    return path


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=float) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None
    return path


def read_csv(path):
    """Parse a file written by :func:`write_csv`; returns (header comment, column names, rows)."""
    lines = Path(path).read_text().splitlines()
    cols = lines[1].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in lines[2:]]
    return lines[0], cols, rows
