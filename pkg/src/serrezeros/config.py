"""Run configuration: dataclass defaults, ``key = value`` files, one env override."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .arcs import ScanSettings
from .qseries import DEFAULT_PRECISION

PRECISION_ENV = "SERREZEROS_PRECISION"


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION
    truncation: int = 1024
    grid_size: int = 2048
    refine_tol: float = 1e-12
    # "adaptive": relative to the largest |F| in a window of grid neighbours
    minima_threshold: str | float = "adaptive"
    eval_tol: float = 1e-30
    output_dir: str = "."
    csv_path: str | None = None
    json_path: str | None = None

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if self.truncation < 8:
            raise ValueError("truncation must be at least 8")
        if self.grid_size < 16:
            raise ValueError("grid_size must be at least 16")
        if not (0 < self.refine_tol < 1):
            raise ValueError("refine_tol must lie in (0, 1)")
        if self.minima_threshold != "adaptive" and not float(self.minima_threshold) > 0:
            raise ValueError("minima_threshold must be positive or 'adaptive'")

    def scan_settings(self) -> ScanSettings:
        kw = dict(grid_size=self.grid_size, refine_tol=self.refine_tol,
                  precision_bits=self.precision_bits, eval_tol=self.eval_tol)
        if self.minima_threshold != "adaptive":
            kw["minima_threshold"] = float(self.minima_threshold)
        return ScanSettings(**kw)

    def updated(self, **overrides) -> "RunConfig":
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **clean)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, raw: str):
    raw = raw.strip()
    kind = _TYPES[key]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if key == "minima_threshold":
        return raw if raw == "adaptive" else float(raw)
    return raw


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _convert(key, val)
    return out


def load_config(path: str | None = None, environ=None, **overrides) -> RunConfig:
    """Defaults, then the environment, then the file, then explicit overrides."""
    environ = os.environ if environ is None else environ
    values = {}
    if environ.get(PRECISION_ENV):
        values["precision_bits"] = int(environ[PRECISION_ENV])
    if path:
        with open(path, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
