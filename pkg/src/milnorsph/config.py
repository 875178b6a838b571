"""Run configuration: defaults, a key = value file format and command-line overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

OUT_DIR_ENV = "MILNORSPH_OUT_DIR"

SUITES = ("liegroup", "sphere", "milnor", "metric", "laplace", "clifford", "dirac", "chern", "defect", "all")
DEMOS = ("fisher-rao", "s3-laplacian", "geodesic", "chern-weil", "dirac-circle", "defect", "contraction")
COMMANDS = ("verify", "demo", "report")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Every overridable scalar with its default.

    ``grid`` sets the Laplacian step ``h = 1 / grid``; tolerances of
    second-order checks widen by ``(h / h0)^2`` above the default step.
    ``tol`` multiplies every tolerance.
    """

    command: str = "verify"
    target: str = "all"
    seed: int = 42
    grid: int = 1000
    tol: float = 1.0
    N: int = 512
    segments: int = 32
    h_curvature: float = 1e-3
    out: str = ""

    @property
    def laplace_h(self) -> float:
        return 1.0 / self.grid

    def out_dir(self) -> Path:
        return Path(os.environ.get(OUT_DIR_ENV) or ".")

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command == "verify" and self.target not in SUITES:
            raise ConfigError(f"unknown suite {self.target!r}; choose from {', '.join(SUITES)}")
        if self.command == "demo" and self.target not in DEMOS:
            raise ConfigError(f"unknown demo {self.target!r}; choose from {', '.join(DEMOS)}")
        if self.grid < 2:
            raise ConfigError("grid must be at least 2")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.N < 16 or self.N % 2:
            raise ConfigError("N must be even and at least 16")
        if self.segments < 2:
            raise ConfigError("segments must be at least 2")
        if not 0 < self.h_curvature < 0.1:
            raise ConfigError("h_curvature must lie in (0, 0.1)")
        return self


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"int": int, "float": float, "str": str}


def _cast(key: str, raw: str):
    try:
        return _CASTS[_TYPES[key]](raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; unknown keys are rejected."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES or key in ("command", "target"):
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = _cast(key, raw)
    return out


def load_config_file(path: str) -> dict:
    try:
        return parse_config_text(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc


def build_config(command: str, target: str, file_values: dict, overrides: dict) -> RunConfig:
    cfg = replace(RunConfig(command=command, target=target), **file_values)
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()
