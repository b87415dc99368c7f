"""Flat key=value run configuration with documented defaults.

A config file holds one ``key = value`` per line; ``#`` starts a comment.
Command-line flags mirror the keys and override file values. The worker
count falls back to the ``COOPGROW_WORKERS`` environment variable when
neither the file nor a flag sets it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

import numpy as np

from .network import GrowthMechanism

__all__ = ["ConfigError", "RunConfig", "parse_config", "r_grid"]

_WORKERS_ENV = "COOPGROW_WORKERS"


class ConfigError(ValueError):
    """A config key is unknown, unparsable, or violates an invariant."""


@dataclass(frozen=True)
class RunConfig:
    mechanism: GrowthMechanism = GrowthMechanism.PREFERENTIAL
    L: int = 4
    beta: float = 1.0
    n: float = 0.001
    r: float = 2.0
    pc_growth: float = 0.0
    ni: int = 1000
    nmax: int = 3000
    r_min: float = 1.1
    r_max: float = 3.0
    r_steps: int = 8
    realizations: int = 30
    M: int = 50
    ni_list: tuple[int, ...] = (10, 30, 100, 300, 1000)
    n_target: int = 5000
    seed: int = 12345
    workers: int = 1
    out_dir: str = "."


def _parse_mechanism(text: str) -> GrowthMechanism:
    return GrowthMechanism.from_label(text.strip())


def _parse_ni_list(text: str) -> tuple[int, ...]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(int(part) for part in items)


_PARSERS = {
    "mechanism": _parse_mechanism,
    "L": int,
    "beta": float,
    "n": float,
    "r": float,
    "pc_growth": float,
    "ni": int,
    "nmax": int,
    "r_min": float,
    "r_max": float,
    "r_steps": int,
    "realizations": int,
    "M": int,
    "ni_list": _parse_ni_list,
    "n_target": int,
    "seed": int,
    "workers": int,
    "out_dir": str,
}


def _read_file(path: str) -> dict:
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, text = (part.strip() for part in line.split("=", 1))
            if key not in _PARSERS:
                raise ConfigError(f"{path}:{lineno}: unknown config key '{key}'")
            try:
                values[key] = _PARSERS[key](text)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: invalid value for '{key}': {exc}") from exc
    return values


def _validate(cfg: RunConfig) -> None:
    def fail(key, why):
        raise ConfigError(f"invalid value for '{key}': {why}")

    if cfg.L < 1:
        fail("L", "links per new node must be >= 1")
    if cfg.beta < 0:
        fail("beta", "selection intensity must be >= 0")
    if cfg.n <= 0:
        fail("n", "growth fraction must be positive")
    if not cfg.r > 1:
        fail("r", "benefit-cost ratio must exceed 1")
    if not 0 <= cfg.pc_growth <= 1:
        fail("pc_growth", "probability must lie in [0, 1]")
    if cfg.ni < cfg.L:
        fail("ni", f"initial cooperators must be >= L={cfg.L}")
    if cfg.nmax < cfg.ni:
        fail("nmax", f"target size must be >= ni={cfg.ni}")
    if cfg.r_steps < 1:
        fail("r_steps", "the r grid needs at least one point")
    if not cfg.r_min > 1:
        fail("r_min", "benefit-cost ratios must exceed 1")
    if cfg.r_steps > 1 and not cfg.r_max > cfg.r_min:
        fail("r_max", f"grid upper end must exceed r_min={cfg.r_min}")
    if cfg.realizations < 1:
        fail("realizations", "need at least one realization")
    if cfg.M < 1:
        fail("M", "need at least one trial")
    if not cfg.ni_list:
        fail("ni_list", "list of initial sizes is empty")
    if any(b <= a for a, b in zip(cfg.ni_list, cfg.ni_list[1:])):
        fail("ni_list", "initial sizes must be strictly ascending")
    if cfg.ni_list[0] < cfg.L:
        fail("ni_list", f"initial sizes must be >= L={cfg.L}")
    if cfg.n_target < cfg.ni_list[-1]:
        fail("n_target", f"target size must be >= largest ni={cfg.ni_list[-1]}")
    if cfg.seed < 0:
        fail("seed", "seed must be >= 0")
    if cfg.workers < 1:
        fail("workers", "worker count must be >= 1")


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Resolve defaults <- environment <- file <- flag overrides, then validate."""
    values = {f.name: f.default for f in fields(RunConfig)}
    env_workers = os.environ.get(_WORKERS_ENV)
    if env_workers is not None:
        try:
            values["workers"] = int(env_workers)
        except ValueError as exc:
            raise ConfigError(f"invalid value for '{_WORKERS_ENV}': {env_workers!r}") from exc
    if path is not None:
        values.update(_read_file(path))
    for key, value in (overrides or {}).items():
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key '{key}'")
        if value is None:
            continue
        try:
            values[key] = _PARSERS[key](value) if isinstance(value, str) else value
        except ValueError as exc:
            raise ConfigError(f"invalid value for '{key}': {exc}") from exc
    if isinstance(values["ni_list"], list):
        values["ni_list"] = tuple(values["ni_list"])
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def r_grid(cfg: RunConfig) -> np.ndarray:
    """Ascending benefit-cost grid spanning [r_min, r_max] in r_steps points."""
    if cfg.r_steps == 1:
        return np.array([cfg.r_min])
    return np.linspace(cfg.r_min, cfg.r_max, cfg.r_steps)
