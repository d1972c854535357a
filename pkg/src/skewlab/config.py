"""Run configuration: ``key = value`` text files validated into :class:`RunConfig`."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError

CACHE_ENV = "SKEWLAB_CACHE_DIR"

REQUIRED_KEYS = (
    "N",
    "prime_limit",
    "n_k",
    "delta",
    "eps_min",
    "eps_max",
    "eps_count",
    "n_bins",
    "prominence_min",
    "m",
)


class RunConfig(BaseModel):
    """Parameters of a full scan."""

    model_config = {"extra": "forbid"}

    N: int = Field(ge=2)
    prime_limit: int = Field(ge=3, description="primes p < prime_limit enter the product")
    n_k: int = Field(ge=2)
    delta: Union[float, Literal["auto"]] = "auto"
    eps_min: float
    eps_max: float
    eps_count: int = Field(ge=3)
    n_bins: int = Field(ge=1)
    prominence_min: float = Field(ge=0)
    m: int = Field(ge=1, le=25)
    cache_dir: Optional[str] = None
    output_dir: str = "scan_output"
    k_range_mode: Literal["default", "alternate"] = "default"
    workers: int = Field(default=1, ge=1)

    @field_validator("delta")
    @classmethod
    def _positive_delta(cls, v):
        if v != "auto" and not v > 0:
            raise ValueError("delta must be positive or 'auto'")
        return v

    @model_validator(mode="after")
    def _cross_checks(self):
        if self.prime_limit > self.N:
            raise ValueError(f"prime_limit={self.prime_limit} must not exceed N={self.N}")
        if not self.eps_max > self.eps_min:
            raise ValueError("eps_max must exceed eps_min")
        return self


def parse_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; later keys win."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = value
    return out


def build_config(values: dict, require_all: bool = True) -> RunConfig:
    """Validate raw values, naming the first missing or bad key in the error."""
    if require_all:
        for key in REQUIRED_KEYS:
            if key not in values:
                raise ConfigError(f"missing config key: {key}")
    values = dict(values)
    env_cache = os.environ.get(CACHE_ENV)
    if env_cache:
        values["cache_dir"] = env_cache
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(x) for x in first["loc"]) or "config"
        raise ConfigError(f"invalid config key {where}: {first['msg']}") from None


def load_config(path: Union[str, Path, None] = None, overrides: Optional[dict] = None) -> RunConfig:
    values = parse_text(read_config_text(path))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_config(values)


def read_config_text(path=None) -> str:
    if path is None:
        return resources.files("skewlab").joinpath("data/default.conf").read_text()
    return Path(path).read_text()


def eps_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.eps_min, cfg.eps_max, cfg.eps_count)
