"""Flat ``key = value`` run configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional

from .errors import ConfigurationError
from .scenarios import builtin_scenarios

SCHEME_NAMES = {"sl2": "strang", "sl4": "fourth_order"}
VBOUNDARIES = ("periodic", "zero_inflow")


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one run."""

    scenario: str
    mx: int
    mv: int
    order: int = 5
    cfl: float = 2.0
    t_final: float = 1.0
    scheme: str = "sl4"
    limiter: bool = True
    output: str = "output"
    snapshots: tuple[float, ...] = ()
    vmax: Optional[float] = None
    vboundary: str = "periodic"

    def __post_init__(self):
        validate(self)

    @property
    def split_variant(self) -> str:
        return SCHEME_NAMES[self.scheme]


def validate(cfg: RunConfig) -> None:
    if cfg.scenario not in builtin_scenarios():
        raise ConfigurationError(f"unknown scenario {cfg.scenario!r}")
    if cfg.mx < 1 or cfg.mv < 1:
        raise ConfigurationError("mx and mv must be positive")
    if not 1 <= cfg.order <= 5:
        raise ConfigurationError(f"order must be in 1..5, got {cfg.order}")
    if not (cfg.cfl > 0 and math.isfinite(cfg.cfl)):
        raise ConfigurationError(f"cfl must be positive, got {cfg.cfl}")
    if not (cfg.t_final >= 0 and math.isfinite(cfg.t_final)):
        raise ConfigurationError(f"t_final must be non-negative, got {cfg.t_final}")
    if cfg.scheme not in SCHEME_NAMES:
        raise ConfigurationError(f"scheme must be one of {sorted(SCHEME_NAMES)}, got {cfg.scheme!r}")
    if cfg.vboundary not in VBOUNDARIES:
        raise ConfigurationError(f"vboundary must be one of {VBOUNDARIES}, got {cfg.vboundary!r}")
    if cfg.vmax is not None and not cfg.vmax > 0:
        raise ConfigurationError(f"vmax must be positive, got {cfg.vmax}")
    if any(s < 0 for s in cfg.snapshots):
        raise ConfigurationError("snapshot times must be non-negative")


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("on", "true", "yes", "1"):
        return True
    if low in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on/off, got {text!r}")


def _parse_snapshots(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(s) for s in text.split(","))


def _parse_vmax(text: str) -> Optional[float]:
    return None if text.strip().lower() in ("", "default", "none") else float(text)


_PARSERS = {
    "scenario": str,
    "mx": int,
    "mv": int,
    "order": int,
    "cfl": float,
    "t_final": float,
    "scheme": lambda s: s.lower(),
    "limiter": _parse_bool,
    "output": str,
    "snapshots": _parse_snapshots,
    "vmax": _parse_vmax,
    "vboundary": str,
}
KEYS = tuple(_PARSERS)


def parse_assignments(lines, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigurationError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
    return values


def parse(text: str, overrides: Optional[list[str]] = None, source: str = "<config>") -> RunConfig:
    """Build a :class:`RunConfig` from file text plus ``key=value`` overrides."""
    values = parse_assignments(text.splitlines(), source)
    if overrides:
        values.update(parse_assignments(overrides, "<override>"))
    missing = [k for k in ("scenario", "mx", "mv") if k not in values]
    if missing:
        raise ConfigurationError(f"{source}: missing required keys {missing}")
    return RunConfig(**values)


def load(path: str, overrides: Optional[list[str]] = None) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), overrides, source=path)


def serialize(cfg: RunConfig) -> str:
    """Text form that :func:`parse` maps back to an equal config."""
    out = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "limiter":
            text = "on" if v else "off"
        elif f.name == "snapshots":
            text = ",".join(repr(float(s)) for s in v)
        elif f.name == "vmax":
            text = "default" if v is None else repr(float(v))
        elif isinstance(v, float):
            text = repr(v)
        else:
            text = str(v)
        out.append(f"{f.name} = {text}")
    return "\n".join(out) + "\n"


def with_mesh(cfg: RunConfig, n: int) -> RunConfig:
    """Same config on an ``n x n`` mesh."""
    return replace(cfg, mx=n, mv=n)


__all__ = ["KEYS", "RunConfig", "SCHEME_NAMES", "load", "parse", "serialize", "validate", "with_mesh"]
