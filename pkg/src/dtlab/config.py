"""Run configuration and the small parsers the CLI needs."""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

CACHE_ENV = "DTLAB_CACHE_DIR"
DEFAULT_CACHE_DIR = ".dtlab_cache"

_PI_RE = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+]+))?\s*$")


def parse_real(text: str | float) -> float:
    """Parse a decimal or a multiple of pi: ``pi``, ``pi/4``, ``3pi/4``, ``3*pi/4``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = text.strip().lower().replace("π", "pi")
    m = _PI_RE.match(s)
    if m:
        num = m.group(1)
        coef = 1.0 if num in ("", "+") else -1.0 if num == "-" else float(num)
        den = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}") from None


def parse_grid(text: str) -> list[float]:
    """``start:factor:count`` -> [start * factor**i for i < count], or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be start:factor:count, got {text!r}")
        start, factor = parse_real(parts[0]), parse_real(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"grid count must be an integer, got {parts[2]!r}") from None
        if start <= 0 or factor <= 1 or count < 1:
            raise ConfigError("grid needs start > 0, factor > 1, count >= 1")
        grid = [start * factor**i for i in range(count)]
        # keep integral grid points integral (1e3 * 10**2 is not exactly 1e5)
        grid = [float(round(g)) if abs(g - round(g)) < 1e-9 * g else g for g in grid]
    else:
        grid = [parse_real(t) for t in text.split(",") if t.strip()]
    if not grid:
        raise ConfigError("empty grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"grid must be strictly increasing: {grid}")
    return grid


def resolve_cache_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR))


@dataclass
class RunConfig:
    command: str
    weight: int = 12
    n_max: int | None = None
    lo: float = 0.0
    hi: float = math.pi
    r: int = 1
    delta: int | None = None
    delta_max: int | None = None
    grid: list[float] = field(default_factory=list)
    kind: str | None = None
    c: float = 0.5
    s: float | None = None
    beta: float | None = None
    out: Path | None = None
    cache_dir: Path = Path(DEFAULT_CACHE_DIR)
    threads: int = 1
    auto_build: bool = True
    series_budget: int = 200_000
    exact: bool | None = None

    def __post_init__(self):
        if not 0.0 <= self.lo <= self.hi <= math.pi + 1e-12:
            raise ConfigError(f"interval [{self.lo}, {self.hi}] must lie in [0, pi]")
        self.hi = min(self.hi, math.pi)
        if self.r < 0:
            raise ConfigError("r must be non-negative")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ConfigError("grid must be strictly increasing")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
