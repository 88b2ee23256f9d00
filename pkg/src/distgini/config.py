"""Run configuration: a small ``key = value`` format with ``[section]`` headers.

Example::

    [model]
    dist = "exp(1)"
    distortion = "gah:K=t^2/2"
    copula = "fgm"

    [grid]
    alpha = 0.1:10:0.1     # start:stop:step, stop included
    theta = -1:1:0.1

Values are double-quoted strings, bare tokens, numbers or ranges. Section
names only group keys; a key may appear once. ``#`` starts a comment
outside quotes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional, Union

import numpy as np

from .errors import ConfigError

__all__ = ["Range", "RunConfig", "parse_config", "parse_value", "parse_range", "KEYS"]


@dataclass(frozen=True)
class Range:
    """``start:stop[:step]``; without a step it is a window ``(start, stop)``."""

    start: float
    stop: float
    step: Optional[float] = None

    def points(self) -> np.ndarray:
        if self.step is None:
            raise ConfigError(f"range {self} has no step")
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        if count < 1:
            raise ConfigError(f"range {self} is empty")
        return np.round(self.start + self.step * np.arange(count), 12)

    def __str__(self):
        parts = [_num(self.start), _num(self.stop)]
        if self.step is not None:
            parts.append(_num(self.step))
        return ":".join(parts)


Value = Union[str, float, int, Range, None]

# key -> kind; "num" accepts a number, "numrange" a number or range
KEYS = {
    "dist": "str",
    "distortion": "str",
    "copula": "str",
    "alpha": "numrange",
    "theta": "numrange",
    "window": "range",
    "kind": "str",
    "n": "int",
    "seed": "int",
    "threads": "int",
    "abs_tol": "num",
    "rel_tol": "num",
    "out": "str",
    "svg": "str",
}


def _num(x) -> str:
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isfinite(x) and x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _to_float(text, line, col):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", line, col) from None


def parse_range(text: str, line=None, col=None) -> Range:
    parts = text.split(":")
    if len(parts) not in (2, 3) or any(not p.strip() for p in parts):
        raise ConfigError(f"expected start:stop[:step], got {text!r}", line, col)
    nums = [_to_float(p.strip(), line, col) for p in parts]
    if len(nums) == 3 and nums[2] <= 0:
        raise ConfigError("range step must be positive", line, col)
    if nums[1] < nums[0]:
        raise ConfigError("range stop is below start", line, col)
    return Range(*nums)


def parse_value(key: str, raw: str, line=None, col=None) -> Value:
    kind = KEYS[key]
    if kind == "str":
        return raw
    if kind == "range":
        return parse_range(raw, line, col)
    if kind == "numrange" and ":" in raw:
        return parse_range(raw, line, col)
    if kind == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}", line, col) from None
    return _to_float(raw, line, col)


@dataclass(frozen=True)
class RunConfig:
    dist: Optional[str] = None
    distortion: Optional[str] = None
    copula: Optional[str] = None
    alpha: Value = None
    theta: Value = None
    window: Optional[Range] = None
    kind: Optional[str] = None
    n: Optional[int] = None
    seed: Optional[int] = None
    threads: Optional[int] = None
    abs_tol: Optional[float] = None
    rel_tol: Optional[float] = None
    out: Optional[str] = None
    svg: Optional[str] = None

    def merged(self, other: "RunConfig") -> "RunConfig":
        """Copy with every field set in ``other`` taking precedence."""
        updates = {f.name: getattr(other, f.name) for f in fields(other)
                   if getattr(other, f.name) is not None}
        return replace(self, **updates)

    def serialize(self) -> str:
        """Canonical text: one ``[run]`` section, keys in fixed order."""
        lines = ["[run]"]
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, str):
                text = '"' + v + '"'
            elif isinstance(v, Range):
                text = str(v)
            else:
                text = _num(v)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def parse_config(text: str) -> RunConfig:
    """Parse configuration text; errors carry 1-based line and column."""
    values = {}
    for lineno, original in enumerate(text.splitlines(), start=1):
        line = _strip_comment(original).rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("["):
            if not stripped.endswith("]") or not stripped[1:-1].strip():
                raise ConfigError("malformed section header", lineno, indent + 1)
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", lineno, indent + 1)
        eq = line.index("=")
        key = line[:eq].strip()
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, indent + 1)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, indent + 1)
        rest = line[eq + 1:]
        vcol = eq + 2 + (len(rest) - len(rest.lstrip()))
        raw = rest.strip()
        if not raw:
            raise ConfigError(f"missing value for {key!r}", lineno, vcol)
        if raw.startswith('"'):
            if len(raw) < 2 or not raw.endswith('"') or '"' in raw[1:-1]:
                raise ConfigError("unterminated or malformed string", lineno, vcol)
            raw = raw[1:-1]
        values[key] = parse_value(key, raw, lineno, vcol)
    return RunConfig(**values)
