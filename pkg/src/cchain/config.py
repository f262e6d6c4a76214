"""Run configuration: caps and tolerances, from defaults, an optional JSON
file, then ``CCHAIN_*`` environment variables (highest precedence)."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .chain import EXACT_THRESHOLD, FLOAT_TOL
from .groups import DEFAULT_MAX_ORDER

ENV_PREFIX = "CCHAIN_"


@dataclass(frozen=True)
class Config:
    max_order: int = DEFAULT_MAX_ORDER
    exact_threshold: int = EXACT_THRESHOLD  # exact mixing up to this many states
    t_cap: int | None = None  # None: ten times the minorization scale
    float_tol: float = FLOAT_TOL  # d(t) slack in float mode
    exact_match_tol: float = 1e-9  # numeric eigenvalue vs closed form
    charpoly_full_max: int = 64  # full n+1 point identity test up to this order
    charpoly_partial_max: int = 128  # partial test up to this order
    charpoly_partial_points: int = 4
    phi_brute_max: int = 16
    two_step_max: int = 504

    @classmethod
    def load(cls, path: str | os.PathLike | None = None,
             env: dict | None = None) -> "Config":
        cfg = cls()
        if path is not None:
            cfg = cfg.merged(_flatten(json.loads(Path(path).read_text())))
        env = os.environ if env is None else env
        overrides = {}
        for f in fields(cls):
            key = ENV_PREFIX + f.name.upper()
            if key in env:
                overrides[f.name] = env[key]
        return cfg.merged(overrides)

    def merged(self, values: dict) -> "Config":
        known = {f.name: f for f in fields(self)}
        out = {}
        for k, v in values.items():
            if k not in known:
                raise ValueError(f"unknown config key {k!r}")
            out[k] = _coerce(k, v)
        return replace(self, **out)

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _flatten(data: dict) -> dict:
    """Accept {"caps": {...}, "tolerances": {...}} as well as flat keys."""
    out = {}
    for k, v in data.items():
        if k in ("caps", "tolerances") and isinstance(v, dict):
            out.update(v)
        else:
            out[k] = v
    return out


def _coerce(key: str, value):
    if key.endswith("_tol"):
        return float(value)
    if key == "t_cap" and (value is None or value == "" or value == "none"):
        return None
    v = int(value)
    if v < 1:
        raise ValueError(f"{key} must be positive")
    return v
