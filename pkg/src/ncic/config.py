"""Run configuration and resource limits."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_ENUM_LIMIT = 2**20
ENUM_LIMIT_ENV = "NCIC_ENUM_LIMIT"

# Explicit lookup tables are only materialized up to this many rows.
TABLE_LIMIT = 2**16


def enum_limit(limit: int | None = None) -> int:
    """Resolve the enumeration limit: explicit argument, then environment, then default."""
    if limit is not None:
        return limit
    env = os.environ.get(ENUM_LIMIT_ENV)
    if env:
        return int(env)
    return DEFAULT_ENUM_LIMIT


@dataclass(frozen=True)
class RunConfig:
    enum_limit: int = DEFAULT_ENUM_LIMIT
    quantification: str = "reachable"  # "reachable" | "all"
    length_mode: str = "linear"  # "linear" | "nonlinear" | "both"
    output_format: str = "human"  # "human" | "json"

    def __post_init__(self):
        if self.enum_limit <= 0:
            raise ValueError("enumeration limit must be positive")
        if self.quantification not in ("reachable", "all"):
            raise ValueError(f"unknown quantification {self.quantification!r}")
        if self.length_mode not in ("linear", "nonlinear", "both"):
            raise ValueError(f"unknown length mode {self.length_mode!r}")
        if self.output_format not in ("human", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
