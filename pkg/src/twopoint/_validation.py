"""Parameter checks for the estimator layer."""
from __future__ import annotations

import math

from .spaces import SpaceParams, catalog


def check_space(family, m) -> SpaceParams:
    return catalog(family, int(m))


def check_t(t, upper: float = math.pi) -> float:
    t = float(t)
    if not 0 <= t < upper:
        raise ValueError(f"t must lie in [0, {upper:g}), got {t}")
    return t


def check_positive_int(name: str, value) -> int:
    if int(value) != value or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
    return int(value)
