"""Line records and least-squares slope measurement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


def direction_name(direction: int) -> str:
    return "plus-infinity" if direction > 0 else "minus-infinity"


def direction_sign(direction) -> int:
    if direction in (1, "+", "plus", "plus-infinity", "+inf"):
        return 1
    if direction in (-1, "-", "minus", "minus-infinity", "-inf"):
        return -1
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class AsymptoteLine:
    slope: float
    intercept: float
    direction: str
    target: str
    kind: str              # "position" or "log-amplitude"
    degenerate: bool = False

    def __call__(self, t):
        return self.slope * np.asarray(t, dtype=float) + self.intercept


def empirical_slope(evaluator: Callable[[np.ndarray], np.ndarray], window: tuple[float, float],
                    samples: int = 41) -> tuple[float, float]:
    """Ordinary least-squares (slope, intercept) of evaluator over a uniform grid."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    t = np.linspace(window[0], window[1], samples)
    v = np.asarray(evaluator(t), dtype=float)
    slope, intercept = np.polyfit(t, v, 1)
    return float(slope), float(intercept)
