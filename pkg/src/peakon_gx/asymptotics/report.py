"""Predicted lines next to measured slopes and gaps of the closed-form trajectories."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..solver import PeakonState, Solution
from .engine import engine_lines
from .lines import AsymptoteLine
from .theorems import theorem_lines


@dataclass(frozen=True)
class AsymptoteRow:
    line: AsymptoteLine
    measured_slope: float
    gap: float          # |closed form - (c t + d)| at |t| = at

    @property
    def target(self) -> str:
        return self.line.target

    @property
    def kind(self) -> str:
        return self.line.kind

    @property
    def direction(self) -> str:
        return self.line.direction


def trajectories(state: PeakonState) -> dict[tuple[str, str], np.ndarray]:
    """{(target, kind): values over state.t} with targets named like x[2.1]."""
    out = {}
    for kind, idx, _ in state.layout.chain():
        pos, la = state.group(kind, idx)
        for i in range(pos.shape[0]):
            target = f"{kind.lower()}[{idx}.{i + 1}]"
            out[(target, "position")] = pos[i]
            out[(target, "log-amplitude")] = la[i]
    return out


def asymptote_table(sol: Solution, at: float = 200.0, window: float = 20.0, samples: int = 41,
                    source: str = "theorem") -> list[AsymptoteRow]:
    """One row per (direction, target, kind), in chain order, +inf first.

    The slope is measured by least squares over |t| in [at - window, at + window].
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    rows = []
    for sgn in (1, -1):
        if source == "theorem":
            lines = theorem_lines(sol.layout, sol.spectral, sol.params, sgn, check=False)
        elif source == "engine":
            lines = engine_lines(sol, sgn)
        else:
            raise ValueError(f"unknown source {source!r}")
        ts = sgn * np.linspace(at - window, at + window, samples)
        tr = trajectories(sol.physical(np.append(ts, sgn * at)))
        for key, line in lines.items():
            vals = tr[key]
            slope = float(np.polyfit(ts, vals[:-1], 1)[0])
            gap = float(abs(vals[-1] - line(sgn * at)))
            rows.append(AsymptoteRow(line, slope, gap))
    return rows
