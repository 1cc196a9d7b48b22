"""Closed-form evaluation of scaled and physical peakon variables."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import logsumexp

from .determinants import DeterminantTable, LogPositive
from .formulas import FormulaTable, LogArrayAlgebra, evaluate
from .spectral import GroupLayout, GroupParams, SpectralData, require_valid

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class EigenProducts:
    L: LogPositive
    M: LogPositive

    @classmethod
    def of(cls, spectral: SpectralData) -> "EigenProducts":
        return cls(LogPositive(spectral.log_L), LogPositive(spectral.log_M))


@dataclass(frozen=True)
class ScaledState:
    """Logs of X, Q (X-peakons) and Y, P (Y-peakons); arrays have shape (count, len(t))."""

    layout: GroupLayout
    t: np.ndarray
    log_X: np.ndarray
    log_Q: np.ndarray
    log_Y: np.ndarray
    log_P: np.ndarray

    def _lp(self, arr, k, it):
        return [LogPositive(float(v)) for v in arr[:, it]] if k is None else LogPositive(float(arr[k, it]))

    def Xvals(self, it: int = 0) -> list[LogPositive]:
        return self._lp(self.log_X, None, it)

    def Yvals(self, it: int = 0) -> list[LogPositive]:
        return self._lp(self.log_Y, None, it)

    def Qvals(self, it: int = 0) -> list[LogPositive]:
        return self._lp(self.log_Q, None, it)

    def Pvals(self, it: int = 0) -> list[LogPositive]:
        return self._lp(self.log_P, None, it)


def _offsets(sizes) -> list[int]:
    return [0] + list(np.cumsum(sizes))


@dataclass(frozen=True)
class PeakonState:
    """Positions and log amplitudes; arrays have shape (count, len(t))."""

    layout: GroupLayout
    t: np.ndarray
    x: np.ndarray
    log_m: np.ndarray
    y: np.ndarray
    log_n: np.ndarray

    @property
    def m(self) -> np.ndarray:
        return np.exp(self.log_m)

    @property
    def n(self) -> np.ndarray:
        return np.exp(self.log_n)

    def group(self, kind: str, index: int) -> tuple[np.ndarray, np.ndarray]:
        """(positions, log amplitudes) of one group."""
        sizes = self.layout.x_sizes if kind == "X" else self.layout.y_sizes
        off = _offsets(sizes)
        sl = slice(off[index - 1], off[index])
        if kind == "X":
            return self.x[sl], self.log_m[sl]
        return self.y[sl], self.log_n[sl]

    def chain_positions(self) -> np.ndarray:
        """All positions in the left-to-right order of the layout."""
        parts = [self.group(kind, idx)[0] for kind, idx, _ in self.layout.chain()]
        return np.concatenate(parts, axis=0)

    def chain_labels(self) -> list[str]:
        return [f"{'x' if kind == 'X' else 'y'}[{idx}.{i}]"
                for kind, idx, size in self.layout.chain() for i in range(1, size + 1)]

    def at(self, it: int) -> "PeakonState":
        sl = slice(it, it + 1)
        return PeakonState(self.layout, self.t[sl], self.x[:, sl], self.log_m[:, sl],
                           self.y[:, sl], self.log_n[:, sl])

    @classmethod
    def single(cls, layout: GroupLayout, t: float, x, log_m, y, log_n) -> "PeakonState":
        col = lambda v: np.asarray(v, dtype=float).reshape(-1, 1)
        return cls(layout, np.array([float(t)]), col(x), col(log_m), col(y), col(log_n))


class Solution:
    """Closed-form solution for one configuration; determinant terms are cached."""

    def __init__(self, layout: GroupLayout, spectral: SpectralData, params: GroupParams,
                 check: bool = True):
        if check:
            require_valid(layout, spectral, params)
        self.layout = layout
        self.spectral = spectral
        self.params = params
        self.table = FormulaTable(layout)
        self.dets = DeterminantTable(spectral, self.table.A, self.table.B)

    def algebra(self, t) -> LogArrayAlgebra:
        return LogArrayAlgebra(self.dets, t)

    def scaled(self, t) -> ScaledState:
        alg = self.algebra(t)
        rows = {"X": ([], []), "Y": ([], [])}
        for rec, pos, amp in evaluate(self.table, alg, self.params, self.spectral):
            rows[rec.kind][0].extend(pos)
            rows[rec.kind][1].extend(amp)
        stack = lambda v: np.vstack([np.broadcast_to(a, alg.t.shape) for a in v])
        return ScaledState(self.layout, alg.t, stack(rows["X"][0]), stack(rows["X"][1]),
                           stack(rows["Y"][0]), stack(rows["Y"][1]))

    def physical(self, t) -> PeakonState:
        return to_physical(self.scaled(t))


def solve(layout: GroupLayout, spectral: SpectralData, params: GroupParams, t) -> ScaledState:
    return Solution(layout, spectral, params).scaled(t)


def solve_even(layout: GroupLayout, spectral: SpectralData, params: GroupParams, t) -> ScaledState:
    if layout.parity != "even":
        raise ValueError("solve_even needs a K+K layout")
    return solve(layout, spectral, params, t)


def solve_odd(layout: GroupLayout, spectral: SpectralData, params: GroupParams, t) -> ScaledState:
    if layout.parity != "odd":
        raise ValueError("solve_odd needs a (K+1)+K layout")
    return solve(layout, spectral, params, t)


def solve_interlacing(layout: GroupLayout, spectral: SpectralData, t) -> ScaledState:
    """Interlacing solution with the same group count (all sizes forced to 1)."""
    single = layout.singletons()
    return solve(single, spectral, GroupParams.singletons(single), t)


def to_physical(scaled: ScaledState) -> PeakonState:
    x = 0.5 * (scaled.log_X + LOG2)
    y = 0.5 * (scaled.log_Y + LOG2)
    log_m = 0.5 * scaled.log_X + scaled.log_Q - 0.5 * LOG2
    log_n = 0.5 * scaled.log_Y + scaled.log_P - 0.5 * LOG2
    return PeakonState(scaled.layout, scaled.t, x, log_m, y, log_n)


def effective(positions, log_amplitudes) -> tuple[np.ndarray, np.ndarray]:
    """Effective (position, log amplitude) of a group; axis 0 runs over members."""
    x = np.asarray(positions, dtype=float)
    lm = np.asarray(log_amplitudes, dtype=float)
    la = logsumexp(lm + x, axis=0)
    lb = logsumexp(lm - x, axis=0)
    return 0.5 * (la - lb), 0.5 * (la + lb)


def effective_state(state: PeakonState) -> PeakonState:
    """Collapse every group to its effective singleton."""
    xs, lms, ys, lns = [], [], [], []
    for kind, idx, _ in state.layout.chain():
        pos, la = effective(*state.group(kind, idx))
        (xs if kind == "X" else ys).append(pos)
        (lms if kind == "X" else lns).append(la)
    return PeakonState(state.layout.singletons(), state.t, np.vstack(xs), np.vstack(lms),
                       np.vstack(ys), np.vstack(lns))


def effective_spectral(layout: GroupLayout, spectral: SpectralData, params: GroupParams) -> SpectralData:
    """Constants of the interlacing solution traced out by the effective quantities.

    Eigenvalues and residues are unchanged.  A non-singleton leftmost X group
    shifts C by M / sigma^X_{1,1}, and a non-singleton rightmost group (Y_K when
    even, X_{K+1} when odd) shifts D by the sum of its taus.  Every other group
    leaves the constants alone.
    """
    first = params.x[0]
    last = params.y[-1] if layout.parity == "even" else params.x[-1]
    C = spectral.bigC
    if first.sigmas:
        C += math.exp(spectral.log_M) / first.sigmas[0]
    D = spectral.bigD + math.fsum(last.taus)
    return SpectralData(spectral.lambdas, spectral.mus, spectral.a0, spectral.b0, C, D)


def effective_reference(layout: GroupLayout, spectral: SpectralData, params: GroupParams, t) -> PeakonState:
    """Interlacing solution that effective_state of the grouped solution should reproduce."""
    single = layout.singletons()
    sp = effective_spectral(layout, spectral, params)
    return Solution(single, sp, GroupParams.singletons(single), check=False).physical(t)
