"""Peakon fields u, v, the peakon ODE right-hand side, RK4 and residual checks.

u(x) = sum m_i exp(-|x - x_i|) and v(x) = sum n_j exp(-|x - y_j|).  The
derivative at a kink is the mean of the one-sided derivatives, which amounts
to sgn(0) = 0 in u_x(x) = sum m_i sgn(x_i - x) exp(-|x - x_i|).

The ODEs are

    x' = u v,   (ln m)' = u v_x - 2 u_x v     at x = x_k,
    y' = u v,   (ln n)' = u_x v - 2 u v_x     at x = y_k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solver import PeakonState, Solution
from .spectral import GroupLayout, GroupParams, SpectralData


ORDER_SLACK_ULPS = 8


class OrderingError(RuntimeError):
    pass


@dataclass(frozen=True)
class FieldSample:
    u: float
    ux: float
    v: float
    vx: float


def _peakon_sum(xq: np.ndarray, pos: np.ndarray, logamp: np.ndarray):
    """(value, derivative) of sum exp(logamp_i - |xq - pos_i|) at each xq."""
    xq = np.atleast_1d(xq)
    if pos.size == 0:
        return np.zeros(xq.shape), np.zeros(xq.shape)
    diff = pos[None, :] - xq[:, None]
    expo = logamp[None, :] - np.abs(diff)
    top = np.max(expo, axis=1, keepdims=True)
    top = np.where(np.isfinite(top), top, 0.0)
    w = np.exp(expo - top)
    scale = np.exp(top[:, 0])
    return scale * w.sum(axis=1), scale * (np.sign(diff) * w).sum(axis=1)


def fields(state: PeakonState, xq) -> tuple[np.ndarray, ...]:
    """u, ux, v, vx at query points for a single-time state."""
    x, lm, y, ln = (a[:, 0] for a in (state.x, state.log_m, state.y, state.log_n))
    u, ux = _peakon_sum(np.asarray(xq, dtype=float), x, lm)
    v, vx = _peakon_sum(np.asarray(xq, dtype=float), y, ln)
    return u, ux, v, vx


def eval_fields(state: PeakonState, xq: float) -> FieldSample:
    u, ux, v, vx = fields(state, [xq])
    return FieldSample(float(u[0]), float(ux[0]), float(v[0]), float(vx[0]))


def _ranked_sum(pos_q, rank_q, pos, logamp, rank):
    """Peakon sum at other peakons; signs come from chain ranks, not float differences."""
    if pos.size == 0:
        return np.zeros(pos_q.shape), np.zeros(pos_q.shape)
    expo = logamp[None, :] - np.abs(pos[None, :] - pos_q[:, None])
    top = np.max(expo, axis=1, keepdims=True)
    top = np.where(np.isfinite(top), top, 0.0)
    w = np.exp(expo - top)
    sgn = np.sign(rank[None, :] - rank_q[:, None])
    scale = np.exp(top[:, 0])
    return scale * w.sum(axis=1), scale * (sgn * w).sum(axis=1)


def chain_ranks(layout: GroupLayout) -> tuple[np.ndarray, np.ndarray]:
    """Left-to-right rank of every X-peakon and every Y-peakon."""
    rx, ry = [], []
    r = 0
    for kind, _, size in layout.chain():
        (rx if kind == "X" else ry).extend(range(r, r + size))
        r += size
    return np.array(rx, dtype=float), np.array(ry, dtype=float)


def _rhs_log(x, lm, y, ln, rx, ry):
    u, ux = _ranked_sum(x, rx, x, lm, rx)
    v, vx = _ranked_sum(x, rx, y, ln, ry)
    dx = u * v
    dlm = u * vx - 2.0 * ux * v
    u, ux = _ranked_sum(y, ry, x, lm, rx)
    v, vx = _ranked_sum(y, ry, y, ln, ry)
    dy = u * v
    dln = ux * v - 2.0 * u * vx
    return dx, dlm, dy, dln


def _check_state(state: PeakonState, coalesced_ok: bool = False) -> None:
    if state.t.size != 1:
        raise ValueError("the ODE right-hand side needs a single-time state")
    p = state.chain_positions()[:, 0]
    # merged trajectories may swap by a few ulps; the true order is the layout's
    slack = ORDER_SLACK_ULPS * np.spacing(np.abs(p[1:])) if coalesced_ok else 0.0
    if np.any(np.diff(p) < -slack):
        raise OrderingError("positions are not in layout order")
    if not coalesced_ok and np.intersect1d(state.x[:, 0], state.y[:, 0]).size:
        raise ValueError("overlapping peakons (x_i = y_j) are not supported")


def ode_rhs_log(state: PeakonState, coalesced_ok: bool = False):
    """(x', (ln m)', y', (ln n)').

    The relative order of the peakons is taken from the layout.  With
    coalesced_ok, positions that agree to the last bit (peakons that converge
    onto one asymptotic line) are accepted; this is used for closed-form states
    whose order is known exactly.
    """
    _check_state(state, coalesced_ok)
    rx, ry = chain_ranks(state.layout)
    return _rhs_log(state.x[:, 0], state.log_m[:, 0], state.y[:, 0], state.log_n[:, 0], rx, ry)


def ode_rhs(state: PeakonState) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(x', y', m', n')."""
    dx, dlm, dy, dln = ode_rhs_log(state)
    return dx, dy, state.m[:, 0] * dlm, state.n[:, 0] * dln


def _chain_rhs(P, L, isx, sgn, mask):
    """(dP, dL) for positions and log amplitudes stored in chain order.

    mask is (2, n, n) with 0 on X (resp. Y) columns and -inf elsewhere, so
    each sum gets its own max shift.
    """
    E = (L[None, :] - np.abs(P[:, None] - P[None, :]))[None] + mask
    top = E.max(axis=2)
    top[~np.isfinite(top)] = 0.0
    w = np.exp(E - top[:, :, None])
    scale = np.exp(top)
    s0 = scale * w.sum(axis=2)
    s1 = scale * (w * sgn).sum(axis=2)
    u, v = s0
    ux, vx = s1
    dL = np.where(isx, u * vx - 2.0 * ux * v, ux * v - 2.0 * u * vx)
    return u * v, dL


def integrate(state0: PeakonState, t0: float, t1: float, steps: int) -> PeakonState:
    """Classical fixed-step RK4 in the variables (x, ln m, y, ln n)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    _check_state(state0)
    if t1 == t0:
        return state0
    rx, ry = chain_ranks(state0.layout)
    n = rx.size + ry.size
    ix, iy = rx.astype(int), ry.astype(int)
    P, L = np.empty(n), np.empty(n)
    P[ix], P[iy] = state0.x[:, 0], state0.y[:, 0]
    L[ix], L[iy] = state0.log_m[:, 0], state0.log_n[:, 0]
    isx = np.zeros(n, dtype=bool)
    isx[ix] = True
    idx = np.arange(n)
    sgn = np.sign(idx[None, :] - idx[:, None]).astype(float)
    mask = np.where(np.stack([isx, ~isx])[:, None, :], 0.0, -np.inf) + np.zeros((2, n, n))
    h = (t1 - t0) / steps
    for step in range(steps):
        a1, b1 = _chain_rhs(P, L, isx, sgn, mask)
        a2, b2 = _chain_rhs(P + 0.5 * h * a1, L + 0.5 * h * b1, isx, sgn, mask)
        a3, b3 = _chain_rhs(P + 0.5 * h * a2, L + 0.5 * h * b2, isx, sgn, mask)
        a4, b4 = _chain_rhs(P + h * a3, L + h * b3, isx, sgn, mask)
        P = P + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        L = L + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        if np.any(np.diff(P) <= 0):
            raise OrderingError(f"peakon ordering lost at step {step + 1} (t={t0 + (step + 1) * h})")
    z = [P[ix], L[ix], P[iy], L[iy]]
    return PeakonState.single(state0.layout, t1, z[0], z[1], z[2], z[3])


def residual_of(sol: Solution, t: float, h: float | None = None) -> float:
    """Max relative mismatch between finite-difference derivatives and the ODE."""
    if h is None:
        h = 1e-5 * max(1.0, abs(t))
    ps = sol.physical([t - h, t, t + h])
    cur = ps.at(1)
    rhs = ode_rhs_log(cur, coalesced_ok=True)
    fd = [(a[:, 2] - a[:, 0]) / (2.0 * h) for a in (ps.x, ps.log_m, ps.y, ps.log_n)]
    worst = 0.0
    for d, r in zip(fd, rhs):
        if d.size:
            worst = max(worst, float(np.max(np.abs(d - r) / (1.0 + np.abs(r)))))
    return worst


def residual(layout: GroupLayout, spectral: SpectralData, params: GroupParams,
             t: float, h: float | None = None) -> float:
    return residual_of(Solution(layout, spectral, params), t, h)
