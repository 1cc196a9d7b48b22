"""Characteristic curves x = xi(t; theta) filling the gaps between peakons.

Every family is written in one form.  A family lists a few slots, each a pair
(n, d) of J determinants or constants, and two coefficient vectors c0, c1:

    Xi(theta) = sum_k (c0_k + theta c1_k) n_k / sum_k (c0_k + theta c1_k) d_k,

with xi = 1/2 ln(2 Xi).  The far-left family is the exception and is stored
through 1/Xi = 1/X_first + 1/theta.  The endpoints of each theta range give
the two peakons bounding the region.

Because Xi is a Moebius function of theta, the difference between two
members is

    Xi(th2) - Xi(th1) = (th2 - th1) G / (B(th1) B(th2)),
    G = sum_{k<l} (c0_k c1_l - c0_l c1_k) (d_k n_l - n_k d_l),

and every weight and every 2x2 minor in G is positive.  Evaluating the
minors with log1p gives gaps that stay accurate long after the positions
themselves have merged in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .field import OrderingError, _peakon_sum
from .formulas import FormulaTable, LogArrayAlgebra
from .solver import LOG2, Solution
from .spectral import sums

Spec = Union[tuple, float]  # a J key (r, s, i, j) or a constant
INF = math.inf


@dataclass(frozen=True)
class CharFamily:
    region: str                       # within | between | far-left | far-right
    groups: tuple[str, ...]
    member: int | None
    theta_range: tuple[float, float]
    slots: tuple[tuple[Spec, Spec], ...]
    c0: tuple[float, ...]
    c1: tuple[float, ...]
    solution: Solution = field(repr=False, compare=False, default=None)
    weights: tuple[tuple[int, int, float], ...] | None = None

    def pair_weights(self) -> list[tuple[int, int, float]]:
        """(k, l, c0_k c1_l - c0_l c1_k) for k < l, nonzero entries only."""
        if self.weights is not None:
            return list(self.weights)
        out = []
        for k in range(len(self.slots)):
            for l in range(k + 1, len(self.slots)):
                w = self.c0[k] * self.c1[l] - self.c0[l] * self.c1[k]
                if w != 0.0:
                    out.append((k, l, w))
        return out

    @property
    def label(self) -> str:
        if self.region == "within":
            return f"within {self.groups[0]} gap {self.member}"
        if self.region == "between":
            return f"between {self.groups[0]} and {self.groups[1]}"
        return self.region

    @property
    def formula(self) -> dict:
        return {"slots": self.slots, "c0": self.c0, "c1": self.c1}


def _val(alg, spec):
    return alg.J(*spec) if isinstance(spec, tuple) else alg.c(float(spec))


def _combo(alg, vals, coefs):
    terms = [v if c == 1.0 else alg.mul(alg.c(c), v) for c, v in zip(coefs, vals) if c != 0.0]
    return alg.add(*terms) if terms else alg.c(0.0)


def _nd(fam: CharFamily, alg):
    ns = [_val(alg, s[0]) for s in fam.slots]
    ds = [_val(alg, s[1]) for s in fam.slots]
    return ns, ds


def log_xi_scaled(fam: CharFamily, theta: float, alg) -> np.ndarray:
    """log Xi(theta) on the algebra's time grid (theta may be +inf)."""
    ns, ds = _nd(fam, alg)
    if fam.region == "far-left":
        P, Q = _combo(alg, ns, fam.c0), _combo(alg, ds, fam.c0)
        if theta == INF:
            return P - Q
        lt = math.log(theta)
        return lt + P - np.logaddexp(P, lt + Q)
    if theta == INF:
        coefs = fam.c1
    else:
        coefs = [a + theta * b for a, b in zip(fam.c0, fam.c1)]
    return _combo(alg, ns, coefs) - _combo(alg, ds, coefs)


def _check_theta(fam: CharFamily, theta: float) -> None:
    lo, hi = fam.theta_range
    if not lo < theta < hi:
        raise ValueError(f"theta={theta} outside ({lo}, {hi}) for {fam.label}")


def xi(family: CharFamily, theta: float, t) -> np.ndarray:
    """Position xi(t; theta) for theta strictly inside the family's range."""
    _check_theta(family, theta)
    alg = family.solution.algebra(t)
    return 0.5 * (log_xi_scaled(family, theta, alg) + LOG2)


def xi_limit(family: CharFamily, end: str, t) -> np.ndarray:
    """Endpoint curve ("lower" or "upper") of a family, including theta = inf."""
    lo, hi = family.theta_range
    alg = family.solution.algebra(t)
    return 0.5 * (log_xi_scaled(family, lo if end == "lower" else hi, alg) + LOG2)


def theta_scale(family: CharFamily, t) -> np.ndarray:
    """Size of theta at which the theta terms start to matter, per time.

    Near theta = 0 a gap family moves like 1/2 ln((1 + theta/a)/(1 + theta/b))
    with a = N0/N1 and b = D0/D1; the smaller of the two is returned.  This is
    the yardstick for "theta close to 0", which has no fixed scale of its own.
    """
    if family.region == "far-left":
        raise ValueError("far-left has no finite trajectory at theta = 0")
    alg = family.solution.algebra(t)
    ns, ds = _nd(family, alg)
    n0, n1 = _combo(alg, ns, family.c0), _combo(alg, ns, family.c1)
    d0, d1 = _combo(alg, ds, family.c0), _combo(alg, ds, family.c1)
    with np.errstate(invalid="ignore"):
        return np.exp(np.fmin(n0 - n1, d0 - d1))


def near_endpoint(family: CharFamily, end: str, t, eps: float = 1e-6) -> np.ndarray:
    """theta at relative distance eps from a finite endpoint, per time.

    A nonzero endpoint e gives e (1 + eps) or e (1 - eps).  The endpoint 0 uses
    eps times theta_scale, capped at eps times the upper endpoint.
    """
    lo, hi = family.theta_range
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if end == "upper":
        if hi == INF:
            raise ValueError(f"{family.label} has no finite upper endpoint")
        return np.full(t.shape, hi * (1.0 - eps))
    if lo > 0.0:
        return np.full(t.shape, lo * (1.0 + eps))
    return eps * np.fmin(theta_scale(family, t), hi)


def _log_field(q: np.ndarray, pos: np.ndarray, logamp: np.ndarray) -> np.ndarray:
    """log sum_k exp(logamp_k - |q - pos_k|) column by column; pos has shape (count, nt)."""
    if pos.shape[0] == 0:
        return np.full(q.shape, -np.inf)
    e = logamp - np.abs(pos - q[None, :])
    top = np.max(e, axis=0)
    return top + np.log(np.sum(np.exp(e - top[None, :]), axis=0))


def char_residuals(family: CharFamily, theta: float, t, h: float | None = None) -> np.ndarray:
    """|d xi/dt - u(xi) v(xi)| / (1 + |u v|) at each t, central differences."""
    _check_theta(family, theta)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    hh = 1e-5 * np.maximum(1.0, np.abs(t)) if h is None else np.full(t.shape, float(h))
    sol = family.solution
    n = t.size
    z = 0.5 * (log_xi_scaled(family, theta, sol.algebra(np.concatenate([t - hh, t, t + hh]))) + LOG2)
    z = np.broadcast_to(z, (3 * n,))
    zm, z0, zp = z[:n], z[n:2 * n], z[2 * n:]
    st = sol.physical(t)
    uv = np.exp(_log_field(z0, st.x, st.log_m) + _log_field(z0, st.y, st.log_n))
    fd = (zp - zm) / (2.0 * hh)
    return np.abs(fd - uv) / (1.0 + np.abs(uv))


def char_residual(family: CharFamily, theta: float, t: float, h: float | None = None) -> float:
    """|d xi/dt - u(xi) v(xi)| / (1 + |u v|) with a central difference."""
    return float(char_residuals(family, theta, [t], h)[0])


def default_thetas(family: CharFamily, count: int = 14) -> np.ndarray:
    """A fan of interior theta values, geometric in theta; endpoints are excluded."""
    lo, hi = family.theta_range
    if lo == 0.0 and hi == INF:
        return 10.0 ** np.linspace(-35.0, 30.0, count)
    if lo == 0.0:
        return hi * 10.0 ** np.linspace(-30.0, -1e-3, count)
    if hi == INF:
        return lo * 10.0 ** np.linspace(1e-3, 30.0, count)
    u = np.linspace(1e-3, 1.0 - 1e-3, count)
    return lo * (hi / lo) ** u


# ---------------------------------------------------------------------------
# enumeration

def enumerate_families(layout, spectral, params, solution: Solution | None = None) -> list[CharFamily]:
    """Far-left, then every gap left to right, then far-right."""
    sol = solution if solution is not None else Solution(layout, spectral, params)
    table: FormulaTable = sol.table
    S = table.S
    M = math.exp(spectral.log_M)
    C, D = spectral.bigC, spectral.bigD
    recs = table.records
    slot = lambda k: table.slots[k - 1]
    fams: list[CharFamily] = []

    def add(region, groups, member, rng, slots, c0, c1, weights=None):
        fams.append(CharFamily(region, tuple(groups), member, (float(rng[0]), float(rng[1])),
                               tuple(slots), tuple(float(v) for v in c0), tuple(float(v) for v in c1),
                               sol, weights))

    first = recs[0]
    g1 = sums(params.group(first.kind, first.index))
    # neighbourhood of a group: left, own, right slots (virtual slots at the ends)
    lk = first.keys
    left_virtual = (0.0, lk["a"])
    right_virtual = (1.0, 0.0)

    def triple(rec):
        k = rec.slot
        left = slot(k - 1) if k > 1 else left_virtual
        right = slot(k + 1) if k < S else right_virtual
        return [left, slot(k), right]

    # far-left: X_first = P/Q
    if first.size == 1:
        thm = M / C
        add("far-left", [first.name], None, (0.0, INF), [slot(1), slot(2)], [1.0, thm], [0.0, 0.0])
    else:
        theta0 = g1.tau[1] * M / (g1.sigma[1] * C)
        c0 = [1.0, g1.T[1] + theta0, theta0 * g1.sigma[1]]
        add("far-left", [first.name], None, (0.0, INF), triple(first), c0, [0.0, 0.0, 0.0])

    for pos, rec in enumerate(recs):
        g = sums(params.group(rec.kind, rec.index))
        N = g.N
        for i in range(1, N):
            lo = 0.0
            if rec.position == "leftmost" and i == 1:
                lo = g.tau[1] * M / (g.sigma[1] * C)
            if i <= N - 2:
                hi = g.tau[i + 1]
            elif rec.position == "rightmost":
                hi = D
            else:
                hi = INF
            # T_i sigma_i - S_i is R_i, taken from its positive-term form
            add("within", [rec.name], i, (lo, hi), triple(rec),
                [1.0, g.T[i], g.S[i]], [0.0, 1.0, g.sigma[i]],
                ((0, 1, 1.0), (0, 2, g.sigma[i]), (1, 2, g.R[i])))
        if pos + 1 < len(recs):
            nxt = recs[pos + 1]
            gn = sums(params.group(nxt.kind, nxt.index))
            if N >= 2:
                lo = g.sigma[N - 1]
            elif rec.slot == 1:
                lo = M / C
            else:
                lo = 0.0
            if gn.N >= 2:
                hi = gn.tau[1]
            elif nxt.slot == S:
                hi = D
            else:
                hi = INF
            add("between", [rec.name, nxt.name], None, (lo, hi), [slot(rec.slot), slot(nxt.slot)],
                [1.0, 0.0], [0.0, 1.0])

    last = recs[-1]
    gl = sums(params.group(last.kind, last.index))
    if gl.N == 1:
        c0 = [1.0, D, 0.0]
    else:
        n1 = gl.N - 1
        c0 = [1.0, gl.T[n1] + D, gl.S[n1] + D * gl.sigma[n1]]
    add("far-right", [last.name], None, (0.0, INF), triple(last), c0, [0.0, 0.0, 1.0])
    return fams


# ---------------------------------------------------------------------------
# gaps

MINOR_RESOLUTION = 1e-12
FLOAT_SLACK_ULPS = 8


def _log_minor(ldk, lnl, lnk, ldl):
    """log(d_k n_l - n_k d_l) and a flag for minors too close to cancellation."""
    big = ldk + lnl
    small = lnk + ldl
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(np.isfinite(small), small - big, -np.inf)
        ok = ratio < math.log1p(-MINOR_RESOLUTION)
        val = big + np.log1p(-np.exp(np.minimum(ratio, 0.0)))
    return np.where(ok, val, np.nan), ok


def log_scaled_gap(fam: CharFamily, alg, th1: float | None = None,
                   th2: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """log(Xi(th2) - Xi(th1)) for a gap family, plus a certified flag.

    th1 and th2 default to the two ends of the range, giving the peakon gap.
    """
    if fam.region not in ("within", "between"):
        raise ValueError("gaps are defined for within/between families")
    lo = fam.theta_range[0] if th1 is None else th1
    hi = fam.theta_range[1] if th2 is None else th2
    if not fam.theta_range[0] <= lo < hi <= fam.theta_range[1]:
        raise ValueError(f"need lower <= th1 < th2 <= upper for {fam.label}")
    ns, ds = _nd(fam, alg)
    terms, certified = [], np.ones(alg.t.shape, dtype=bool)
    for k, l, w in fam.pair_weights():
        if w < 0:
            raise ArithmeticError("negative weight in a gap expansion")
        lm, ok = _log_minor(ds[k], ns[l], ns[k], ds[l])
        exact_zero = ~np.isfinite(ns[l]) | ~np.isfinite(ds[k])
        lm = np.where(exact_zero, -np.inf, lm)
        ok = ok | exact_zero
        certified &= ok
        terms.append(math.log(w) + lm)
    G = terms[0]
    for t_ in terms[1:]:
        G = np.logaddexp(G, t_)

    def den(theta):
        coefs = fam.c1 if theta == INF else [a + theta * b for a, b in zip(fam.c0, fam.c1)]
        return _combo(alg, ds, coefs)

    if hi == INF:
        out = G - den(lo) - den(INF)
    else:
        out = math.log(hi - lo) + G - den(lo) - den(hi)
    certified &= np.isfinite(out)
    return out, certified


def log_position_gap(fam: CharFamily, alg) -> tuple[np.ndarray, np.ndarray]:
    """log(x_right - x_left) for the two peakons bounding a gap family."""
    lg, ok = log_scaled_gap(fam, alg)
    lx = log_xi_scaled(fam, fam.theta_range[0], alg)
    u = lg - lx
    # x_right - x_left = 1/2 log1p(exp(u))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        inner = np.where(u < -30.0, u, np.log(np.log1p(np.exp(np.minimum(u, 700.0)))))
        inner = np.where(u > 700.0, np.log(np.maximum(u, 1.0)), inner)
    return math.log(0.5) + inner, ok


@dataclass(frozen=True)
class OrderingReport:
    t: np.ndarray
    labels: list[str]
    log_gaps: np.ndarray        # (gaps, len(t))
    certified: np.ndarray       # (gaps, len(t))
    float_ordered: np.ndarray   # double positions in order up to rounding, per t

    @property
    def ok(self) -> bool:
        return bool(np.all(self.certified) and np.all(np.isfinite(self.log_gaps))
                    and np.all(self.float_ordered))


def ordering_report(sol: Solution, t) -> OrderingReport:
    """Strict ordering of all consecutive peakons, certified through the gap minors."""
    fams = [f for f in enumerate_families(sol.layout, sol.spectral, sol.params, sol)
            if f.region in ("within", "between")]
    alg = sol.algebra(t)
    gaps, cert = [], []
    for f in fams:
        g, ok = log_position_gap(f, alg)
        gaps.append(g)
        cert.append(ok)
    pos = sol.physical(alg.t).chain_positions()
    # merged trajectories may come out an ulp or two apart in either order
    slack = FLOAT_SLACK_ULPS * np.finfo(float).eps * np.maximum(1.0, np.abs(pos[1:]))
    float_ok = np.all(np.diff(pos, axis=0) >= -slack, axis=0)
    return OrderingReport(alg.t, [f.label for f in fams], np.vstack(gaps), np.vstack(cert), float_ok)


def check_ordering(sol: Solution, t) -> None:
    rep = ordering_report(sol, t)
    if not rep.ok:
        raise OrderingError("strict ordering could not be certified")
