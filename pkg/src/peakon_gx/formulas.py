"""Table-driven solution formulas for arbitrary pure-peakon group layouts.

The chain of groups X1, Y1, X2, ... is indexed by slot k = 1..S.  Each slot
has a "pure" ratio n_k / d_k of two J determinants, the value the slot takes
in the interlacing solution for a singleton.  A group formula combines the
pure ratios of its own slot and its two neighbours with the internal
parameters tau, sigma (typical groups), or uses dedicated keys (the leftmost
X group and the rightmost group).

Formulas are written once against a small algebra interface (J lookup,
positive constants, sums, products, quotients).  Plugging in log-domain
arrays gives numeric values; plugging in leading exponentials gives the
t -> +-inf behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np

from .determinants import DeterminantTable
from .spectral import GroupLayout, GroupParams, GroupSums, SpectralData, sums

Key = tuple[int, int, int, int]  # (r, s, i, j) of J^{rs}_{ij}


# ---------------------------------------------------------------------------
# index mapping

def j_index(parity: str, kind: str, jprime: int, K: int) -> int:
    """Determinant index j of the group with chain label jprime."""
    if parity == "even" or kind == "Y":
        return K + 1 - jprime
    return K + 2 - jprime


def jprime_index(parity: str, kind: str, j: int, K: int) -> int:
    """Inverse of j_index."""
    if parity == "even" or kind == "Y":
        return K + 1 - j
    return K + 2 - j


def dims(parity: str, K: int) -> tuple[int, int]:
    """(A, B) sizes of the determinants."""
    return (K, K - 1) if parity == "even" else (K, K)


def slot_label(k: int) -> tuple[str, int]:
    """Chain slot k (1-based) -> (kind, jprime)."""
    return ("X", (k + 1) // 2) if k % 2 == 1 else ("Y", k // 2)


def slot_keys(parity: str, K: int, k: int) -> tuple[Key, Key]:
    """(numerator, denominator) keys of the pure ratio of slot k."""
    kind, jp = slot_label(k)
    j = j_index(parity, kind, jp, K)
    if parity == "even":
        if kind == "X":
            return (0, 0, j, j), (1, 1, j - 1, j - 1)
        return (0, 0, j, j - 1), (1, 1, j - 1, j - 2)
    if kind == "X":
        return (0, 0, j - 1, j), (1, 1, j - 2, j - 1)
    return (0, 0, j, j), (1, 1, j - 1, j - 1)


def key_in_range(key: Key, A: int, B: int) -> bool:
    return 0 <= key[2] <= A and 0 <= key[3] <= B


# ---------------------------------------------------------------------------
# group records

@dataclass(frozen=True)
class GroupRecord:
    kind: str            # "X" or "Y"
    index: int           # jprime, 1-based within its kind
    slot: int            # 1-based position in the chain
    position: str        # "leftmost" | "typical" | "rightmost"
    size: int
    j: int               # determinant index
    keys: dict[str, Key] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"


def _typical_amp_keys(parity: str, kind: str, j: int) -> dict[str, Key]:
    if parity == "even" and kind == "X":
        return dict(p=(0, 1, j, j - 1), q1=(1, 0, j, j), q2=(1, 0, j, j - 1), q3=(1, 0, j - 1, j - 1))
    if parity == "even":
        return dict(p=(1, 0, j - 1, j - 1), q1=(0, 1, j, j - 1), q2=(0, 1, j - 1, j - 1),
                    q3=(0, 1, j - 1, j - 2))
    if kind == "X":
        return dict(p=(0, 1, j - 1, j - 1), q1=(1, 0, j - 1, j), q2=(1, 0, j - 1, j - 1),
                    q3=(1, 0, j - 2, j - 1))
    return dict(p=(1, 0, j - 1, j), q1=(0, 1, j, j), q2=(0, 1, j - 1, j), q3=(0, 1, j - 1, j - 1))


def _leftmost_keys(parity: str, K: int) -> dict[str, Key]:
    if parity == "even":
        return dict(n0=(0, 0, K, K - 1), a=(1, 1, K, K - 1), b=(1, 1, K - 1, K - 1),
                    c=(1, 1, K - 1, K - 2), pa=(0, 1, K, K - 1), e1=(1, 0, K, K - 1),
                    e2=(1, 0, K - 1, K - 1))
    return dict(n0=(0, 0, K, K), a=(1, 1, K, K), b=(1, 1, K - 1, K), c=(1, 1, K - 1, K - 1),
                pa=(0, 1, K, K), e1=(1, 0, K, K), e2=(1, 0, K - 1, K))


def _rightmost_keys(parity: str) -> dict[str, Key]:
    if parity == "even":
        return dict(alpha=(0, 0, 1, 1), beta=(0, 0, 1, 0), w=(0, 1, 1, 0))
    return dict(alpha=(0, 0, 1, 1), beta=(0, 0, 0, 1), w=(1, 0, 0, 1))


class FormulaTable:
    """Dispatch of every group of a layout to its formula record."""

    def __init__(self, layout: GroupLayout):
        self.layout = layout
        self.parity = layout.parity
        self.K = layout.K
        self.A, self.B = dims(self.parity, self.K)
        chain = layout.chain()
        self.S = len(chain)
        self.slots = [slot_keys(self.parity, self.K, k) for k in range(1, self.S + 1)]
        recs = []
        for k, (kind, idx, size) in enumerate(chain, start=1):
            j = j_index(self.parity, kind, idx, self.K)
            if k == 1:
                pos, keys = "leftmost", _leftmost_keys(self.parity, self.K)
            elif k == self.S:
                pos, keys = "rightmost", _rightmost_keys(self.parity)
            else:
                pos = "typical"
                names = ("alpha", "beta", "gamma", "delta", "epsilon", "phi")
                flat = self.slots[k - 2] + self.slots[k - 1] + self.slots[k]
                keys = dict(zip(names, flat))
                keys.update(_typical_amp_keys(self.parity, kind, j))
            recs.append(GroupRecord(kind, idx, k, pos, size, j, keys))
        self.records = recs

    def record(self, kind: str, index: int) -> GroupRecord:
        for r in self.records:
            if r.kind == kind and r.index == index:
                return r
        raise KeyError(f"{kind}{index}")

    def pure(self, alg: "Algebra", k: int):
        """(n_k, d_k) of slot k in the algebra; out-of-range keys are exact zeros."""
        nk, dk = self.slots[k - 1]
        return alg.J(*nk), alg.J(*dk)


# ---------------------------------------------------------------------------
# algebras

class Algebra(Protocol):
    def J(self, r: int, s: int, i: int, j: int) -> Any: ...
    def c(self, value: float) -> Any: ...
    def add(self, *xs: Any) -> Any: ...
    def mul(self, *xs: Any) -> Any: ...
    def div(self, a: Any, b: Any) -> Any: ...


def _log(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


class LogArrayAlgebra:
    """Values are numpy arrays of natural logs over a time grid."""

    def __init__(self, table: DeterminantTable, t):
        self.table = table
        self.t = np.atleast_1d(np.asarray(t, dtype=float))
        self._memo: dict[Key, np.ndarray] = {}

    def J(self, r, s, i, j):
        key = (r, s, i, j)
        if key not in self._memo:
            self._memo[key] = self.table.log_j(r, s, i, j, self.t)
        return self._memo[key]

    def c(self, value):
        return np.full(self.t.shape, _log(value))

    def add(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = np.logaddexp(out, x)
        return out

    def mul(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = out + x
        return out

    def div(self, a, b):
        return a - b


@dataclass(frozen=True)
class Lead:
    """Leading exponential coef * exp(rate * t); logc = -inf is exact zero."""

    rate: float
    logc: float

    @property
    def zero(self) -> bool:
        return self.logc == -math.inf


RATE_TIE = 1e-12


def lead_sum(items: list[Lead], direction: int) -> Lead:
    """Dominant part of a positive sum as t -> direction * inf."""
    live = [x for x in items if not x.zero]
    if not live:
        return Lead(0.0, -math.inf)
    best = max(x.rate * direction for x in live) * direction
    scale = 1.0 + abs(best)
    tied = [x.logc for x in live if abs(x.rate - best) <= RATE_TIE * scale]
    return Lead(best, float(np.logaddexp.reduce(tied)))


class LeadAlgebra:
    """Values are leading exponentials in the limit t -> direction * inf."""

    def __init__(self, table: DeterminantTable, direction: int):
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        self.table = table
        self.direction = direction
        self._memo: dict[Key, Lead] = {}

    def J(self, r, s, i, j):
        key = (r, s, i, j)
        if key not in self._memo:
            blk = self.table.block(r, s, i, j)
            terms = [Lead(float(a), float(b)) for a, b in zip(blk.rate, blk.logcoef)]
            self._memo[key] = lead_sum(terms, self.direction)
        return self._memo[key]

    def c(self, value):
        return Lead(0.0, _log(value))

    def add(self, *xs):
        return lead_sum(list(xs), self.direction)

    def mul(self, *xs):
        if any(x.zero for x in xs):
            return Lead(0.0, -math.inf)
        return Lead(sum(x.rate for x in xs), sum(x.logc for x in xs))

    def div(self, a, b):
        if b.zero:
            raise ZeroDivisionError("leading term of a denominator vanished")
        if a.zero:
            return a
        return Lead(a.rate - b.rate, a.logc - b.logc)


def lin(alg: Algebra, *pairs):
    """sum of coef * value over (coef, value) pairs with positive scalar coefs."""
    return alg.add(*[v if c == 1.0 else alg.mul(alg.c(c), v) for c, v in pairs if c != 0.0])


# ---------------------------------------------------------------------------
# group formulas

def _typical(alg: Algebra, keys: dict[str, Key], g: GroupSums):
    al, be, ga, de, ep, ph = (alg.J(*keys[n]) for n in
                              ("alpha", "beta", "gamma", "delta", "epsilon", "phi"))
    p, q1, q2, q3 = (alg.J(*keys[n]) for n in ("p", "q1", "q2", "q3"))
    N = g.N
    if N == 1:
        return [alg.div(ga, de)], [alg.div(alg.mul(de, p), alg.mul(q1, q3))]
    T, S, R, sig = g.T, g.S, g.R, g.sigma
    E = [q1] + [lin(alg, (1.0, q1), (sig[i], q2), (R[i], q3)) for i in range(1, N)]
    pos, amp = [], []
    for i in range(1, N):
        num = lin(alg, (1.0, al), (T[i], ga), (S[i], ep))
        den = lin(alg, (1.0, be), (T[i], de), (S[i], ph))
        pos.append(alg.div(num, den))
        amp.append(alg.div(alg.mul(alg.c(sig[i] - sig[i - 1]), p, den), alg.mul(E[i], E[i - 1])))
    s = sig[N - 1]
    den_n = lin(alg, (1.0, de), (s, ph))
    pos.append(alg.div(lin(alg, (1.0, ga), (s, ep)), den_n))
    amp.append(alg.div(alg.mul(p, den_n), alg.mul(q3, E[N - 1])))
    return pos, amp


def _leftmost(alg: Algebra, keys: dict[str, Key], g: GroupSums, spectral: SpectralData):
    n0, a, b, c, pa, e1, e2 = (alg.J(*keys[n]) for n in ("n0", "a", "b", "c", "pa", "e1", "e2"))
    C = spectral.bigC
    ml = alg.c(math.exp(spectral.log_M - spectral.log_L))
    N = g.N
    if N == 1:
        return ([alg.div(n0, lin(alg, (1.0, c), (C, e2)))],
                [alg.mul(ml, alg.add(alg.div(c, e2), alg.c(C)))])
    T, S, R, sig, tau = g.T, g.S, g.R, g.sigma, g.tau
    pos, amp = [], []
    den1 = lin(alg, (1.0, c), (1.0 / sig[1], b), (C, e2), (C / tau[1], e1))
    pos.append(alg.div(n0, den1))
    inner = alg.div(lin(alg, (1.0, c), (1.0 / sig[1], b)), lin(alg, (1.0, e2), (1.0 / tau[1], e1)))
    amp.append(alg.mul(ml, alg.add(inner, alg.c(C))))

    def ep(i):
        return lin(alg, (sig[i], e1), (R[i], e2))

    for i in range(2, N):
        den = lin(alg, (1.0, a), (T[i], b), (S[i], c))
        pos.append(alg.div(alg.mul(alg.c(S[i]), n0), den))
        amp.append(alg.div(alg.mul(alg.c(sig[i] - sig[i - 1]), pa, den), alg.mul(ep(i), ep(i - 1))))
    s = sig[N - 1]
    den_n = lin(alg, (1.0, b), (s, c))
    pos.append(alg.div(alg.mul(alg.c(s), n0), den_n))
    amp.append(alg.div(alg.mul(pa, den_n), alg.mul(e2, ep(N - 1))))
    return pos, amp


def _rightmost(alg: Algebra, keys: dict[str, Key], g: GroupSums, spectral: SpectralData):
    al, be, w = (alg.J(*keys[n]) for n in ("alpha", "beta", "w"))
    D = spectral.bigD
    one = alg.c(1.0)
    N = g.N
    if N == 1:
        return [lin(alg, (1.0, al), (D, be))], [alg.div(one, be)]
    T, S, sig = g.T, g.S, g.sigma
    pos, amp = [], []
    for i in range(1, N):
        pos.append(alg.add(al, alg.mul(alg.c(T[i]), be), alg.c(S[i])))
        amp.append(alg.div(alg.c(sig[i] - sig[i - 1]),
                           alg.mul(alg.add(w, alg.c(sig[i])), alg.add(w, alg.c(sig[i - 1])))))
    s = sig[N - 1]
    pos.append(alg.add(al, alg.mul(alg.c(T[N - 1] + D), be), alg.c(S[N - 1] + D * s)))
    amp.append(alg.div(one, alg.add(w, alg.c(s))))
    return pos, amp


def evaluate_group(table: FormulaTable, rec: GroupRecord, alg: Algebra,
                   params: GroupParams, spectral: SpectralData):
    """(positions, amplitudes) of one group in the scaled variables X,Q or Y,P."""
    g = sums(params.group(rec.kind, rec.index))
    if rec.position == "leftmost":
        return _leftmost(alg, rec.keys, g, spectral)
    if rec.position == "rightmost":
        return _rightmost(alg, rec.keys, g, spectral)
    return _typical(alg, rec.keys, g)


def evaluate(table: FormulaTable, alg: Algebra, params: GroupParams, spectral: SpectralData):
    """Scaled values of every group in chain order: list of (record, pos, amp)."""
    return [(rec, *evaluate_group(table, rec, alg, params, spectral)) for rec in table.records]
