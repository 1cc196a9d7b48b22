"""Log-domain evaluation of the bimoment determinant sums J[A,B,r,s,i,j](t).

Every J is a sum of positive terms, one per pair of index subsets (I, J),

    Psi_IJ * prod_{I} lambda^r a(t) * prod_{J} mu^s b(t),
    Psi_IJ = Delta_I^2 Delta~_J^2 / Gamma_IJ,

with a_i(t) = a_i(0) exp(t/lambda_i) and b_j(t) = b_j(0) exp(t/mu_j).  The
terms are kept as (log coefficient, rate) pairs so that the value at any t is
a single log-sum-exp and the t -> +-inf leading behaviour can be read off.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np
from scipy.special import logsumexp

from .spectral import SpectralData

DEFAULT_MAX_K = 12


class CapacityError(ValueError):
    pass


def max_k() -> int:
    return int(os.environ.get("PEAKON_GX_MAX_K", DEFAULT_MAX_K))


@dataclass(frozen=True, order=True)
class LogPositive:
    """A non-negative real stored as its natural log (-inf is exact zero)."""

    logval: float

    @classmethod
    def of(cls, value: float) -> "LogPositive":
        if value < 0:
            raise ValueError("LogPositive needs a non-negative value")
        return cls(math.log(value) if value > 0 else -math.inf)

    @classmethod
    def zero(cls) -> "LogPositive":
        return cls(-math.inf)

    @classmethod
    def one(cls) -> "LogPositive":
        return cls(0.0)

    @property
    def value(self) -> float:
        return math.exp(self.logval)

    @property
    def is_zero(self) -> bool:
        return self.logval == -math.inf

    def __add__(self, other: "LogPositive") -> "LogPositive":
        a, b = self.logval, other.logval
        if a < b:
            a, b = b, a
        if b == -math.inf:
            return LogPositive(a)
        return LogPositive(a + math.log1p(math.exp(b - a)))

    def __mul__(self, other: "LogPositive") -> "LogPositive":
        if self.is_zero or other.is_zero:
            return LogPositive.zero()
        return LogPositive(self.logval + other.logval)

    def __truediv__(self, other: "LogPositive") -> "LogPositive":
        if other.is_zero:
            raise ZeroDivisionError("division by exact zero")
        if self.is_zero:
            return self
        return LogPositive(self.logval - other.logval)


def _log_delta_sq(vals: Iterable[float]) -> float:
    v = list(vals)
    return float(sum(2.0 * math.log(abs(v[a] - v[b]))
                     for a in range(len(v)) for b in range(a + 1, len(v))))


def log_psi(I: Iterable[int], J: Iterable[int], spectral: SpectralData) -> float:
    """log Psi_IJ for 1-based index subsets I of [1,A] and J of [1,B]."""
    lam = [spectral.lambdas[i - 1] for i in sorted(I)]
    mu = [spectral.mus[j - 1] for j in sorted(J)]
    gamma = sum(math.log(l + m) for l in lam for m in mu)
    return _log_delta_sq(lam) + _log_delta_sq(mu) - gamma


def psi(I: Iterable[int], J: Iterable[int], spectral: SpectralData) -> LogPositive:
    return LogPositive(log_psi(I, J, spectral))


class PsiTable:
    """Cached log Psi_IJ keyed by subset bitmasks (bit k-1 set means index k)."""

    def __init__(self, spectral: SpectralData):
        self.spectral = spectral
        self._cache: dict[tuple[int, int], float] = {}

    @staticmethod
    def mask(indices: Iterable[int]) -> int:
        m = 0
        for k in indices:
            m |= 1 << (k - 1)
        return m

    @staticmethod
    def members(mask: int) -> list[int]:
        return [k + 1 for k in range(mask.bit_length()) if mask >> k & 1]

    def log_psi(self, I: Iterable[int], J: Iterable[int]) -> float:
        key = (self.mask(I), self.mask(J))
        if key not in self._cache:
            self._cache[key] = log_psi(self.members(key[0]), self.members(key[1]), self.spectral)
        return self._cache[key]


@dataclass(frozen=True)
class TermBlock:
    """All subset-pair terms of J[.,.,r,s,i,j]: log coefficients and rates."""

    logcoef: np.ndarray
    rate: np.ndarray
    subsets: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def empty(self) -> bool:
        return self.logcoef.size == 0


class DeterminantTable:
    """Lazy per-(i, j) subset enumeration for fixed spectral data and (A, B)."""

    def __init__(self, spectral: SpectralData, A: int | None = None, B: int | None = None):
        self.spectral = spectral
        self.A = spectral.A if A is None else A
        self.B = spectral.B if B is None else B
        cap = max_k()
        if self.A > cap or self.B > cap:
            raise CapacityError(f"A={self.A}, B={self.B} exceeds the enumeration cap {cap} "
                                f"(set PEAKON_GX_MAX_K to raise it)")
        if self.A > spectral.A or self.B > spectral.B:
            raise ValueError("spectral data too short for the requested A, B")
        lam = np.asarray(spectral.lambdas[: self.A])
        mu = np.asarray(spectral.mus[: self.B])
        self._loglam = np.log(lam)
        self._logmu = np.log(mu)
        self._invlam = 1.0 / lam
        self._invmu = 1.0 / mu
        self._loga = np.log(np.asarray(spectral.a0[: self.A]))
        self._logb = np.log(np.asarray(spectral.b0[: self.B]))
        self._cross = np.log(lam[:, None] + mu[None, :]) if self.A and self.B else np.zeros((self.A, self.B))
        self._base: dict[tuple[int, int], tuple] = {}
        self._blocks: dict[tuple[int, int, int, int], TermBlock] = {}

    def _subsets(self, n: int, k: int, vals: np.ndarray):
        subs = list(combinations(range(n), k))
        ind = np.zeros((len(subs), n))
        dsq = np.zeros(len(subs))
        for row, s in enumerate(subs):
            ind[row, list(s)] = 1.0
            dsq[row] = _log_delta_sq(vals[list(s)])
        return subs, ind, dsq

    def _base_block(self, i: int, j: int):
        if (i, j) not in self._base:
            lam = np.asarray(self.spectral.lambdas[: self.A])
            mu = np.asarray(self.spectral.mus[: self.B])
            sI, gI, dI = self._subsets(self.A, i, lam)
            sJ, gJ, dJ = self._subsets(self.B, j, mu)
            gamma = gI @ self._cross @ gJ.T if (i and j) else np.zeros((len(sI), len(sJ)))
            logpsi = dI[:, None] + dJ[None, :] - gamma
            rate = (gI @ self._invlam)[:, None] + (gJ @ self._invmu)[None, :]
            res = (gI @ self._loga)[:, None] + (gJ @ self._logb)[None, :]
            slam = np.broadcast_to((gI @ self._loglam)[:, None], logpsi.shape)
            smu = np.broadcast_to((gJ @ self._logmu)[None, :], logpsi.shape)
            pairs = tuple((tuple(a + 1 for a in p), tuple(b + 1 for b in q)) for p in sI for q in sJ)
            self._base[(i, j)] = ((logpsi + res).ravel(), slam.ravel(), smu.ravel(), rate.ravel(), pairs)
        return self._base[(i, j)]

    def block(self, r: int, s: int, i: int, j: int) -> TermBlock:
        key = (r, s, i, j)
        if key not in self._blocks:
            if not (0 <= i <= self.A and 0 <= j <= self.B):
                blk = TermBlock(np.zeros(0), np.zeros(0), ())
            else:
                base, slam, smu, rate, pairs = self._base_block(i, j)
                blk = TermBlock(base + r * slam + s * smu, rate, pairs)
            self._blocks[key] = blk
        return self._blocks[key]

    def log_j(self, r: int, s: int, i: int, j: int, t) -> np.ndarray:
        """log J at the times t (array), -inf for an out-of-range index."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        blk = self.block(r, s, i, j)
        if blk.empty:
            return np.full(t.shape, -np.inf)
        expo = blk.logcoef[:, None] + blk.rate[:, None] * t[None, :]
        return logsumexp(expo, axis=0)


def jdet(A: int, B: int, r: int, s: int, i: int, j: int, t: float,
         spectral: SpectralData) -> LogPositive:
    """J[A,B,r,s,i,j] at a single time t."""
    table = DeterminantTable(spectral, A, B)
    return LogPositive(float(table.log_j(r, s, i, j, t)[0]))
