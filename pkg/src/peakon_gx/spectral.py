"""Spectral data, group layouts, internal group parameters and validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ConfigError(ValueError):
    """Raised when a configuration fails validation."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.summary())


@dataclass(frozen=True)
class SpectralData:
    lambdas: tuple[float, ...]
    mus: tuple[float, ...]
    a0: tuple[float, ...]
    b0: tuple[float, ...]
    bigC: float
    bigD: float

    def __init__(self, lambdas: Sequence[float], mus: Sequence[float],
                 a0: Sequence[float], b0: Sequence[float], bigC: float, bigD: float):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in lambdas))
        object.__setattr__(self, "mus", tuple(float(v) for v in mus))
        object.__setattr__(self, "a0", tuple(float(v) for v in a0))
        object.__setattr__(self, "b0", tuple(float(v) for v in b0))
        object.__setattr__(self, "bigC", float(bigC))
        object.__setattr__(self, "bigD", float(bigD))

    @property
    def A(self) -> int:
        return len(self.lambdas)

    @property
    def B(self) -> int:
        return len(self.mus)

    @property
    def log_L(self) -> float:
        return float(sum(math.log(v) for v in self.lambdas))

    @property
    def log_M(self) -> float:
        # empty product is 1
        return float(sum(math.log(v) for v in self.mus))


@dataclass(frozen=True)
class GroupLayout:
    x_sizes: tuple[int, ...]
    y_sizes: tuple[int, ...]

    def __init__(self, x_sizes: Sequence[int], y_sizes: Sequence[int]):
        object.__setattr__(self, "x_sizes", tuple(int(v) for v in x_sizes))
        object.__setattr__(self, "y_sizes", tuple(int(v) for v in y_sizes))

    @property
    def parity(self) -> str:
        return "even" if len(self.x_sizes) == len(self.y_sizes) else "odd"

    @property
    def K(self) -> int:
        return len(self.y_sizes)

    def chain(self) -> list[tuple[str, int, int]]:
        """Groups left to right as (kind, 1-based index, size)."""
        out = []
        for k in range(len(self.x_sizes) + len(self.y_sizes)):
            if k % 2 == 0:
                out.append(("X", k // 2 + 1, self.x_sizes[k // 2]))
            else:
                out.append(("Y", k // 2 + 1, self.y_sizes[k // 2]))
        return out

    @classmethod
    def interlacing(cls, parity: str, K: int) -> "GroupLayout":
        nx = K if parity == "even" else K + 1
        return cls([1] * nx, [1] * K)

    def singletons(self) -> "GroupLayout":
        return GroupLayout([1] * len(self.x_sizes), [1] * len(self.y_sizes))


@dataclass(frozen=True)
class Group:
    taus: tuple[float, ...] = ()
    sigmas: tuple[float, ...] = ()

    def __init__(self, taus: Sequence[float] = (), sigmas: Sequence[float] = ()):
        object.__setattr__(self, "taus", tuple(float(v) for v in taus))
        object.__setattr__(self, "sigmas", tuple(float(v) for v in sigmas))

    @property
    def size(self) -> int:
        return len(self.taus) + 1


@dataclass(frozen=True)
class GroupParams:
    x: tuple[Group, ...]
    y: tuple[Group, ...]

    def __init__(self, x: Sequence[Group], y: Sequence[Group]):
        object.__setattr__(self, "x", tuple(x))
        object.__setattr__(self, "y", tuple(y))

    @classmethod
    def singletons(cls, layout: GroupLayout) -> "GroupParams":
        return cls([Group() for _ in layout.x_sizes], [Group() for _ in layout.y_sizes])

    def group(self, kind: str, index: int) -> Group:
        return (self.x if kind == "X" else self.y)[index - 1]


@dataclass(frozen=True)
class GroupSums:
    """T, S, R and sigma for i = 0..N-1 (index 0 holds the zero conventions)."""

    T: tuple[float, ...]
    S: tuple[float, ...]
    R: tuple[float, ...]
    sigma: tuple[float, ...]
    tau: tuple[float, ...]

    @property
    def N(self) -> int:
        return len(self.T)


def sums(group: Group) -> GroupSums:
    """Partial sums T_i, S_i, R_i of one group, for i = 0..N-1."""
    tau = (0.0,) + group.taus
    sig = (0.0,) + group.sigmas
    n = len(tau)
    T = [0.0] * n
    S = [0.0] * n
    R = [0.0] * n
    for i in range(1, n):
        T[i] = T[i - 1] + tau[i]
        S[i] = math.fsum(tau[b + 1] * sig[b] for b in range(1, i))
        # the positive-term form of sigma_i T_i - S_i avoids cancellation
        R[i] = math.fsum(tau[a] * (sig[i] - sig[a - 1]) for a in range(1, i + 1))
    return GroupSums(tuple(T), tuple(S), tuple(R), sig, tau)


# ---------------------------------------------------------------------------
# validation

STRUCTURAL_CODES = {
    "layout-shape": "layout must alternate X,Y,... starting with X, with Kx = Ky or Kx = Ky + 1",
    "layout-size": "every group size must be >= 1",
    "spectral-count": "number of eigenvalues/residues does not match the layout",
    "group-count": "number of group parameter records does not match the layout",
    "tau-sigma-count": "a group of size N needs N-1 taus and N-1 sigmas",
}

CONSTRAINT_CODES = {
    "lambda-positive": "eigenvalues lambda must be positive",
    "lambda-increasing": "eigenvalues lambda must be strictly increasing",
    "mu-positive": "eigenvalues mu must be positive",
    "mu-increasing": "eigenvalues mu must be strictly increasing",
    "residue-positive": "residues a(0), b(0) must be positive",
    "C-positive": "C must be positive",
    "D-positive": "D must be positive",
    "tau-positive": "group taus must be positive",
    "sigma-positive": "first sigma of a group must be positive",
    "sigma-increasing": "sigmas of a group must be strictly increasing",
    "sigma-last<tau-first": "last sigma of a group must be below the first tau of the next group",
    "sigma-last<D": "last sigma of the second-rightmost group must be below D",
    "M<C*tau": "M < C tau^Y_{1,1} is required when X_1 is a singleton and Y_1 is not",
    "tau1*M<C*sigma1*tau2": "tau_1 M < C sigma_1 tau_2 is required in the leftmost X group when it has 3 or more peakons",
    "CD>1": "CD > 1 is required in the 1+1 interlacing case",
}

WARNING_CODES = {
    "eigenvalue-conditioning": "eigenvalue gap below 1e-9 times the largest eigenvalue",
}


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    group: str | None = None
    member: int | None = None
    structural: bool = False

    def __str__(self) -> str:
        where = ""
        if self.group is not None:
            where = f" [group {self.group}" + (f", i={self.member}" if self.member else "") + "]"
        return f"{self.code}: {self.message}{where}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    warnings: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def structural(self) -> bool:
        return any(v.structural for v in self.violations)

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def summary(self) -> str:
        if self.ok:
            return "OK"
        return "; ".join(str(v) for v in self.violations)


def _increasing(vals: Sequence[float]) -> list[int]:
    return [i + 1 for i in range(1, len(vals)) if not vals[i] > vals[i - 1]]


def validate(layout: GroupLayout, spectral: SpectralData, params: GroupParams) -> ValidationReport:
    """Collect every structural problem and every violated constraint."""
    bad: list[Violation] = []
    warn: list[Violation] = []

    def err(code, group=None, member=None, extra=""):
        structural = code in STRUCTURAL_CODES
        base = STRUCTURAL_CODES.get(code) or CONSTRAINT_CODES[code]
        bad.append(Violation(code, base + extra, group, member, structural))

    nx, ny = len(layout.x_sizes), len(layout.y_sizes)
    if ny < 1 or nx not in (ny, ny + 1):
        err("layout-shape", extra=f" (got {nx} X groups, {ny} Y groups)")
        return ValidationReport(tuple(bad))
    if any(n < 1 for n in layout.x_sizes + layout.y_sizes):
        err("layout-size")
        return ValidationReport(tuple(bad))
    K = ny
    B_expected = K - 1 if layout.parity == "even" else K
    if (spectral.A != K or len(spectral.a0) != K or spectral.B != B_expected
            or len(spectral.b0) != B_expected):
        err("spectral-count", extra=f" (need {K} lambdas/a0 and {B_expected} mus/b0)")
    if len(params.x) != nx or len(params.y) != ny:
        err("group-count")
    else:
        for kind, idx, size in layout.chain():
            g = params.group(kind, idx)
            if len(g.taus) != size - 1 or len(g.sigmas) != size - 1:
                err("tau-sigma-count", f"{kind}{idx}")
    if bad:
        return ValidationReport(tuple(bad))

    lam, mu = spectral.lambdas, spectral.mus
    for i, v in enumerate(lam):
        if not v > 0:
            err("lambda-positive", member=i + 1)
    for i in _increasing(lam):
        err("lambda-increasing", member=i)
    for i, v in enumerate(mu):
        if not v > 0:
            err("mu-positive", member=i + 1)
    for i in _increasing(mu):
        err("mu-increasing", member=i)
    for i, v in enumerate(spectral.a0 + spectral.b0):
        if not v > 0:
            err("residue-positive", member=i + 1)
    if not spectral.bigC > 0:
        err("C-positive")
    if not spectral.bigD > 0:
        err("D-positive")

    chain = layout.chain()
    for kind, idx, size in chain:
        g = params.group(kind, idx)
        name = f"{kind}{idx}"
        for i, v in enumerate(g.taus):
            if not v > 0:
                err("tau-positive", name, i + 1)
        if g.sigmas and not g.sigmas[0] > 0:
            err("sigma-positive", name, 1)
        for i in _increasing(g.sigmas):
            err("sigma-increasing", name, i)

    for (k1, i1, n1), (k2, i2, n2) in zip(chain, chain[1:]):
        if n1 >= 2 and n2 >= 2:
            left, right = params.group(k1, i1), params.group(k2, i2)
            if not left.sigmas[-1] < right.taus[0]:
                err("sigma-last<tau-first", f"{k1}{i1}/{k2}{i2}")
    (kl, il, nl), (kr, ir, nr) = chain[-2], chain[-1]
    if nr == 1 and nl >= 2 and not params.group(kl, il).sigmas[-1] < spectral.bigD:
        err("sigma-last<D", f"{kl}{il}")

    M = math.prod(mu)  # plain product: a bad mu is already reported above
    C = spectral.bigC
    nx1, ny1 = layout.x_sizes[0], layout.y_sizes[0]
    if nx1 == 1 and ny1 >= 2 and not M < C * params.y[0].taus[0]:
        err("M<C*tau", "Y1")
    if nx1 >= 3:
        g = params.x[0]
        if not g.taus[0] * M < C * g.sigmas[0] * g.taus[1]:
            err("tau1*M<C*sigma1*tau2", "X1")
    if layout.parity == "even" and K == 1 and nx1 == 1 and ny1 == 1:
        if not C * spectral.bigD > 1:
            err("CD>1")

    eig = [v for v in lam + mu if v > 0]
    if eig:
        top = max(eig)
        for vals, label in ((lam, "lambda"), (mu, "mu")):
            gaps = np.diff(np.asarray(vals)) if len(vals) > 1 else np.array([])
            if gaps.size and np.min(np.abs(gaps)) < 1e-9 * top:
                warn.append(Violation("eigenvalue-conditioning",
                                      WARNING_CODES["eigenvalue-conditioning"] + f" ({label})"))
    return ValidationReport(tuple(bad), tuple(warn))


def require_valid(layout: GroupLayout, spectral: SpectralData, params: GroupParams) -> None:
    rep = validate(layout, spectral, params)
    if not rep.ok:
        raise ConfigError(rep)
