"""Asymptotic lines transcribed clause by clause from the closed-form theorems.

Each clause gives a position line c t + d and a log-amplitude line for one
peakon, in terms of the eigenvalues, residues a_j(0), b_j(0), the constants
C, D, the group sums T_i, S_i, R_i, sigma_i, tau_i and ratios of Psi_IJ.

Notation in the code:
    lam(a, b)   ln of lambda_a ... lambda_b   (empty range gives 0)
    mu(a, b)    ln of mu_a ... mu_b
    P(a, b, c, d)  ln Psi_{[a,b][c,d]}
    la(j), lb(j)   ln a_j(0), ln b_j(0)
    il(j), im(j)   1/lambda_j, 1/mu_j

A clause holds (pos_slope, H, amp_slope, E): the position line is
pos_slope t + H/2 and the log-amplitude line is amp_slope t + H/2 + E.

A few printed clauses disagree with the closed-form solution; those are
corrected here and each correction is marked with a CORRECTED comment that
gives the printed form.  The engine route (engine.py) is the independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..determinants import PsiTable
from ..spectral import GroupLayout, GroupParams, SpectralData, require_valid, sums
from .lines import AsymptoteLine, direction_name, direction_sign

LN2 = math.log(2.0)


class ClauseError(RuntimeError):
    """No theorem clause covers the requested target (internal error for valid layouts)."""


@dataclass(frozen=True)
class Clause:
    pos_slope: float
    H: float
    amp_slope: float
    E: float
    name: str = ""

    def lines(self, target: str, direction: str) -> tuple[AsymptoteLine, AsymptoteLine]:
        d_pos = 0.5 * self.H
        d_amp = 0.5 * self.H + self.E
        pos = AsymptoteLine(self.pos_slope, d_pos, direction, target, "position", self.pos_slope == 0.0)
        amp = AsymptoteLine(self.amp_slope, d_amp, direction, target, "log-amplitude", self.amp_slope == 0.0)
        return pos, amp


class _Ctx:
    def __init__(self, layout: GroupLayout, spectral: SpectralData, params: GroupParams):
        self.layout = layout
        self.spectral = spectral
        self.params = params
        self.K = layout.K
        self.psi = PsiTable(spectral)
        self._llam = [math.log(v) for v in spectral.lambdas]
        self._lmu = [math.log(v) for v in spectral.mus]
        self.lnL = spectral.log_L
        self.lnM = spectral.log_M
        self.lnC = math.log(spectral.bigC)
        self.lnD = math.log(spectral.bigD)
        self.C = spectral.bigC
        self.D = spectral.bigD

    def lam(self, a: int, b: int) -> float:
        return math.fsum(self._llam[a - 1:b]) if a <= b else 0.0

    def mu(self, a: int, b: int) -> float:
        return math.fsum(self._lmu[a - 1:b]) if a <= b else 0.0

    def P(self, a: int, b: int, c: int, d: int) -> float:
        return self.psi.log_psi(range(a, b + 1), range(c, d + 1))

    def la(self, j: int) -> float:
        return math.log(self.spectral.a0[j - 1])

    def lb(self, j: int) -> float:
        return math.log(self.spectral.b0[j - 1])

    def il(self, j: int) -> float:
        return 1.0 / self.spectral.lambdas[j - 1]

    def im(self, j: int) -> float:
        return 1.0 / self.spectral.mus[j - 1]


class _G:
    """Log group sums of one group, 1-based member index."""

    def __init__(self, group):
        s = sums(group)
        self.N = s.N
        self._s = s

    @staticmethod
    def _ln(v: float) -> float:
        return math.log(v) if v > 0 else -math.inf

    def T(self, i):
        return self._ln(self._s.T[i])

    def S(self, i):
        return self._ln(self._s.S[i])

    def R(self, i):
        return self._ln(self._s.R[i])

    def sig(self, i):
        return self._ln(self._s.sigma[i])

    def tau(self, i):
        return self._ln(self._s.tau[i])

    def dsig(self, i):
        return self._ln(self._s.sigma[i] - self._s.sigma[i - 1])

    def raw(self):
        return self._s

    def tail(self, i):
        """ln((sigma_i - sigma_{i-1}) S_i / (R_i R_{i-1})), or ln(sigma_{N-1}/R_{N-1}) for i = N."""
        if i == self.N:
            return self.sig(i - 1) - self.R(i - 1)
        return self.dsig(i) + self.S(i) - self.R(i) - self.R(i - 1)


# ---------------------------------------------------------------------------
# even case, K+K groups: A = K, B = K - 1

def _even_single_plus(c: _Ctx, kind: str, jp: int) -> Clause:
    K = c.K
    if K == 1:
        return _even_k1_single(c, kind)
    if kind == "X":
        if jp == 1:
            H = LN2 + c.la(K) + c.P(1, K, 1, K - 1) - c.lnC - c.lam(1, K - 1) - c.P(1, K - 1, 1, K - 1)
            return Clause(0.5 * c.il(K), H, 0.5 * c.il(K), c.lnM + c.lnC - LN2 - c.lnL, name="even+ X leftmost singleton")
        j = K + 1 - jp
        H = (LN2 + c.la(j) + c.lb(j) + c.P(1, j, 1, j)
             - c.lam(1, j - 1) - c.mu(1, j - 1) - c.P(1, j - 1, 1, j - 1))
        E = 2 * c.mu(1, j - 1) + c.P(1, j, 1, j - 1) - LN2 - c.lb(j) - c.lam(1, j) - c.P(1, j, 1, j)
        return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.il(j) - c.im(j)), E, name="even+ X singleton")
    if jp == K:
        H = LN2 + c.la(1) + c.lb(1) + c.P(1, 1, 1, 1)
        E = -LN2 - c.la(1) - c.P(1, 1, 1, 0)
        return Clause(0.5 * (c.il(1) + c.im(1)), H, 0.5 * (c.im(1) - c.il(1)), E, name="even+ Y rightmost singleton")
    j = K + 1 - jp
    H = (LN2 + c.la(j) + c.lb(j - 1) + c.P(1, j, 1, j - 1)
         - c.lam(1, j - 1) - c.mu(1, j - 2) - c.P(1, j - 1, 1, j - 2))
    E = (2 * c.lam(1, j - 1) + c.P(1, j - 1, 1, j - 1) - LN2 - c.la(j)
         - c.mu(1, j - 1) - c.P(1, j, 1, j - 1))
    return Clause(0.5 * (c.im(j - 1) + c.il(j)), H, 0.5 * (c.im(j - 1) - c.il(j)), E, name="even+ Y singleton")


def _even_single_minus(c: _Ctx, kind: str, j: int) -> Clause:
    K = c.K
    if K == 1:
        return _even_k1_single(c, kind)
    if kind == "X":
        if j == 1:
            H = (LN2 + c.la(1) + c.lb(1) + c.P(1, K, 1, K - 1)
                 - c.lam(2, K) - c.mu(2, K - 1) - c.P(2, K, 2, K - 1))
            E = (c.mu(2, K - 1) + c.lnM + c.P(2, K, 2, K - 1) - LN2 - c.lb(1)
                 - c.lnL - c.P(2, K, 1, K - 1))
            return Clause(0.5 * (c.il(1) + c.im(1)), H, 0.5 * (c.il(1) - c.im(1)), E, name="even- X leftmost singleton")
        H = (LN2 + c.la(j) + c.lb(j - 1) + c.P(j, K, j - 1, K - 1)
             - c.lam(j + 1, K) - c.mu(j, K - 1) - c.P(j + 1, K, j, K - 1))
        E = (2 * c.mu(j, K - 1) + c.P(j, K, j, K - 1) - LN2 - c.lb(j - 1)
             - c.lam(j, K) - c.P(j, K, j - 1, K - 1))
        return Clause(0.5 * (c.il(j) + c.im(j - 1)), H, 0.5 * (c.il(j) - c.im(j - 1)), E, name="even- X singleton")
    if j == K:
        H = LN2 + c.lnD + c.la(K)
        return Clause(0.5 * c.il(K), H, -0.5 * c.il(K), -LN2 - c.la(K), name="even- Y rightmost singleton")
    H = (LN2 + c.la(j) + c.lb(j) + c.P(j, K, j, K - 1)
         - c.lam(j + 1, K) - c.mu(j + 1, K - 1) - c.P(j + 1, K, j + 1, K - 1))
    E = (2 * c.lam(j + 1, K) + c.P(j + 1, K, j, K - 1) - LN2 - c.la(j)
         - c.mu(j, K - 1) - c.P(j, K, j, K - 1))
    return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.im(j) - c.il(j)), E, name="even- Y singleton")


def _even_k1_single(c: _Ctx, kind: str) -> Clause:
    # exact for all t
    if kind == "X":
        H = LN2 + c.la(1) - c.lnC
        # CORRECTED: printed ln(C / lambda_1); the constant of motion m n e^{x-y} = 1/(2 lambda_1)
        # and the general leftmost clause ln(M C / 2L) both give ln(C / (2 lambda_1))
        return Clause(0.5 * c.il(1), H, 0.5 * c.il(1), c.lnC - LN2 - c.lam(1, 1), name="even K=1 X singleton")
    H = LN2 + c.lnD + c.la(1)
    return Clause(0.5 * c.il(1), H, -0.5 * c.il(1), -LN2 - c.la(1), name="even K=1 Y singleton")


def _even_group_plus(c: _Ctx, kind: str, jp: int, g: _G, i: int) -> Clause:
    K, N = c.K, g.N
    if kind == "X":
        if jp == 1:
            if i == 1:
                H = LN2 + g.tau(1) - c.lnC - c.lnL
                return Clause(0.0, H, 0.0, c.lnC + c.lnM - LN2 - c.lnL, name="even+ X leftmost group i=1")
            if i < N:
                H = LN2 + g.S(i) - c.lnL - c.lnM
                E = g.dsig(i) + 2 * c.lnM - LN2 - g.sig(i) - g.sig(i - 1) - c.lnL
                return Clause(0.0, H, 0.0, E, name="even+ X leftmost group middle")
            H = (LN2 + g.sig(N - 1) + c.la(K) + c.P(1, K, 1, K - 1)
                 - c.lam(1, K - 1) - c.lnM - c.P(1, K - 1, 1, K - 1))
            E = 2 * c.lnM - LN2 - g.sig(N - 1) - c.lnL
            return Clause(0.5 * c.il(K), H, 0.5 * c.il(K), E, name="even+ X leftmost group i=N")
        j = K + 1 - jp
        if i < N:
            H = (LN2 + c.la(j + 1) + c.lb(j) + c.P(1, j + 1, 1, j)
                 - c.lam(1, j) - c.mu(1, j - 1) - c.P(1, j, 1, j - 1))
            E = (g.dsig(i) + 2 * c.mu(1, j - 1) + 2 * c.P(1, j, 1, j - 1)
                 - LN2 - 2 * c.lb(j) - c.lam(1, j) - 2 * c.P(1, j, 1, j))
            return Clause(0.5 * (c.il(j + 1) + c.im(j)), H, 0.5 * (c.il(j + 1) - 3 * c.im(j)), E,
                          name="even+ X group i<N")
        H = (LN2 + c.la(j) + c.lb(j) + c.P(1, j, 1, j)
             - c.P(1, j - 1, 1, j - 1) - c.lam(1, j - 1) - c.mu(1, j - 1))
        E = 2 * c.mu(1, j - 1) + c.P(1, j, 1, j - 1) - LN2 - c.lb(j) - c.lam(1, j) - c.P(1, j, 1, j)
        return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.il(j) - c.im(j)), E, name="even+ X group i=N")
    # Y groups
    if K == 1:
        if i < N:
            H = LN2 + g.T(i) + c.la(1)
            return Clause(0.5 * c.il(1), H, -1.5 * c.il(1), g.dsig(i) - LN2 - 2 * c.la(1),
                          name="even+ K=1 Y group i<N")
        H = LN2 + math.log(g.raw().T[N - 1] + c.D) + c.la(1)
        return Clause(0.5 * c.il(1), H, -0.5 * c.il(1), -LN2 - c.la(1), name="even+ K=1 Y group i=N")
    if jp == K:
        H = LN2 + c.la(1) + c.lb(1) + c.P(1, 1, 1, 1)
        if i < N:
            return Clause(0.5 * (c.il(1) + c.im(1)), H, 0.5 * (c.im(1) - 3 * c.il(1)),
                          g.dsig(i) - LN2 - 2 * c.la(1), name="even+ Y rightmost group i<N")
        return Clause(0.5 * (c.il(1) + c.im(1)), H, 0.5 * (c.im(1) - c.il(1)), -LN2 - c.la(1),
                      name="even+ Y rightmost group i=N")
    if jp == 1:
        if i < N:
            H = (LN2 + g.T(i) + c.la(K) + c.P(1, K, 1, K - 1)
                 - c.lam(1, K - 1) - c.lnM - c.P(1, K - 1, 1, K - 1))
            # CORRECTED: printed with j in place of K in the second logarithm
            E = (g.dsig(i) + 2 * c.lam(1, K - 1) + 2 * c.P(1, K - 1, 1, K - 1)
                 - LN2 - 2 * c.la(K) - c.mu(1, K - 1) - 2 * c.P(1, K, 1, K - 1))
            return Clause(0.5 * c.il(K), H, -1.5 * c.il(K), E, name="even+ Y leftmost group i<N")
        H = (LN2 + c.la(K) + c.lb(K - 1) + c.P(1, K, 1, K - 1)
             - c.lam(1, K - 1) - c.mu(1, K - 2) - c.P(1, K - 1, 1, K - 2))
        E = (2 * c.lam(1, K - 1) + c.P(1, K - 1, 1, K - 1) - LN2 - c.la(K)
             - c.lnM - c.P(1, K, 1, K - 1))
        return Clause(0.5 * (c.il(K) + c.im(K - 1)), H, 0.5 * (c.im(K - 1) - c.il(K)), E,
                      name="even+ Y leftmost group i=N")
    j = K + 1 - jp
    if i < N:
        H = (LN2 + c.la(j) + c.lb(j) + c.P(1, j, 1, j)
             - c.lam(1, j - 1) - c.mu(1, j - 1) - c.P(1, j - 1, 1, j - 1))
        E = (g.dsig(i) + 2 * c.lam(1, j - 1) + 2 * c.P(1, j - 1, 1, j - 1)
             - LN2 - 2 * c.la(j) - c.mu(1, j - 1) - 2 * c.P(1, j, 1, j - 1))
        return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.im(j) - 3 * c.il(j)), E, name="even+ Y group i<N")
    H = (LN2 + c.la(j) + c.lb(j - 1) + c.P(1, j, 1, j - 1)
         - c.lam(1, j - 1) - c.mu(1, j - 2) - c.P(1, j - 1, 1, j - 2))
    E = (2 * c.lam(1, j - 1) + c.P(1, j - 1, 1, j - 1) - LN2 - c.la(j)
         - c.mu(1, j - 1) - c.P(1, j, 1, j - 1))
    return Clause(0.5 * (c.il(j) + c.im(j - 1)), H, 0.5 * (c.im(j - 1) - c.il(j)), E, name="even+ Y group i=N")


def _even_group_minus(c: _Ctx, kind: str, j: int, g: _G, i: int) -> Clause:
    K, N = c.K, g.N
    if kind == "X":
        if K == 1:
            if i == 1:
                H = LN2 + g.sig(1) + c.la(1) - math.log1p(c.C * g.raw().sigma[1])
                E = math.log1p(c.C * g.raw().sigma[1]) - LN2 - c.lam(1, 1) - g.sig(1)
                return Clause(0.5 * c.il(1), H, 0.5 * c.il(1), E, name="even- K=1 X group i=1")
            if i < N:
                H = LN2 + g.S(i) + c.la(1) - g.T(i)
                E = g.dsig(i) + g.T(i) + c.la(1) - LN2 - g.R(i) - g.R(i - 1)
                return Clause(0.5 * c.il(1), H, 1.5 * c.il(1), E, name="even- K=1 X group middle")
            H = LN2 + g.sig(N - 1) + c.la(1)
            # CORRECTED: printed amplitude slope 1/(2 lambda_1); it is 3/(2 lambda_1) as for i < N
            return Clause(0.5 * c.il(1), H, 1.5 * c.il(1), c.la(1) - LN2 - g.R(N - 1),
                          name="even- K=1 X group i=N")
        if j == 1:
            H = (LN2 + c.la(1) + c.lb(1) + c.P(1, K, 1, K - 1)
                 - c.lam(2, K) - c.mu(2, K - 1) - c.P(2, K, 2, K - 1))
            cp = 0.5 * (c.il(1) + c.im(1))
            if i == 1:
                E = (c.mu(2, K - 1) + c.lnM + c.P(2, K, 2, K - 1) - LN2 - c.lb(1)
                     - c.lnL - c.P(2, K, 1, K - 1))
                return Clause(cp, H, 0.5 * (c.il(1) - c.im(1)), E, name="even- X leftmost group i=1")
            E = (g.tail(i) + c.la(1) + c.lnM + c.mu(2, K - 1) - c.lb(1) - c.lam(2, K)
                 + c.P(1, K, 1, K - 1) + c.P(2, K, 2, K - 1) - LN2 - 2 * c.P(2, K, 1, K - 1))
            return Clause(cp, H, 0.5 * (3 * c.il(1) - c.im(1)), E, name="even- X leftmost group i>1")
        if j == K:
            if i == 1:
                H = LN2 + c.la(K) + c.lb(K - 1) + c.P(K, K, K - 1, K - 1)
                E = -LN2 - c.lb(K - 1) - c.lam(K, K) - c.P(K, K, K - 1, K - 1)
                return Clause(0.5 * (c.il(K) + c.im(K - 1)), H, 0.5 * (c.il(K) - c.im(K - 1)), E,
                              name="even- X rightmost group i=1")
            if i < N:
                H = LN2 + g.S(i) + c.la(K) - g.T(i)
                E = g.dsig(i) + g.T(i) + c.la(K) - LN2 - g.R(i) - g.R(i - 1)
                return Clause(0.5 * c.il(K), H, 1.5 * c.il(K), E, name="even- X rightmost group middle")
            H = LN2 + g.sig(N - 1) + c.la(K)
            # CORRECTED: printed R_{N_{j'}-1}; the group here is the K-th, so R_{N_K-1}
            return Clause(0.5 * c.il(K), H, 1.5 * c.il(K), c.la(K) - LN2 - g.R(N - 1),
                          name="even- X rightmost group i=N")
        if i == 1:
            H = (LN2 + c.la(j) + c.lb(j - 1) + c.P(j, K, j - 1, K - 1)
                 - c.lam(j + 1, K) - c.mu(j, K - 1) - c.P(j + 1, K, j, K - 1))
            E = (2 * c.mu(j, K - 1) + c.P(j, K, j, K - 1) - LN2 - c.lb(j - 1)
                 - c.lam(j, K) - c.P(j, K, j - 1, K - 1))
            return Clause(0.5 * (c.il(j) + c.im(j - 1)), H, 0.5 * (c.il(j) - c.im(j - 1)), E,
                          name="even- X group i=1")
        H = (LN2 + c.la(j) + c.lb(j) + c.P(j, K, j, K - 1)
             - c.lam(j + 1, K) - c.mu(j + 1, K - 1) - c.P(j + 1, K, j + 1, K - 1))
        E = (g.tail(i) + c.mu(j, K - 1) + c.mu(j + 1, K - 1) + c.la(j) - c.lb(j) - c.lam(j + 1, K)
             + c.P(j, K, j, K - 1) + c.P(j + 1, K, j + 1, K - 1) - LN2 - 2 * c.P(j + 1, K, j, K - 1))
        return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (3 * c.il(j) - c.im(j)), E, name="even- X group i>1")
    # Y groups
    if j == K:
        if i == 1:
            H = LN2 + g.tau(1) + c.la(K)
            return Clause(0.5 * c.il(K), H, -0.5 * c.il(K), -LN2 - c.la(K), name="even- Y rightmost group i=1")
        if i < N:
            # CORRECTED: printed range 1 <= i <= N_K - 1; i = 1 is the previous clause (S_1 = 0)
            H = LN2 + g.S(i)
            E = g.dsig(i) - LN2 - g.sig(i) - g.sig(i - 1)
            return Clause(0.0, H, 0.0, E, name="even- Y rightmost group middle")
        s = g.raw()
        H = LN2 + math.log(s.S[N - 1] + c.D * s.sigma[N - 1])
        return Clause(0.0, H, 0.0, -LN2 - g.sig(N - 1), name="even- Y rightmost group i=N")
    if i == 1:
        H = (LN2 + c.la(j) + c.lb(j) + c.P(j, K, j, K - 1)
             - c.lam(j + 1, K) - c.mu(j + 1, K - 1) - c.P(j + 1, K, j + 1, K - 1))
        E = (2 * c.lam(j + 1, K) + c.P(j + 1, K, j, K - 1) - LN2 - c.la(j)
             - c.mu(j, K - 1) - c.P(j, K, j, K - 1))
        return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.im(j) - c.il(j)), E, name="even- Y group i=1")
    H = (LN2 + c.la(j + 1) + c.lb(j) + c.P(j + 1, K, j, K - 1)
         - c.lam(j + 2, K) - c.mu(j + 1, K - 1) - c.P(j + 2, K, j + 1, K - 1))
    E = (g.tail(i) + c.lb(j) + c.lam(j + 1, K) + c.lam(j + 2, K) - c.la(j + 1) - c.mu(j + 1, K - 1)
         + c.P(j + 1, K, j, K - 1) + c.P(j + 2, K, j + 1, K - 1) - LN2 - 2 * c.P(j + 1, K, j + 1, K - 1))
    return Clause(0.5 * (c.il(j + 1) + c.im(j)), H, 0.5 * (3 * c.im(j) - c.il(j + 1)), E, name="even- Y group i>1")


# ---------------------------------------------------------------------------
# odd case, (K+1)+K groups: A = B = K

def _odd_single_plus(c: _Ctx, kind: str, jp: int) -> Clause:
    K = c.K
    if kind == "X":
        if jp == 1:
            H = LN2 + c.la(K) + c.P(1, K, 1, K) - c.lnC - c.lam(1, K - 1) - c.P(1, K - 1, 1, K)
            return Clause(0.5 * c.il(K), H, 0.5 * c.il(K), c.lnC + c.lnM - LN2 - c.lnL,
                          name="odd+ X leftmost singleton")
        if jp == K + 1:
            H = LN2 + c.la(1) + c.lb(1) + c.P(1, 1, 1, 1)
            return Clause(0.5 * (c.il(1) + c.im(1)), H, 0.5 * (c.il(1) - c.im(1)), -LN2 - c.lb(1),
                          name="odd+ X rightmost singleton")
        j = K + 2 - jp
        H = (LN2 + c.la(j - 1) + c.lb(j) + c.P(1, j - 1, 1, j)
             - c.lam(1, j - 2) - c.mu(1, j - 1) - c.P(1, j - 2, 1, j - 1))
        E = (2 * c.mu(1, j - 1) + c.P(1, j - 1, 1, j - 1) - LN2 - c.lb(j)
             - c.lam(1, j - 1) - c.P(1, j - 1, 1, j))
        return Clause(0.5 * (c.il(j - 1) + c.im(j)), H, 0.5 * (c.il(j - 1) - c.im(j)), E, name="odd+ X singleton")
    j = K + 1 - jp
    H = (LN2 + c.la(j) + c.lb(j) + c.P(1, j, 1, j)
         - c.lam(1, j - 1) - c.mu(1, j - 1) - c.P(1, j - 1, 1, j - 1))
    E = (2 * c.lam(1, j - 1) + c.P(1, j - 1, 1, j) - LN2 - c.la(j)
         - c.mu(1, j) - c.P(1, j, 1, j))
    return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.im(j) - c.il(j)), E, name="odd+ Y singleton")


def _odd_single_minus(c: _Ctx, kind: str, j: int) -> Clause:
    K = c.K
    if kind == "X":
        if j == 1:
            H = (LN2 + c.la(1) + c.lb(1) + c.P(1, K, 1, K)
                 - c.lam(2, K) - c.mu(2, K) - c.P(2, K, 2, K))
            E = (c.mu(2, K) + c.lnM + c.P(2, K, 2, K) - LN2 - c.lb(1)
                 - c.lnL - c.P(2, K, 1, K))
            return Clause(0.5 * (c.il(1) + c.im(1)), H, 0.5 * (c.il(1) - c.im(1)), E,
                          name="odd- X leftmost singleton")
        if j == K + 1:
            H = LN2 + c.lnD + c.lb(K)
            return Clause(0.5 * c.im(K), H, -0.5 * c.im(K), -LN2 - c.lb(K), name="odd- X rightmost singleton")
        H = (LN2 + c.la(j) + c.lb(j - 1) + c.P(j, K, j - 1, K)
             - c.lam(j + 1, K) - c.mu(j, K) - c.P(j + 1, K, j, K))
        E = (2 * c.mu(j, K) + c.P(j, K, j, K) - LN2 - c.lb(j - 1)
             - c.lam(j, K) - c.P(j, K, j - 1, K))
        return Clause(0.5 * (c.il(j) + c.im(j - 1)), H, 0.5 * (c.il(j) - c.im(j - 1)), E, name="odd- X singleton")
    H = (LN2 + c.la(j) + c.lb(j) + c.P(j, K, j, K)
         - c.lam(j + 1, K) - c.mu(j + 1, K) - c.P(j + 1, K, j + 1, K))
    E = (2 * c.lam(j + 1, K) + c.P(j + 1, K, j, K) - LN2 - c.la(j)
         - c.mu(j, K) - c.P(j, K, j, K))
    return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.im(j) - c.il(j)), E, name="odd- Y singleton")


def _odd_group_plus(c: _Ctx, kind: str, jp: int, g: _G, i: int) -> Clause:
    K, N = c.K, g.N
    if kind == "X":
        if jp == 1:
            if i == 1:
                H = LN2 + g.tau(1) - c.lnC - c.lnL
                return Clause(0.0, H, 0.0, c.lnC + c.lnM - LN2 - c.lnL, name="odd+ X leftmost group i=1")
            if i < N:
                H = LN2 + g.S(i) - c.lnL - c.lnM
                E = g.dsig(i) + 2 * c.lnM - LN2 - g.sig(i) - g.sig(i - 1) - c.lnL
                # CORRECTED: the printed amplitude drops the factor 2 inside the first logarithm
                # (1/2 ln(S_i / LM)); the position clause and the even case carry it
                return Clause(0.0, H, 0.0, E, name="odd+ X leftmost group middle")
            H = (LN2 + g.sig(N - 1) + c.la(K) + c.P(1, K, 1, K)
                 - c.lam(1, K - 1) - c.lnM - c.P(1, K - 1, 1, K))
            E = 2 * c.lnM - LN2 - g.sig(N - 1) - c.lnL
            return Clause(0.5 * c.il(K), H, 0.5 * c.il(K), E, name="odd+ X leftmost group i=N")
        if jp == K + 1:
            H = LN2 + c.la(1) + c.lb(1) + c.P(1, 1, 1, 1)
            cp = 0.5 * (c.il(1) + c.im(1))
            if i < N:
                return Clause(cp, H, 0.5 * (c.il(1) - 3 * c.im(1)), g.dsig(i) - LN2 - 2 * c.lb(1),
                              name="odd+ X rightmost group i<N")
            return Clause(cp, H, 0.5 * (c.il(1) - c.im(1)), -LN2 - c.lb(1), name="odd+ X rightmost group i=N")
        j = K + 2 - jp
        if i < N:
            H = (LN2 + c.la(j) + c.lb(j) + c.P(1, j, 1, j)
                 - c.lam(1, j - 1) - c.mu(1, j - 1) - c.P(1, j - 1, 1, j - 1))
            E = (g.dsig(i) + 2 * c.mu(1, j - 1) + 2 * c.P(1, j - 1, 1, j - 1)
                 - LN2 - 2 * c.lb(j) - c.lam(1, j - 1) - 2 * c.P(1, j - 1, 1, j))
            return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.il(j) - 3 * c.im(j)), E, name="odd+ X group i<N")
        H = (LN2 + c.la(j - 1) + c.lb(j) + c.P(1, j - 1, 1, j)
             - c.lam(1, j - 2) - c.mu(1, j - 1) - c.P(1, j - 2, 1, j - 1))
        E = (2 * c.mu(1, j - 1) + c.P(1, j - 1, 1, j - 1) - LN2 - c.lb(j)
             - c.lam(1, j - 1) - c.P(1, j - 1, 1, j))
        return Clause(0.5 * (c.il(j - 1) + c.im(j)), H, 0.5 * (c.il(j - 1) - c.im(j)), E, name="odd+ X group i=N")
    if jp == 1:
        if i < N:
            H = (LN2 + g.T(i) + c.la(K) + c.P(1, K, 1, K)
                 - c.lam(1, K - 1) - c.lnM - c.P(1, K - 1, 1, K))
            E = (g.dsig(i) + 2 * c.lam(1, K - 1) + 2 * c.P(1, K - 1, 1, K)
                 - LN2 - 2 * c.la(K) - c.lnM - 2 * c.P(1, K, 1, K))
            return Clause(0.5 * c.il(K), H, -1.5 * c.il(K), E, name="odd+ Y leftmost group i<N")
        # CORRECTED: printed M in the denominator of the first logarithm; it is mu_[1,K-1],
        # matching the Y-singleton clause with j = K
        H = (LN2 + c.la(K) + c.lb(K) + c.P(1, K, 1, K)
             - c.lam(1, K - 1) - c.mu(1, K - 1) - c.P(1, K - 1, 1, K - 1))
        E = (2 * c.lam(1, K - 1) + c.P(1, K - 1, 1, K) - LN2 - c.la(K)
             - c.lnM - c.P(1, K, 1, K))
        return Clause(0.5 * (c.il(K) + c.im(K)), H, 0.5 * (c.im(K) - c.il(K)), E, name="odd+ Y leftmost group i=N")
    j = K + 1 - jp
    if i < N:
        H = (LN2 + c.la(j) + c.lb(j + 1) + c.P(1, j, 1, j + 1)
             - c.lam(1, j - 1) - c.mu(1, j) - c.P(1, j - 1, 1, j))
        E = (g.dsig(i) + 2 * c.lam(1, j - 1) + 2 * c.P(1, j - 1, 1, j)
             - LN2 - 2 * c.la(j) - c.mu(1, j) - 2 * c.P(1, j, 1, j))
        return Clause(0.5 * (c.il(j) + c.im(j + 1)), H, 0.5 * (c.im(j + 1) - 3 * c.il(j)), E, name="odd+ Y group i<N")
    H = (LN2 + c.la(j) + c.lb(j) + c.P(1, j, 1, j)
         - c.lam(1, j - 1) - c.mu(1, j - 1) - c.P(1, j - 1, 1, j - 1))
    E = (2 * c.lam(1, j - 1) + c.P(1, j - 1, 1, j) - LN2 - c.la(j)
         - c.mu(1, j) - c.P(1, j, 1, j))
    return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.im(j) - c.il(j)), E, name="odd+ Y group i=N")


def _odd_group_minus(c: _Ctx, kind: str, j: int, g: _G, i: int) -> Clause:
    K, N = c.K, g.N
    if kind == "X":
        if j == 1:
            H = (LN2 + c.la(1) + c.lb(1) + c.P(1, K, 1, K)
                 - c.lam(2, K) - c.mu(2, K) - c.P(2, K, 2, K))
            cp = 0.5 * (c.il(1) + c.im(1))
            # CORRECTED: both amplitude clauses below are printed without the factor 2 in the
            # denominator that the even case and the odd singleton clause carry
            if i == 1:
                E = (c.lnM + c.mu(2, K) + c.P(2, K, 2, K) - LN2 - c.lb(1)
                     - c.lnL - c.P(2, K, 1, K))
                return Clause(cp, H, 0.5 * (c.il(1) - c.im(1)), E, name="odd- X leftmost group i=1")
            E = (g.tail(i) + c.la(1) + c.lnM + c.mu(2, K) - c.lb(1) - c.lam(2, K)
                 + c.P(1, K, 1, K) + c.P(2, K, 2, K) - LN2 - 2 * c.P(2, K, 1, K))
            return Clause(cp, H, 0.5 * (3 * c.il(1) - c.im(1)), E, name="odd- X leftmost group i>1")
        if j == K + 1:
            if i == 1:
                H = LN2 + g.T(1) + c.lb(K)
                return Clause(0.5 * c.im(K), H, -0.5 * c.im(K), -LN2 - c.lb(K), name="odd- X rightmost group i=1")
            if i < N:
                H = LN2 + g.S(i)
                E = g.dsig(i) - LN2 - g.sig(i) - g.sig(i - 1)
                return Clause(0.0, H, 0.0, E, name="odd- X rightmost group middle")
            s = g.raw()
            H = LN2 + math.log(s.S[N - 1] + c.D * s.sigma[N - 1])
            return Clause(0.0, H, 0.0, -LN2 - g.sig(N - 1), name="odd- X rightmost group i=N")
        if i == 1:
            H = (LN2 + c.la(j) + c.lb(j - 1) + c.P(j, K, j - 1, K)
                 - c.lam(j + 1, K) - c.mu(j, K) - c.P(j + 1, K, j, K))
            E = (2 * c.mu(j, K) + c.P(j, K, j, K) - LN2 - c.lb(j - 1)
                 - c.lam(j, K) - c.P(j, K, j - 1, K))
            return Clause(0.5 * (c.il(j) + c.im(j - 1)), H, 0.5 * (c.il(j) - c.im(j - 1)), E,
                          name="odd- X group i=1")
        H = (LN2 + c.la(j) + c.lb(j) + c.P(j, K, j, K)
             - c.lam(j + 1, K) - c.mu(j + 1, K) - c.P(j + 1, K, j + 1, K))
        E = (g.tail(i) + c.la(j) + c.mu(j, K) + c.mu(j + 1, K) - c.lb(j) - c.lam(j + 1, K)
             + c.P(j, K, j, K) + c.P(j + 1, K, j + 1, K) - LN2 - 2 * c.P(j + 1, K, j, K))
        return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (3 * c.il(j) - c.im(j)), E, name="odd- X group i>1")
    if j == K:
        if i == 1:
            H = LN2 + c.la(K) + c.lb(K) + c.P(K, K, K, K)
            E = -LN2 - c.la(K) - math.log(c.spectral.mus[K - 1]) - c.P(K, K, K, K)
            return Clause(0.5 * (c.im(K) + c.il(K)), H, 0.5 * (c.im(K) - c.il(K)), E,
                          name="odd- Y rightmost group i=1")
        if i < N:
            H = LN2 + g.S(i) + c.lb(K) - g.T(i)
            E = g.dsig(i) + g.T(i) + c.lb(K) - LN2 - g.R(i) - g.R(i - 1)
            return Clause(0.5 * c.im(K), H, 1.5 * c.im(K), E, name="odd- Y rightmost group middle")
        H = LN2 + g.sig(N - 1) + c.lb(K)
        return Clause(0.5 * c.im(K), H, 1.5 * c.im(K), c.lb(K) - LN2 - g.R(N - 1),
                      name="odd- Y rightmost group i=N")
    if i == 1:
        H = (LN2 + c.la(j) + c.lb(j) + c.P(j, K, j, K)
             - c.lam(j + 1, K) - c.mu(j + 1, K) - c.P(j + 1, K, j + 1, K))
        E = (2 * c.lam(j + 1, K) + c.P(j + 1, K, j, K) - LN2 - c.la(j)
             - c.mu(j, K) - c.P(j, K, j, K))
        return Clause(0.5 * (c.il(j) + c.im(j)), H, 0.5 * (c.im(j) - c.il(j)), E, name="odd- Y group i=1")
    H = (LN2 + c.la(j + 1) + c.lb(j) + c.P(j + 1, K, j, K)
         - c.lam(j + 2, K) - c.mu(j + 1, K) - c.P(j + 2, K, j + 1, K))
    E = (g.tail(i) + c.lb(j) + c.lam(j + 1, K) + c.lam(j + 2, K) - c.la(j + 1) - c.mu(j + 1, K)
         + c.P(j + 1, K, j, K) + c.P(j + 2, K, j + 1, K) - LN2 - 2 * c.P(j + 1, K, j + 1, K))
    return Clause(0.5 * (c.il(j + 1) + c.im(j)), H, 0.5 * (3 * c.im(j) - c.il(j + 1)), E, name="odd- Y group i>1")


# ---------------------------------------------------------------------------
# dispatch

def clause_for(ctx: _Ctx, kind: str, index: int, member: int, direction: int) -> Clause:
    """The theorem clause for member `member` of group `index` of the given kind."""
    layout = ctx.layout
    sizes = layout.x_sizes if kind == "X" else layout.y_sizes
    if not 1 <= index <= len(sizes) or not 1 <= member <= sizes[index - 1]:
        raise ClauseError(f"no peakon {kind.lower()}[{index}.{member}] in this layout")
    even = layout.parity == "even"
    if sizes[index - 1] == 1:
        if even:
            f = _even_single_plus if direction > 0 else _even_single_minus
        else:
            f = _odd_single_plus if direction > 0 else _odd_single_minus
        return f(ctx, kind, index)
    g = _G(ctx.params.group(kind, index))
    if even:
        f = _even_group_plus if direction > 0 else _even_group_minus
    else:
        f = _odd_group_plus if direction > 0 else _odd_group_minus
    return f(ctx, kind, index, g, member)


def theorem_lines(layout: GroupLayout, spectral: SpectralData, params: GroupParams,
                  direction, check: bool = True) -> dict[tuple[str, str], AsymptoteLine]:
    """{(target, kind): line} for every peakon, from the theorem clauses."""
    if check:
        require_valid(layout, spectral, params)
    sgn = direction_sign(direction)
    dname = direction_name(sgn)
    ctx = _Ctx(layout, spectral, params)
    out: dict[tuple[str, str], AsymptoteLine] = {}
    for kind, idx, size in layout.chain():
        for i in range(1, size + 1):
            target = f"{kind.lower()}[{idx}.{i}]"
            pos, amp = clause_for(ctx, kind, idx, i, sgn).lines(target, dname)
            out[(target, "position")] = pos
            out[(target, "log-amplitude")] = amp
    return out


def _parse_target(target: str) -> tuple[str, int, int]:
    try:
        head, rest = target.split("[", 1)
        g, i = rest.rstrip("]").split(".")
        kind = {"x": "X", "y": "Y"}[head.strip().lower()]
        return kind, int(g), int(i)
    except (ValueError, KeyError):
        raise ValueError(f"bad target {target!r}; expected e.g. 'x[2.1]'") from None


def _asymptote(parity: str, layout, spectral, params, target, kind, direction) -> AsymptoteLine:
    if layout.parity != parity:
        raise ValueError(f"layout is {layout.parity}, not {parity}")
    if kind not in ("position", "log-amplitude"):
        raise ValueError(f"kind must be 'position' or 'log-amplitude', not {kind!r}")
    require_valid(layout, spectral, params)
    gk, idx, i = _parse_target(target)
    sgn = direction_sign(direction)
    ctx = _Ctx(layout, spectral, params)
    pos, amp = clause_for(ctx, gk, idx, i, sgn).lines(f"{gk.lower()}[{idx}.{i}]", direction_name(sgn))
    return pos if kind == "position" else amp


def asymptote_even(layout, spectral, params, target: str, kind: str, direction) -> AsymptoteLine:
    return _asymptote("even", layout, spectral, params, target, kind, direction)


def asymptote_odd(layout, spectral, params, target: str, kind: str, direction) -> AsymptoteLine:
    return _asymptote("odd", layout, spectral, params, target, kind, direction)


def asymptote(layout, spectral, params, target: str, kind: str, direction) -> AsymptoteLine:
    return _asymptote(layout.parity, layout, spectral, params, target, kind, direction)
