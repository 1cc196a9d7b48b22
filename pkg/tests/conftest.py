"""Shared oracles and fixture lists."""

from __future__ import annotations

import math
from itertools import combinations

import pytest

from peakon_gx import fixtures
from peakon_gx.solver import Solution

# ODE-residual set: every built-in example except the 1+1 groups demo
RESIDUAL_FIXTURES = [
    "ex-1x1", "ex-2x1", "ex-2x2", "ex-proof-technique",
    "ex-3x3-interlacing", "ex-3x3-allgroups", "ex-4x3", "ex-4x3-allgroups",
]
ALL_FIXTURES = sorted(fixtures.FIXTURES)


def naive_j(A, B, r, s, i, j, t, spectral):
    """J[A,B,r,s,i,j](t) by direct summation over index subsets in plain floats."""
    if not (0 <= i <= A and 0 <= j <= B):
        return 0.0
    lam, mu = spectral.lambdas[:A], spectral.mus[:B]
    a = [spectral.a0[k] * math.exp(t / lam[k]) for k in range(A)]
    b = [spectral.b0[k] * math.exp(t / mu[k]) for k in range(B)]
    total = 0.0
    for I in combinations(range(A), i):
        dI = math.prod((lam[p] - lam[q]) ** 2 for p, q in combinations(I, 2))
        wI = math.prod(lam[p] ** r * a[p] for p in I)
        for J in combinations(range(B), j):
            dJ = math.prod((mu[p] - mu[q]) ** 2 for p, q in combinations(J, 2))
            g = math.prod(lam[p] + mu[q] for p in I for q in J)
            wJ = math.prod(mu[q] ** s * b[q] for q in J)
            total += dI * dJ / g * wI * wJ
    return total


@pytest.fixture(scope="session")
def solutions():
    """Solution objects for every built-in fixture, built once."""
    return {name: Solution(*fixtures.get(name).args) for name in ALL_FIXTURES}
