"""Built-in example configurations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import Group, GroupLayout, GroupParams, SpectralData, validate


@dataclass(frozen=True)
class Fixture:
    name: str
    layout: GroupLayout
    spectral: SpectralData
    params: GroupParams
    description: str = ""

    @property
    def args(self):
        return self.layout, self.spectral, self.params


def _single(layout: GroupLayout) -> GroupParams:
    return GroupParams.singletons(layout)


SPEC_3X3 = SpectralData([1 / 5, 1, 2], [1 / 3, 4], [1e-4, 1e1, 1e3], [1e-6, 1e2], 1e20, 1e18)
SPEC_4X3 = SpectralData([1 / 5, 1, 2], [1 / 3, 4, 8], [1e-4, 1e1, 1e3], [1e-6, 1e2, 1.0], 1e20, 1e18)
SPEC_2X1 = SpectralData([1.0], [3.0], [1.0], [1.0], 1e6, 1e20)
SPEC_PROOF = SpectralData([1 / 5, 1], [1 / 3], [1e-4, 1e1], [1e-6], 1e20, 1e18 + 1e5)

_ALLGROUPS_X = [
    Group([1e-10, 1e1], [1e-15, 1e-3]),
    Group([1e5], [1e-3]),
    Group([1e5, 1e11, 1e18, 1e20], [1e-4, 1.0, 1e3, 1e4]),
]
_ALLGROUPS_Y = [
    Group([1e2, 1e4, 1e8], [1e-15, 1e-10, 1e-3]),
    Group([1e5, 1e10, 1e17, 1e20], [1e-13, 1e-8, 1e-6, 1e-1]),
    Group([1e5, 1e10, 1e12, 1e12], [1e-6, 1e-2, 1e-1, 1e1]),
]


def _build() -> dict[str, Fixture]:
    out: dict[str, Fixture] = {}

    def add(name, layout, spectral, params, desc):
        out[name] = Fixture(name, layout, spectral, params, desc)

    l11 = GroupLayout([1], [1])
    add("ex-1x1", l11, SpectralData([1.0], [], [1.0], [], 2.0, 1.0), _single(l11),
        "1+1 interlacing, lambda_1 = 1, a_1(0) = 1, C = 2, D = 1")
    l21 = GroupLayout([1, 1], [1])
    add("ex-2x1", l21, SPEC_2X1, _single(l21), "2+1 interlacing")
    l22 = GroupLayout([1, 1], [1, 1])
    add("ex-2x2", l22, SPEC_PROOF, _single(l22), "2+2 interlacing with the proof-example spectral data")
    lpr = GroupLayout([1, 2], [1, 1])
    add("ex-proof-technique", lpr, SPEC_PROOF,
        GroupParams([Group(), Group([1e10], [1e5])], [Group(), Group()]),
        "x, y, xx, y configuration")
    l33 = GroupLayout([1, 1, 1], [1, 1, 1])
    add("ex-3x3-interlacing", l33, SPEC_3X3, _single(l33), "3+3 interlacing")
    l43 = GroupLayout([1, 1, 1, 1], [1, 1, 1])
    add("ex-4x3", l43, SPEC_4X3, _single(l43), "4+3 interlacing")
    l11g = GroupLayout([4], [4])
    add("ex-1x1-groups", l11g, SpectralData([1.0], [], [1.0], [], 1e-6, 1e26),
        GroupParams([Group([1e-10, 1e10, 1e10], [1e-8, 1e-3, 1e-1])],
                    [Group([1e2, 1e4, 1e25], [1e-15, 1e-10, 1e-3])]),
        "1+1 with four peakons in each group")
    l33g = GroupLayout([3, 2, 5], [4, 5, 5])
    add("ex-3x3-allgroups", l33g, SPEC_3X3, GroupParams(_ALLGROUPS_X, _ALLGROUPS_Y),
        "3+3 with every group non-singleton")
    l43g = GroupLayout([3, 2, 5, 2], [4, 5, 5])
    add("ex-4x3-allgroups", l43g, SPEC_4X3,
        GroupParams(_ALLGROUPS_X + [Group([1e5], [1e5])], _ALLGROUPS_Y),
        "4+3 with every group non-singleton")
    return out


FIXTURES = _build()


def get(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None


def _eigenvalues(rng, n: int, lo: float, hi: float, min_ratio: float) -> list[float]:
    while True:
        v = np.sort(np.exp(rng.uniform(math.log(lo), math.log(hi), n)))
        if n < 2 or np.min(v[1:] / v[:-1]) > min_ratio:
            return [float(x) for x in v]


def random_configuration(rng: np.random.Generator, max_groups: int = 10, max_size: int = 4,
                         eig_range: tuple[float, float] = (0.2, 5.0),
                         max_tries: int = 1000) -> Fixture:
    """A random valid configuration with at most max_groups groups.

    Eigenvalues are log-uniform in eig_range with ratio gaps of at least 5%,
    residues and constants are log-uniform, and taus/sigmas are log-uniform
    and chained so that the last sigma of each group sits below the first tau
    of the next non-singleton group.  Draws that still violate a constraint
    (the C inequalities) are rejected.
    """
    for _ in range(max_tries):
        n_groups = int(rng.integers(2, max_groups + 1))
        K = n_groups // 2
        odd = n_groups % 2 == 1
        x_sizes = [int(v) for v in rng.integers(1, max_size + 1, K + (1 if odd else 0))]
        y_sizes = [int(v) for v in rng.integers(1, max_size + 1, K)]
        layout = GroupLayout(x_sizes, y_sizes)
        B = K if odd else K - 1
        lam = _eigenvalues(rng, K, *eig_range, 1.05)
        mu = _eigenvalues(rng, B, *eig_range, 1.05)
        a0 = [float(v) for v in 10.0 ** rng.uniform(-3, 3, K)]
        b0 = [float(v) for v in 10.0 ** rng.uniform(-3, 3, B)]
        cursor = float(rng.uniform(-4, 0))
        groups: dict[tuple[str, int], Group] = {}
        for kind, idx, size in layout.chain():
            if size == 1:
                groups[(kind, idx)] = Group()
                continue
            t1 = cursor + rng.uniform(0.5, 3.0)
            taus = [t1] + list(t1 + rng.uniform(-3, 3, size - 2))
            sig = np.sort(rng.uniform(t1 - 4, t1 + 2, size - 1))
            if np.min(np.diff(sig), initial=1.0) < 0.05:
                sig = sig + 0.1 * np.arange(size - 1)
            groups[(kind, idx)] = Group([10.0 ** v for v in taus], [10.0 ** v for v in sig])
            cursor = float(sig[-1])
        C = float(10.0 ** rng.uniform(-2, 6))
        D = float(10.0 ** (cursor + rng.uniform(0.5, 4)))
        spectral = SpectralData(lam, mu, a0, b0, C, D)
        params = GroupParams([groups[("X", i)] for i in range(1, len(x_sizes) + 1)],
                             [groups[("Y", i)] for i in range(1, len(y_sizes) + 1)])
        if validate(layout, spectral, params).ok:
            sizes = f"X{x_sizes} Y{y_sizes}"
            return Fixture(f"random {sizes}", layout, spectral, params, "random valid configuration")
    raise RuntimeError("could not draw a valid configuration")
