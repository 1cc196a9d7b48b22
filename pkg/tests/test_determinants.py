import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peakon_gx.determinants import (CapacityError, DeterminantTable, LogPositive, PsiTable,
                                    jdet, log_psi)
from peakon_gx.spectral import SpectralData

from conftest import naive_j

SP = SpectralData([0.5, 1.5, 4.0], [0.7, 2.5], [2.0, 0.3, 1.1], [0.9, 5.0], 3.0, 7.0)


def test_psi_by_hand():
    # I = {1, 3}, J = {2}: (l1 - l3)^2 / ((l1 + m2)(l3 + m2))
    want = (0.5 - 4.0) ** 2 / ((0.5 + 2.5) * (4.0 + 2.5))
    assert math.exp(log_psi([1, 3], [2], SP)) == pytest.approx(want, rel=1e-14)
    assert log_psi([], [], SP) == 0.0


def test_psi_table_caches_and_agrees():
    tab = PsiTable(SP)
    assert tab.log_psi([3, 1], [1, 2]) == log_psi([1, 3], [1, 2], SP)
    assert PsiTable.members(PsiTable.mask([1, 3])) == [1, 3]


def test_small_j_by_hand():
    t = 0.8
    a1 = 2.0 * math.exp(t / 0.5)
    b1 = 0.9 * math.exp(t / 0.7)
    assert jdet(1, 1, 0, 0, 1, 0, t, SP).value == pytest.approx(a1, rel=1e-14)
    assert jdet(1, 1, 0, 0, 1, 1, t, SP).value == pytest.approx(a1 * b1 / 1.2, rel=1e-14)
    assert jdet(1, 1, 2, 1, 1, 1, t, SP).value == pytest.approx(0.25 * 0.7 * a1 * b1 / 1.2, rel=1e-14)


def test_empty_and_out_of_range():
    for r, s in [(0, 0), (3, -1), (1, 2)]:
        assert jdet(3, 2, r, s, 0, 0, -4.0, SP).logval == 0.0
    for i, j in [(-1, 0), (4, 0), (0, 3), (2, -1)]:
        assert jdet(3, 2, 0, 0, i, j, 0.0, SP).is_zero


def test_vectorized_matches_scalar():
    tab = DeterminantTable(SP, 3, 2)
    ts = np.linspace(-30, 30, 7)
    vec = tab.log_j(1, 0, 2, 1, ts)
    for t, v in zip(ts, vec):
        assert v == pytest.approx(jdet(3, 2, 1, 0, 2, 1, t, SP).logval, rel=1e-14, abs=1e-14)


def test_huge_dynamic_range_stays_finite():
    # direct summation overflows here; the log domain does not
    v = jdet(3, 2, 0, 0, 3, 2, 2000.0, SP)
    assert math.isfinite(v.logval) and v.logval > 709


def test_capacity(monkeypatch):
    monkeypatch.setenv("PEAKON_GX_MAX_K", "2")
    with pytest.raises(CapacityError):
        DeterminantTable(SP, 3, 2)


def test_log_positive_arithmetic():
    a, b = LogPositive.of(3.0), LogPositive.of(5.0)
    assert (a + b).value == pytest.approx(8.0)
    assert (a * b).value == pytest.approx(15.0)
    assert (b / a).value == pytest.approx(5 / 3)
    assert (a + LogPositive.zero()) == a
    assert (a * LogPositive.zero()).is_zero
    with pytest.raises(ZeroDivisionError):
        a / LogPositive.zero()
    with pytest.raises(ValueError):
        LogPositive.of(-1.0)


pos = st.floats(0.1, 10.0)


@st.composite
def benign(draw):
    lam = sorted(draw(st.lists(pos, min_size=3, max_size=3, unique=True)))
    mu = sorted(draw(st.lists(pos, min_size=2, max_size=2, unique=True)))
    if min(np.diff(lam)) < 1e-2 or mu[1] - mu[0] < 1e-2:
        lam, mu = [0.5, 1.5, 4.0], [0.7, 2.5]
    a = draw(st.lists(pos, min_size=3, max_size=3))
    b = draw(st.lists(pos, min_size=2, max_size=2))
    return SpectralData(lam, mu, a, b, 1.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(benign(), st.integers(0, 3), st.integers(0, 2), st.integers(-1, 2), st.integers(-1, 2),
       st.floats(-3.0, 3.0))
def test_jdet_matches_naive_property(sp, A, B, r, s, t):
    for i in range(A + 1):
        for j in range(B + 1):
            want = naive_j(A, B, r, s, i, j, t, sp)
            got = jdet(A, B, r, s, i, j, t, sp).value
            assert got == pytest.approx(want, rel=1e-12)


def test_psi_examples():
    sp21 = SpectralData([1.0], [3.0], [1.0], [1.0], 1e6, 1e20)
    assert math.exp(log_psi([1], [1], sp21)) == pytest.approx(0.25, rel=1e-15)
    spp = SpectralData([0.2, 1.0], [1 / 3], [1.0, 1.0], [1.0], 1.0, 1.0)
    assert math.exp(log_psi([1, 2], [1], spp)) == pytest.approx(0.9, rel=1e-14)


def test_jdet_examples():
    sp21 = SpectralData([1.0], [3.0], [1.0], [1.0], 1e6, 1e20)
    assert jdet(1, 1, 0, 0, 1, 1, 0.0, sp21).value == pytest.approx(0.25, rel=1e-15)
    sp = SpectralData([1.0, 2.0], [3.0], [1.0, 1.0], [1.0], 1.0, 1.0)
    assert jdet(2, 1, 0, 0, 3, 0, 0.0, sp).is_zero


def test_displayed_six_term_expansion():
    l1, l2, l3 = SP.lambdas
    m1, m2 = SP.mus
    a1, a2, a3 = SP.a0
    b1, b2 = SP.b0
    terms = []
    for (la, aa), (lb, ab) in [((l1, a1), (l2, a2)), ((l1, a1), (l3, a3)), ((l2, a2), (l3, a3))]:
        for m, b in [(m1, b1), (m2, b2)]:
            terms.append((la - lb) ** 2 * m / ((la + m) * (lb + m)) * aa * ab * b)
    assert jdet(3, 2, 0, 1, 2, 1, 0.0, SP).value == pytest.approx(math.fsum(terms), rel=1e-13)


def test_positive_and_growing():
    tab = DeterminantTable(SP, 3, 2)
    h = 1e-4
    for i in range(4):
        for j in range(3):
            v = tab.log_j(0, 0, i, j, [-1.0 - h, -1.0 + h])
            assert np.all(np.isfinite(v))
            if i + j:
                assert v[1] > v[0]


def test_relabeling_symmetry():
    # swapping (lambda, a) pairs leaves the subset sum unchanged
    lam, a = list(SP.lambdas), list(SP.a0)
    sw = SpectralData([lam[2], lam[0], lam[1]], SP.mus, [a[2], a[0], a[1]], SP.b0, 1.0, 1.0)
    for i in range(4):
        assert jdet(3, 2, 1, 0, i, 1, 0.3, sw).logval == pytest.approx(
            jdet(3, 2, 1, 0, i, 1, 0.3, SP).logval, rel=1e-13, abs=1e-13)
