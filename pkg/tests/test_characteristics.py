import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peakon_gx import fixtures
from peakon_gx.characteristics import (char_residual, char_residuals, check_ordering, default_thetas,
                                       log_scaled_gap,
                                       enumerate_families, near_endpoint, ordering_report, theta_scale,
                                       xi, xi_limit)
from peakon_gx.field import OrderingError
from peakon_gx.solver import Solution

from conftest import RESIDUAL_FIXTURES


def _families(name):
    f = fixtures.get(name)
    return enumerate_families(*f.args, Solution(*f.args))


def _by_label(fams):
    return {f.label: f for f in fams}


def test_one_by_one_families():
    fams = _families("ex-1x1")
    assert [f.label for f in fams] == ["far-left", "between X1 and Y1", "far-right"]
    assert [f.theta_range for f in fams] == [(0.0, math.inf), (0.5, 1.0), (0.0, math.inf)]


def test_proof_layout_families():
    fams = _families("ex-proof-technique")
    assert len(fams) == 6
    r = {f.label: f.theta_range for f in fams}
    assert r["within X2 gap 1"] == (0.0, math.inf)
    assert r["between Y1 and X2"] == (0.0, 1e10)
    # a non-singleton X2 to the left of the rightmost singleton caps theta at D
    assert r["between X2 and Y2"] == (1e5, fixtures.get("ex-proof-technique").spectral.bigD)


def test_proof_ghost_lies_between_group_members():
    fam = _by_label(_families("ex-proof-technique"))["within X2 gap 1"]
    t = np.array([-40.0, 0.0, 40.0])
    g = xi(fam, 1e-15, t)
    ps = fam.solution.physical(t)
    slack = 8 * np.finfo(float).eps * np.abs(g)
    assert np.all(ps.x[1] <= g + slack) and np.all(g <= ps.x[2] + slack)
    # the ghost merges with x[2.1] in doubles, so strictness comes from the gap minors
    alg = fam.solution.algebra(t)
    for th1, th2 in ((0.0, 1e-15), (1e-15, math.inf)):
        lg, ok = log_scaled_gap(fam, alg, th1, th2)
        assert np.all(ok) and np.all(np.isfinite(lg))


def test_proof_ghost_fan_residuals():
    fam = _by_label(_families("ex-proof-technique"))["within X2 gap 1"]
    worst = max(char_residual(fam, 10.0 ** (-35 + 5 * k), 0.0) for k in range(14))
    assert worst <= 1e-6


def test_far_left_one_by_one():
    fam = _families("ex-1x1")[0]
    assert char_residual(fam, 1.0, 0.0) <= 1e-6
    t = np.linspace(-5, 5, 11)
    assert np.all(xi(fam, 1.0, t) < fam.solution.physical(t).x[0])


def test_between_lower_limit_is_left_neighbour():
    fam = _by_label(_families("ex-proof-technique"))["between Y1 and X2"]
    t = np.array([-10.0, 0.0, 10.0])
    ps = fam.solution.physical(t)
    assert np.allclose(xi_limit(fam, "lower", t), ps.y[0], rtol=0, atol=1e-12)
    assert np.allclose(xi_limit(fam, "upper", t), ps.x[1], rtol=0, atol=1e-12)


def test_far_right_lower_limit_is_last_peakon():
    fam = _families("ex-2x1")[-1]
    t = np.array([-10.0, 0.0, 10.0])
    assert np.allclose(xi_limit(fam, "lower", t), fam.solution.physical(t).x[-1], atol=1e-12)


def test_outside_range_rejected():
    fam = _families("ex-1x1")[1]
    for bad in (0.5, 1.0, 0.1, 2.0):
        with pytest.raises(ValueError):
            xi(fam, bad, 0.0)
    with pytest.raises(ValueError):
        near_endpoint(_families("ex-1x1")[0], "upper", 0.0)
    with pytest.raises(ValueError):
        theta_scale(_families("ex-1x1")[0], 0.0)


@pytest.mark.parametrize("name", ["ex-proof-technique", "ex-1x1-groups", "ex-2x1", "ex-3x3-allgroups"])
def test_boundary_convergence(name):
    t = np.array([-20.0, 0.0, 20.0])
    for fam in _families(name):
        lo, hi = fam.theta_range
        for end, bound in (("lower", lo), ("upper", hi)):
            if fam.region == "far-left" and end == "lower":
                continue
            if bound == math.inf:
                continue
            near = near_endpoint(fam, end, t)
            vals = np.array([xi(fam, th, tt) for th, tt in zip(near, t)]).ravel()
            assert np.max(np.abs(vals - xi_limit(fam, end, t))) <= 1e-4, (fam.label, end)


@pytest.mark.parametrize("name", ["ex-proof-technique", "ex-1x1-groups", "ex-4x3"])
def test_monotone_and_non_crossing(name):
    t = np.linspace(-30, 30, 13)
    for fam in _families(name):
        th = default_thetas(fam)
        curves = np.array([xi(fam, a, t) for a in th])
        # neighbouring curves may merge in doubles, never by more than rounding
        assert np.all(np.diff(curves, axis=0) >= -1e-12), fam.label
        if fam.region in ("within", "between"):
            alg = fam.solution.algebra(t)
            for a, b in zip(th[:-1], th[1:]):
                lg, ok = log_scaled_gap(fam, alg, a, b)
                assert np.all(ok) and np.all(np.isfinite(lg)), (fam.label, a)


@settings(max_examples=40, deadline=None)
@given(st.floats(-8, 8), st.floats(-30, 30))
def test_xi_increasing_in_theta(log_theta, t):
    fam = _by_label(_families("ex-proof-technique"))["within X2 gap 1"]
    a, b = 10.0 ** log_theta, 10.0 ** (log_theta + 0.5)
    assert xi(fam, a, t) <= xi(fam, b, t)


@pytest.mark.parametrize("name", RESIDUAL_FIXTURES)
def test_residuals_every_family(name):
    for fam in _families(name):
        for th in default_thetas(fam, 6):
            r = char_residuals(fam, th, np.array([-10.0, 0.0, 10.0]))
            assert np.max(r) <= 1e-6, (name, fam.label, th)


def test_peakon_trajectories_are_characteristics():
    fam = _families("ex-2x1")[1]
    t = np.array([-5.0, 0.0, 5.0])
    near = near_endpoint(fam, "lower", t, eps=1e-9)
    for th, tt in zip(near, t):
        assert char_residual(fam, float(th), float(tt)) <= 1e-6


def test_default_thetas_inside():
    for fam in _families("ex-proof-technique"):
        th = default_thetas(fam)
        lo, hi = fam.theta_range
        assert np.all((th > lo) & (th < hi)) and np.all(np.diff(th) > 0)


@pytest.mark.parametrize("name", fixtures.FIXTURES)
def test_ordering_report_on_fixtures(name):
    sol = Solution(*fixtures.get(name).args)
    rep = ordering_report(sol, np.linspace(-100, 100, 201))
    assert rep.ok
    assert rep.log_gaps.shape == (sum(n for _, _, n in sol.layout.chain()) - 1, 201)
    check_ordering(sol, [0.0])


def test_ordering_certifies_merged_doubles():
    sol = Solution(*fixtures.get("ex-3x3-interlacing").args)
    ps = sol.physical(np.array([50.0]))
    rep = ordering_report(sol, [50.0])
    assert rep.ok and np.all(np.isfinite(rep.log_gaps))
    # x1 and y1 are the same double here
    assert np.any(np.diff(ps.chain_positions(), axis=0) <= 0)


def test_check_ordering_raises(monkeypatch):
    import peakon_gx.characteristics as ch
    sol = Solution(*fixtures.get("ex-1x1").args)
    real = ch.ordering_report(sol, [0.0])
    fake = ch.OrderingReport(real.t, real.labels, real.log_gaps, ~real.certified, real.float_ordered)
    assert not fake.ok
    monkeypatch.setattr(ch, "ordering_report", lambda s, t: fake)
    with pytest.raises(OrderingError):
        check_ordering(sol, [0.0])
