import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from peakon_gx import fixtures
from peakon_gx.asymptotics import (AsymptoteLine, ClauseError, asymptote, asymptote_even, asymptote_odd,
                                   asymptote_table, direction_sign, empirical_slope, engine_lines,
                                   theorem_lines, trajectories)
from peakon_gx.asymptotics.theorems import _Ctx, clause_for
from peakon_gx.solver import Solution

from conftest import ALL_FIXTURES


def _agree(sol, direction):
    th = theorem_lines(sol.layout, sol.spectral, sol.params, direction)
    en = engine_lines(sol, direction)
    assert th.keys() == en.keys()
    for key in th:
        a, b = th[key], en[key]
        assert a.slope == pytest.approx(b.slope, rel=1e-12, abs=1e-12), key
        assert a.intercept == pytest.approx(b.intercept, rel=1e-10, abs=1e-9), key
        assert a.degenerate == b.degenerate, key


@pytest.mark.parametrize("name", ALL_FIXTURES)
@pytest.mark.parametrize("direction", [1, -1])
def test_theorem_matches_engine_on_fixtures(name, direction, solutions):
    _agree(solutions[name], direction)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 2**32 - 1))
def test_theorem_matches_engine_random(seed):
    f = fixtures.random_configuration(np.random.default_rng(seed), max_groups=8)
    sol = Solution(*f.args)
    for d in (1, -1):
        _agree(sol, d)


def test_empirical_slope_on_exact_line():
    c, d = empirical_slope(lambda t: 0.37 * t - 2.5, (-10.0, 30.0), 11)
    assert c == pytest.approx(0.37, abs=1e-12) and d == pytest.approx(-2.5, abs=1e-12)
    with pytest.raises(ValueError):
        empirical_slope(lambda t: t, (0.0, 1.0), 1)


def _traj(sol, target):
    return lambda t: trajectories(sol.physical(t))[(target, "position")]


def test_empirical_slope_examples(solutions):
    c, _ = empirical_slope(_traj(solutions["ex-3x3-interlacing"], "y[3.1]"), (-220.0, -180.0))
    assert abs(c - 0.25) <= 1e-3
    c, _ = empirical_slope(_traj(solutions["ex-2x1"], "x[2.1]"), (-220.0, -180.0))
    assert abs(c - 1 / 6) <= 1e-3


def test_two_by_one_lines():
    f = fixtures.get("ex-2x1")
    y1 = asymptote_odd(*f.args, "y[1.1]", "position", "+")
    assert y1.slope == pytest.approx(2 / 3, rel=1e-15)
    ps = Solution(*f.args).physical(np.array([-5.0, 0.0, 5.0]))
    assert np.allclose(ps.y[0], y1(ps.t), atol=1e-13)
    assert asymptote_odd(*f.args, "x[2.1]", "position", -1).slope == pytest.approx(1 / 6, rel=1e-15)
    assert asymptote_odd(*f.args, "x[1.1]", "position", 1).slope == pytest.approx(1 / 2, rel=1e-15)


def test_rightmost_y_singleton_intercept():
    f = fixtures.get("ex-3x3-interlacing")
    line = asymptote_even(*f.args, "y[3.1]", "position", -1)
    assert line.slope == pytest.approx(1 / (2 * 2.0), rel=1e-15)
    assert line.intercept == pytest.approx(0.5 * math.log(2e21), rel=1e-15)
    # half of ln 2 + 21 ln 10 is 24.52372 (a four-digit value of 24.5222 is an arithmetic slip)
    assert line.intercept == pytest.approx(24.523717066717452, rel=1e-14)


def test_one_by_one_lines_are_exact():
    f = fixtures.get("ex-1x1")
    ps = Solution(*f.args).physical(np.array([-3.0, 0.0, 4.0]))
    for d in (1, -1):
        lines = theorem_lines(*f.args, d)
        for (target, kind), line in lines.items():
            vals = trajectories(ps)[(target, kind)]
            assert np.allclose(vals, line(ps.t), atol=1e-13)


def _position_slopes(sol, d):
    lines = theorem_lines(sol.layout, sol.spectral, sol.params, d)
    order = [f"{k.lower()}[{j}.{i}]" for k, j, size in sol.layout.chain() for i in range(1, size + 1)]
    return [lines[(t, "position")].slope for t in order]


@pytest.mark.parametrize("name", ["ex-1x1", "ex-2x2", "ex-3x3-interlacing"])
def test_even_interlacing_velocities_reverse(name, solutions):
    sol = solutions[name]
    assert _position_slopes(sol, 1) == pytest.approx(_position_slopes(sol, -1)[::-1], rel=1e-14)


def test_even_velocity_multiset_random():
    rng = np.random.default_rng(5)
    n = 0
    while n < 40:
        f = fixtures.random_configuration(rng, max_groups=8, max_size=1)
        if f.layout.parity != "even":
            continue
        sol = Solution(*f.args)
        a = sorted(_position_slopes(sol, 1))
        b = sorted(_position_slopes(sol, -1))
        assert a == pytest.approx(b, rel=1e-13)
        n += 1


def test_odd_velocity_asymmetry(solutions):
    sol = solutions["ex-4x3"]
    sl = lambda d: Counter(round(l.slope, 12) for (tg, k), l in
                           theorem_lines(sol.layout, sol.spectral, sol.params, d).items() if k == "position")
    assert sl(1) != sl(-1)


def test_typical_group_coalescence():
    f = fixtures.get("ex-3x3-allgroups")
    lines = theorem_lines(*f.args, 1)
    ys = [lines[(f"y[2.{i}]", "position")] for i in range(1, 6)]
    assert len({(l.slope, l.intercept) for l in ys[:-1]}) == 1
    assert (ys[-1].slope, ys[-1].intercept) != (ys[0].slope, ys[0].intercept)


def test_degenerate_lines_are_flagged():
    f = fixtures.get("ex-3x3-allgroups")
    found = [l for d in (1, -1) for l in theorem_lines(*f.args, d).values() if l.degenerate]
    assert found and all(l.slope == 0.0 for l in found)


@pytest.mark.parametrize("name", ["ex-3x3-interlacing", "ex-4x3", "ex-2x1", "ex-2x2", "ex-proof-technique"])
def test_convergence_is_monotone(name, solutions):
    sol = solutions[name]
    for d in (1, -1):
        lines = theorem_lines(sol.layout, sol.spectral, sol.params, d)
        ts = d * np.array([50.0, 100.0, 200.0])
        tr = trajectories(sol.physical(ts))
        for key, line in lines.items():
            gap = np.abs(tr[key] - line(ts))
            assert gap[2] <= 1e-6, (name, key)
            assert gap[1] <= gap[0] + 1e-12 and gap[2] <= gap[1] + 1e-12, (name, key)


def test_allgroups_converge_later(solutions):
    # the group parameters span 35 decades, so the lines are only reached near |t| = 800
    for name in ("ex-3x3-allgroups", "ex-4x3-allgroups"):
        rows = asymptote_table(solutions[name], at=800.0)
        assert max(r.gap for r in rows) <= 1e-6, name


def test_table_shape(solutions):
    rows = asymptote_table(solutions["ex-2x1"])
    assert len(rows) == 2 * 2 * 3
    assert rows[0].direction == "plus-infinity" and rows[-1].direction == "minus-infinity"
    en = asymptote_table(solutions["ex-2x1"], source="engine")
    assert [r.target for r in en] == [r.target for r in rows]
    with pytest.raises(ValueError):
        asymptote_table(solutions["ex-2x1"], source="nope")


def test_single_target_api_errors():
    f = fixtures.get("ex-2x1")
    with pytest.raises(ValueError):
        asymptote_even(*f.args, "x[1.1]", "position", 1)
    with pytest.raises(ValueError):
        asymptote(*f.args, "x[1.1]", "velocity", 1)
    with pytest.raises(ValueError):
        asymptote(*f.args, "z[1.1]", "position", 1)
    with pytest.raises(ClauseError):
        asymptote(*f.args, "x[3.1]", "position", 1)
    with pytest.raises(ValueError):
        direction_sign("sideways")
    assert isinstance(asymptote(*f.args, "x[1.1]", "log-amplitude", "-inf"), AsymptoteLine)


def test_every_clause_is_reachable():
    rng = np.random.default_rng(11)
    names = set()
    for _ in range(150):
        f = fixtures.random_configuration(rng)
        ctx = _Ctx(*f.args)
        for kind, idx, size in f.layout.chain():
            for i in range(1, size + 1):
                for d in (1, -1):
                    names.add(clause_for(ctx, kind, idx, i, d).name)
    for name in fixtures.FIXTURES:
        f = fixtures.get(name)
        ctx = _Ctx(*f.args)
        for kind, idx, size in f.layout.chain():
            for i in range(1, size + 1):
                for d in (1, -1):
                    names.add(clause_for(ctx, kind, idx, i, d).name)
    assert len(names) >= 30
