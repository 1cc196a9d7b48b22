import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peakon_gx import fixtures
from peakon_gx.field import (OrderingError, eval_fields, fields, integrate, ode_rhs, ode_rhs_log,
                             residual, residual_of)
from peakon_gx.solver import PeakonState, Solution
from peakon_gx.spectral import GroupLayout

L11 = GroupLayout([1], [1])
L21 = GroupLayout([1, 1], [1])


def test_single_peakon_field_values():
    s = PeakonState.single(L11, 0.0, [0.0], [math.log(2.0)], [5.0], [0.0])
    f = eval_fields(s, 0.0)
    assert f.u == pytest.approx(2.0) and f.ux == 0.0
    s = PeakonState.single(L11, 0.0, [0.0], [0.0], [5.0], [0.0])
    f = eval_fields(s, 1.0)
    assert f.u == pytest.approx(math.exp(-1.0))
    # to the right of a peak the field decreases
    assert f.ux == pytest.approx(-math.exp(-1.0))
    h = 1e-6
    left, right = eval_fields(s, 1.0 - h).u, eval_fields(s, 1.0 + h).u
    assert (right - left) / (2 * h) == pytest.approx(f.ux, rel=1e-8)


def test_kink_jump_and_continuity():
    s = PeakonState.single(L11, 0.0, [0.3], [math.log(1.7)], [2.0], [0.0])
    eps = 1e-9
    u, ux, _, _ = fields(s, [0.3 - eps, 0.3, 0.3 + eps])
    assert u[0] == pytest.approx(u[2], rel=1e-8)
    assert ux[2] - ux[0] == pytest.approx(-2 * 1.7, rel=1e-7)
    assert ux[1] == pytest.approx(0.5 * (ux[0] + ux[2]), abs=1e-7)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.lists(st.floats(-3, 3), min_size=3, max_size=3),
       st.floats(-8, 8))
def test_derivative_bounded_by_value(xs, lms, q):
    xs = sorted(xs)
    s = PeakonState.single(GroupLayout([1, 1], [1]), 0.0, [xs[0], xs[2]], lms[:2], [xs[1]], lms[2:])
    u, ux, v, vx = fields(s, [q])
    assert abs(ux[0]) <= u[0] * (1 + 1e-12) and abs(vx[0]) <= v[0] * (1 + 1e-12)


def test_field_at_peakons_matches_shorthand():
    st_ = Solution(*fixtures.get("ex-2x1").args).physical([0.3])
    x, m, y, n = st_.x[:, 0], st_.m[:, 0], st_.y[:, 0], st_.n[:, 0]
    u, _, v, _ = fields(st_, [x[0], y[0], x[1]])
    assert u[0] == pytest.approx(m[0] + m[1] * math.exp(x[0] - x[1]), rel=1e-14)
    assert v[0] == pytest.approx(n[0] * math.exp(x[0] - y[0]), rel=1e-14)
    assert u[1] == pytest.approx(m[0] * math.exp(x[0] - y[0]) + m[1] * math.exp(y[0] - x[1]), rel=1e-14)


def test_one_by_one_rhs_chain():
    s = PeakonState.single(L11, 0.0, [-0.4], [0.2], [0.9], [-0.7])
    dx, dlm, dy, dln = ode_rhs_log(s)
    k = math.exp(0.2 - 0.7 - 0.4 - 0.9)
    for v in (dx[0], dlm[0], dy[0], -dln[0]):
        assert v == pytest.approx(k, rel=1e-14)
    # the two sides round the same product in a different order
    assert dlm[0] == pytest.approx(-dln[0], rel=1e-15)


def test_two_by_one_rhs_matches_written_system():
    x1, y1, x2 = -1.0, 0.2, 0.7
    m1, n1, m2 = 1.3, 0.6, 2.1
    s = PeakonState.single(L21, 0.0, [x1, x2], np.log([m1, m2]), [y1], [math.log(n1)])
    dx, dy, dm, dn = ode_rhs(s)
    e = math.exp
    assert dx[0] == pytest.approx((m1 + m2 * e(x1 - x2)) * n1 * e(x1 - y1), rel=1e-14)
    assert dy[0] == pytest.approx((m1 * e(x1 - y1) + m2 * e(y1 - x2)) * n1, rel=1e-14)
    assert dx[1] == pytest.approx((m1 * e(x1 - x2) + m2) * n1 * e(y1 - x2), rel=1e-14)
    assert dm[0] / m1 == pytest.approx((m1 - m2 * e(x1 - x2)) * n1 * e(x1 - y1), rel=1e-14)
    assert dn[0] / n1 == pytest.approx((-m1 * e(x1 - y1) + m2 * e(y1 - x2)) * n1, rel=1e-14)
    assert dm[1] / m2 == pytest.approx((m1 * e(x1 - x2) - m2) * n1 * e(y1 - x2), rel=1e-14)


def test_zero_v_gives_zero_rhs():
    s = PeakonState.single(L21, 0.0, [0.0, 1.0], [0.0, 0.0], [0.5], [-np.inf])
    for arr in ode_rhs_log(s):
        assert np.all(arr == 0.0)


def test_rejects_bad_states():
    with pytest.raises(ValueError):
        ode_rhs(PeakonState.single(L11, 0.0, [0.5], [0.0], [0.5], [0.0]))
    with pytest.raises(OrderingError):
        ode_rhs(PeakonState.single(L11, 0.0, [1.0], [0.0], [0.5], [0.0]))
    st_ = Solution(*fixtures.get("ex-1x1").args).physical([0.0, 1.0])
    with pytest.raises(ValueError):
        ode_rhs(st_)
    with pytest.raises(ValueError):
        integrate(st_.at(0), 0.0, 1.0, 0)


def test_integrate_zero_length():
    s = Solution(*fixtures.get("ex-2x1").args).physical([0.0])
    assert integrate(s, 0.0, 0.0, 10) is s


def test_integrate_one_by_one_is_linear():
    sol = Solution(*fixtures.get("ex-1x1").args)
    end = integrate(sol.physical([0.0]), 0.0, 5.0, 2000)
    want = sol.physical([5.0])
    assert end.x[0, 0] == pytest.approx(want.x[0, 0], abs=1e-9)
    assert want.x[0, 0] - sol.physical([0.0]).x[0, 0] == pytest.approx(5.0 / 2.0, abs=1e-13)


def test_constant_of_motion_under_rk4():
    sol = Solution(*fixtures.get("ex-1x1").args)
    s = sol.physical([0.0])
    inv = lambda st_: st_.log_m[0, 0] + st_.log_n[0, 0] + st_.x[0, 0] - st_.y[0, 0]
    c0 = inv(s)
    assert math.exp(c0) == pytest.approx(1 / (2 * 1.0), rel=1e-14)
    for k in range(10):
        s = integrate(s, float(k), float(k + 1), 100)
        assert abs(math.expm1(inv(s) - c0)) <= 1e-10


def test_rk4_order():
    sol = Solution(*fixtures.get("ex-2x1").args)
    # the window spans the x_1 transition, where the flow is far from uniform
    s0, s1 = sol.physical([-46.0]), sol.physical([-36.0])
    err = []
    for n in (20, 40):
        e = integrate(s0, -46.0, -36.0, n)
        err.append(max(np.max(np.abs(e.x - s1.x)), np.max(np.abs(e.y - s1.y)),
                       np.max(np.abs(e.log_m - s1.log_m)), np.max(np.abs(e.log_n - s1.log_n))))
    assert 12.0 <= err[0] / err[1] <= 20.0


def test_rk4_three_by_three():
    sol = Solution(*fixtures.get("ex-3x3-interlacing").args)
    end = integrate(sol.physical([0.0]), 0.0, 1.0, 10_000)
    want = sol.physical([1.0])
    assert np.max(np.abs(end.x - want.x)) <= 1e-6 and np.max(np.abs(end.y - want.y)) <= 1e-6


def test_residual_examples(solutions):
    for t in (-30.0, 0.0, 30.0):
        assert residual_of(solutions["ex-1x1"], t, h=1e-5) <= 1e-9
    for t in (-20.0, 0.0, 20.0):
        assert residual_of(solutions["ex-3x3-allgroups"], t) <= 1e-6
    assert residual(*fixtures.get("ex-4x3-allgroups").args, 0.0) <= 1e-6


def test_residual_detects_wrong_solution():
    # the 2+1 state advanced with a 1+1-style uniform drift is not a solution
    sol = Solution(*fixtures.get("ex-2x1").args)

    class Shifted:
        layout, spectral, params = sol.layout, sol.spectral, sol.params

        def physical(self, t):
            s = sol.physical(t)
            return PeakonState(s.layout, s.t, s.x + 0.1 * s.t, s.log_m, s.y, s.log_n)

    assert residual_of(Shifted(), 0.0) > 1e-2


@pytest.mark.parametrize("name", ["ex-2x1", "ex-3x3-allgroups", "ex-4x3-allgroups"])
def test_chain_rhs_matches_ranked_sums(name):
    from peakon_gx.field import _chain_rhs, _rhs_log, chain_ranks
    sol = Solution(*fixtures.get(name).args)
    st_ = sol.physical([0.3])
    rx, ry = chain_ranks(st_.layout)
    ix, iy = rx.astype(int), ry.astype(int)
    n = ix.size + iy.size
    P, L, isx = np.empty(n), np.empty(n), np.zeros(n, dtype=bool)
    P[ix], P[iy], L[ix], L[iy], isx[ix] = st_.x[:, 0], st_.y[:, 0], st_.log_m[:, 0], st_.log_n[:, 0], True
    idx = np.arange(n)
    sgn = np.sign(idx[None, :] - idx[:, None]).astype(float)
    mask = np.where(np.stack([isx, ~isx])[:, None, :], 0.0, -np.inf) + np.zeros((2, n, n))
    dP, dL = _chain_rhs(P, L, isx, sgn, mask)
    dx, dlm, dy, dln = _rhs_log(st_.x[:, 0], st_.log_m[:, 0], st_.y[:, 0], st_.log_n[:, 0], rx, ry)
    assert dP[ix] == pytest.approx(dx, rel=1e-13) and dP[iy] == pytest.approx(dy, rel=1e-13)
    assert dL[ix] == pytest.approx(dlm, rel=1e-12, abs=1e-14) and dL[iy] == pytest.approx(dln, rel=1e-12, abs=1e-14)
