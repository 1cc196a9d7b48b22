import pytest
from hypothesis import given, settings, strategies as st

from peakon_gx import fixtures
from peakon_gx.spectral import (CONSTRAINT_CODES, STRUCTURAL_CODES, ConfigError, Group, GroupLayout,
                                GroupParams, SpectralData, require_valid, sums, validate)

from cases import CONSTRAINT_CASES, STRUCTURAL_CASES


def test_sums_examples():
    g = sums(Group([2.0], [3.0]))
    assert (g.T[1], g.S[1], g.R[1]) == (2.0, 0.0, 6.0)
    g = sums(Group([1.0, 2.0], [1.0, 3.0]))
    assert (g.T[2], g.S[2], g.R[2]) == (3.0, 2.0, 7.0)
    assert g.R[0] == 0.0 and g.sigma[0] == 0.0 and g.T[0] == 0.0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=6), st.lists(st.floats(1e-3, 10.0), min_size=6, max_size=6))
def test_sums_identities(taus, steps):
    sig, acc = [], 0.0
    for d in steps[: len(taus)]:
        acc += d
        sig.append(acc)
    g = sums(Group(taus, sig))
    for i in range(1, g.N):
        assert g.T[i] > g.T[i - 1]
        assert g.R[i] > 0
        assert g.R[i] == pytest.approx(g.sigma[i] * g.T[i] - g.S[i], rel=1e-9, abs=1e-12 * g.sigma[i] * g.T[i])


def test_fixtures_are_valid():
    for f in fixtures.FIXTURES.values():
        rep = validate(*f.args)
        assert rep.ok, (f.name, rep.summary())


def test_one_by_one_examples():
    lay = GroupLayout([1], [1])
    ok = SpectralData([1.0], [], [1.0], [], 2.0, 1.0)
    assert validate(lay, ok, GroupParams.singletons(lay)).ok
    bad = SpectralData([1.0], [], [1.0], [], 1.0, 1.0)
    assert validate(lay, bad, GroupParams.singletons(lay)).codes == ["CD>1"]


def test_one_by_one_groups_uses_general_c_check():
    f = fixtures.get("ex-1x1-groups")
    assert validate(*f.args).ok
    taus, sig = f.params.x[0].taus, f.params.x[0].sigmas
    assert taus[0] * 1.0 < f.spectral.bigC * sig[0] * taus[1]


@pytest.mark.parametrize("code", sorted(STRUCTURAL_CASES))
def test_structural_codes(code):
    rep = validate(*STRUCTURAL_CASES[code])
    assert rep.codes == [code]
    assert rep.structural


def test_every_code_has_a_case():
    assert set(CONSTRAINT_CASES) == set(CONSTRAINT_CODES)
    assert set(STRUCTURAL_CASES) == set(STRUCTURAL_CODES)


def test_report_is_exhaustive_and_pure():
    lay = GroupLayout([1, 1], [1])
    sp = SpectralData([-1.0], [-3.0], [0.0], [1.0], 0.0, -1.0)
    params = GroupParams.singletons(lay)
    rep = validate(lay, sp, params)
    assert rep.codes == ["lambda-positive", "mu-positive", "residue-positive", "C-positive", "D-positive"]
    assert not rep.structural
    assert validate(lay, sp, params) == rep
    with pytest.raises(ConfigError):
        require_valid(lay, sp, params)


def test_violation_names_group():
    rep = validate(*CONSTRAINT_CASES["sigma-increasing"])
    assert rep.violations[0].group == "X2" and rep.violations[0].member == 2
    assert "group X2" in rep.summary()


def test_conditioning_warning():
    lay = GroupLayout([1, 1], [1, 1])
    sp = SpectralData([1.0, 1.0 + 1e-12], [3.0], [1.0, 1.0], [1.0], 1.0, 1.0)
    rep = validate(lay, sp, GroupParams.singletons(lay))
    assert rep.ok and rep.warnings[0].code == "eigenvalue-conditioning"


def test_two_member_leftmost_x_needs_only_c_positive():
    lay = GroupLayout([2, 1], [1, 1])
    sp = SpectralData([0.2, 1.0], [1 / 3], [1e-4, 10.0], [1e-6], 1e-30, 1e18)
    params = GroupParams([Group([1e10], [1e-12]), Group()], [Group(), Group()])
    assert validate(lay, sp, params).ok
