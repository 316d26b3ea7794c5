from contextlib import nullcontext as does_not_raise
from dataclasses import replace

import numpy as np
import pytest

from apps.abstracts.exceptions import DomainError, StructureViolation
from apps.hj_halfspin.effective import p_body_critical
from apps.hj_halfspin.profile import (
    PROFILE_HEADER,
    profile_rows,
    viscosity_structure_check,
)
from apps.modelspec.spec import curie_weiss
from apps.spectral.tests.tools import OperatorBuilder


M_STAR: float = np.sqrt(0.75)
M_HAT_P4: float = p_body_critical(4).m_hat


def sup_error(profile, spec, N: int) -> float:
    """Sup distance on |m| <= 0.9 between the min-normalized psi_N and the tabulated psi."""
    op, gs = OperatorBuilder().with_spec(spec).with_N(N).solve()
    m = (gs.points[:, 1] - gs.points[:, 0]) / gs.N
    inside = np.abs(m) <= 0.9
    limit = np.interp(m[inside], profile.nodes, profile.psi)
    return float(np.max(np.abs(gs.psi[inside] - limit)))


class TestSymmetricWells:
    def test_pair_selected_with_shock_at_origin(self, profile_builder, cw_half):
        profile = profile_builder.with_spec(cw_half).build()
        assert profile.status == "ok", f"{profile.status} must be equal ok"
        assert np.allclose(profile.selected, (-M_STAR, M_STAR), atol=1e-6), (
            f"{profile.selected} must be equal {(-M_STAR, M_STAR)}"
        )
        assert len(profile.shocks) == 1, f"{profile.shocks} must hold one shock"
        assert profile.shocks[0] == pytest.approx(0.0, abs=1e-8), f"{profile.shocks[0]} must be equal 0.0"

    def test_table_shape(self, profile_builder):
        profile = profile_builder.build()
        branches = set(np.unique(profile.branch))
        assert profile.psi.min() == pytest.approx(0.0, abs=1e-12), f"{profile.psi.min()} must be equal 0.0"
        assert np.all(profile.psi >= 0), "psi must be nonnegative"
        assert branches == {0, 1}, f"{branches} must be equal {{0, 1}}"

    def test_symmetric_in_m(self, profile_builder):
        profile = profile_builder.build()
        for m in (0.1, 0.4, 0.9):
            right, left = profile.psi_at(m), profile.psi_at(-m)
            assert right == pytest.approx(left, abs=1e-10), f"{right} must be equal {left} at m={m}"

    def test_psi_at_matches_table(self, profile_builder):
        profile = profile_builder.build()
        j = int(np.argmin(np.abs(profile.nodes - 0.25)))
        value = profile.psi_at(float(profile.nodes[j]))
        assert value == pytest.approx(profile.psi[j], abs=1e-12), f"{value} must be equal {profile.psi[j]}"

    def test_psi_vanishes_at_selected(self, profile_builder):
        profile = profile_builder.build()
        for s in profile.selected:
            value = profile.psi_at(s)
            assert value == pytest.approx(0.0, abs=1e-12), f"{value} must be equal 0.0 at m={s}"

    def test_passes_structure_check(self, profile_builder):
        report = viscosity_structure_check(profile_builder.build())
        upper = [kind for _, kind in report.kinks].count("upper")
        assert report.passed, report.failures
        assert report.checked_points > 100, f"{report.checked_points} must exceed 100"
        assert upper == 1, f"{upper} must be equal 1"

    def test_matches_finite_size_ground_state(self, profile_builder, cw_half):
        profile = profile_builder.with_spec(cw_half).build()
        error = sup_error(profile, cw_half, 400)
        assert error < 0.03, f"{error} must be below 0.03"

    def test_finite_size_error_shrinks_with_N(self, profile_builder, cw_half):
        profile = profile_builder.with_spec(cw_half).build()
        errors = [sup_error(profile, cw_half, N) for N in (200, 400, 800)]
        assert all(b < a for a, b in zip(errors, errors[1:])), f"{errors} must decrease with N"
        assert errors[-1] <= 0.01, f"{errors[-1]} must be at most 0.01 at N=800"


class TestSingleWell:
    def test_no_shocks(self, profile_builder, cw_two):
        profile = profile_builder.with_spec(cw_two).build()
        assert profile.shocks == (), f"{profile.shocks} must be empty"
        assert np.allclose(profile.selected, (0.0,), atol=1e-8), f"{profile.selected} must be equal (0.0,)"
        assert np.all(profile.branch == 0), "every node must sit on branch 0"

    def test_passes_structure_check(self, profile_builder, cw_two):
        report = viscosity_structure_check(profile_builder.with_spec(cw_two).build())
        assert report.passed, report.failures

    def test_wrong_anchor_fails_structure_check(self, profile_builder, cw_two):
        profile = profile_builder.with_spec(cw_two).with_selected(0.3).build()
        report = viscosity_structure_check(profile)
        assert not report.passed, "an anchor off the minimum must fail"
        assert any(f.check == "lower_kink" and f.m == pytest.approx(0.3) for f in report.failures), (
            f"{report.failures} must report a lower kink at 0.3"
        )
        with pytest.raises(StructureViolation):
            report.raise_for_failures()


class TestTabulatedKinks:
    @pytest.mark.parametrize(
        argnames=["offset", "kind"],
        argvalues=[(-0.05, "lower"), (0.05, "upper")],
    )
    def test_kink_away_from_minima_and_shocks(self, profile_builder, cw_half, offset, kind):
        profile = profile_builder.with_spec(cw_half).build()
        j = int(np.argmin(np.abs(profile.nodes - 0.4)))
        psi = profile.psi.copy()
        psi[j] += offset
        report = viscosity_structure_check(replace(profile, psi=psi))
        found = [f for f in report.failures if f.check == "table_kink" and f.m == pytest.approx(profile.nodes[j])]
        assert len(found) == 1, f"{report.failures} must hold a table kink at {profile.nodes[j]}"
        assert found[0].detail.startswith(kind), f"{found[0].detail} must name a {kind} kink"

    def test_kink_at_a_discarded_well(self, profile_builder, p4_critical):
        profile = profile_builder.with_spec(p4_critical).build()
        j = int(np.argmin(np.abs(profile.nodes - M_HAT_P4)))
        psi = profile.psi.copy()
        psi[j] = 0.0
        report = viscosity_structure_check(replace(profile, psi=psi))
        assert any(f.check == "table_kink" for f in report.failures), (
            f"{report.failures} must flag the valley at {M_HAT_P4}"
        )

    @pytest.mark.parametrize(argnames="selection", argvalues=["chi0", "spectral"])
    def test_admissible_tables_have_no_stray_kinks(self, profile_builder, p4_critical, selection):
        profile = profile_builder.with_spec(p4_critical).with_selection(selection).build()
        report = viscosity_structure_check(profile)
        stray = [f for f in report.failures if f.check == "table_kink"]
        assert stray == [], f"{stray} must be empty"


class TestCriticalSelection:
    def test_chi0_rule_picks_origin(self, profile_builder, p4_critical):
        profile = profile_builder.with_spec(p4_critical).build()
        assert len(profile.minima) == 3, f"{profile.minima} must hold three minima"
        assert np.allclose(profile.selected, (0.0,), atol=1e-7), f"{profile.selected} must be equal (0.0,)"
        assert profile.shocks == (), f"{profile.shocks} must be empty"

    def test_spectral_rule_picks_outer_pair(self, profile_builder, p4_critical):
        profile = profile_builder.with_spec(p4_critical).with_selection("spectral").build()
        expected = (-M_HAT_P4, M_HAT_P4)
        assert np.allclose(profile.selected, expected, atol=1e-7), f"{profile.selected} must be equal {expected}"
        assert profile.shocks[0] == pytest.approx(0.0, abs=1e-4), f"{profile.shocks[0]} must be equal 0.0"

    def test_shock_on_a_well_is_smooth(self, profile_builder, p4_critical):
        profile = profile_builder.with_spec(p4_critical).with_selection("spectral").build()
        report = viscosity_structure_check(profile)
        assert report.passed, report.failures
        assert (profile.shocks[0], "smooth") in report.kinks, f"{report.kinks} must hold a smooth shock"

    def test_summary(self, profile_builder, p4_critical):
        summary = profile_builder.with_spec(p4_critical).build().summary()
        assert summary["status"] == "ok", f"{summary['status']} must be equal ok"
        assert summary["selection"] == "chi0", f"{summary['selection']} must be equal chi0"
        assert len(summary["chi0"]) == 3, f"{summary['chi0']} must hold three entries"

    def test_unbroken_tie_is_ambiguous(self, profile_builder, p4_critical, monkeypatch):
        monkeypatch.setattr("apps.hj_halfspin.profile.chi0", lambda spec, m: 1.0)
        profile = profile_builder.with_spec(p4_critical).build()
        assert profile.status == "ambiguous", f"{profile.status} must be equal ambiguous"
        assert len(profile.candidates) == 3, f"{len(profile.candidates)} must be equal 3"
        assert all(c.status == "ok" for c in profile.candidates), "every candidate must carry a table"
        with pytest.raises(DomainError):
            profile.psi_at(0.0)


class TestProfileDomain:
    @pytest.mark.parametrize(
        argnames=["selection", "expectation"],
        argvalues=[
            ("chi0", does_not_raise()),
            ("spectral", does_not_raise()),
            ("energy", pytest.raises(DomainError)),
        ],
    )
    def test_selection_rules(self, profile_builder, selection, expectation):
        with expectation:
            profile_builder.with_spec(curie_weiss(2.0)).with_nodes(51).with_selection(selection).build()

    @pytest.mark.parametrize(
        argnames=["selected", "expectation"],
        argvalues=[
            ((0.0,), does_not_raise()),
            ((), pytest.raises(DomainError)),
            ((1.0,), pytest.raises(DomainError)),
        ],
    )
    def test_explicit_selection(self, profile_builder, cw_two, selected, expectation):
        with expectation:
            profile_builder.with_spec(cw_two).with_nodes(51).with_selected(*selected).build()

    def test_rows(self, profile_builder):
        profile = profile_builder.with_nodes(51).build()
        rows = profile_rows(profile)
        assert len(PROFILE_HEADER) == 4, f"{len(PROFILE_HEADER)} must be equal 4"
        assert len(rows) == profile.nodes.size, f"{len(rows)} must be equal {profile.nodes.size}"
        assert rows[0][0] == -1.0 and rows[-1][0] == 1.0, f"{rows[0][0]}, {rows[-1][0]} must be -1.0, 1.0"
