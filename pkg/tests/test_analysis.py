"""Convergence profiles, trajectory sets, closedness, and table emission."""

import json
import math

import pytest

from unitchain.analysis import (
    CSV_COLUMNS,
    absorption_functional,
    convergence_profile,
    default_test_family,
    dirac_fixed_points,
    feller_defect,
    gamma_limit,
    invariance_residual,
    is_stochastically_closed,
    profile_entries,
    profile_to_csv,
    profile_to_dict,
    trajectory_min_log_separation,
    trajectory_set,
    uniformity_sup,
    weak_star_gap,
    weak_star_gap_dual,
)
from unitchain.grids import endpoint_refined_grid, geometric_near_one, uniform_grid
from unitchain.kernel import mc1, mc2, mc3, mc4, mc5
from unitchain.measure import (
    ONE,
    ZERO,
    MeasurableSet,
    Point,
    convex_combine,
    dirac,
    open_unit_interval,
)

from oracles import gamma_partial

ALL_CHAINS = [mc1(), mc2(), mc3(), mc4(), mc5(0.3), mc5(0.5)]


class TestDefaultFamily:
    def test_pinned_labels(self):
        labels = [f.label for f in default_test_family()]
        assert labels == ["1", "x", "x^2", "1 - x", "|x - 1/2|", "min(1, 4x(1-x))"]

    def test_cached(self):
        assert default_test_family() is default_test_family()


class TestProfiles:
    def test_mc1_rows_match_closed_form(self):
        prof = convergence_profile(mc1(), 0.5, dirac(ZERO), 6)
        for r in prof.rows[1:]:
            want = 0.5 ** (2**r.n - 1)
            assert math.isclose(r.tv, want, rel_tol=1e-12)
        assert prof.row(3).n == 3
        assert prof.chain == "mc1"

    def test_row_zero_is_start(self):
        prof = convergence_profile(mc1(), 0.5, dirac(ZERO), 2)
        assert prof.row(0).tv == 1.0

    def test_log_column_outlives_linear(self):
        prof = convergence_profile(mc1(), 0.5, dirac(ZERO), 12)
        last = prof.row(12)
        assert last.tv == 0.0  # below the double floor
        want = (2.0**12 - 1.0) * math.log10(0.5)
        assert math.isclose(last.log10_tv, want, rel_tol=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            convergence_profile(mc1(), 0.5, dirac(ZERO), -1)
        with pytest.raises(ValueError):
            convergence_profile(mc1(), 0.5, dirac(0.5).scaled(math.log(0.5)), 3)


class TestUniformity:
    def test_mc1_sup_stays_near_one(self):
        grid = geometric_near_one(12)
        for n in (1, 3, 6):
            assert uniformity_sup(mc1(), grid, dirac(ZERO), n) >= 0.99

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            uniformity_sup(mc1(), [], dirac(ZERO), 3)
        with pytest.raises(ValueError):
            uniformity_sup(mc1(), [0.0, 0.5], dirac(ZERO), 3)


class TestWeakGap:
    def test_mc2_weak_gap_closes(self):
        fam = default_test_family()
        assert weak_star_gap(mc2(), 0.5, 10, fam, dirac(ZERO)) <= 1e-3
        # strong distance stays put while the weak gap closes
        from unitchain.measure import tv_distance
        from unitchain.kernel import iterate

        mu10 = iterate(mc2(), dirac(0.5), 10)[-1]
        assert tv_distance(mu10, dirac(ZERO)) > 0.35

    def test_dual_route_agrees(self):
        fam = default_test_family()
        for n in (1, 2, 3):
            a = weak_star_gap(mc2(), 0.3, n, fam, dirac(ZERO))
            b = weak_star_gap_dual(mc2(), 0.3, n, fam, dirac(ZERO))
            assert math.isclose(a, b, rel_tol=1e-10, abs_tol=1e-14)

    def test_empty_family_rejected(self):
        with pytest.raises(ValueError):
            weak_star_gap(mc1(), 0.5, 3, (), dirac(ZERO))


class TestTrajectories:
    def test_points_are_exact_squares(self):
        t = trajectory_set(0.5, 50)
        assert len(t) == 51
        for k, p in enumerate(t.points):
            assert p.log_value == math.log(0.5) * 2.0**k

    def test_as_measurable_set(self):
        t = trajectory_set(0.5, 3)
        s = t.as_measurable_set()
        assert s.contains(Point.from_linear(0.0625))
        assert not s.contains(ZERO)
        with_abs = trajectory_set(0.5, 3, include_absorbers=True).as_measurable_set()
        assert with_abs.contains(ZERO) and with_abs.contains(ONE)

    def test_validation(self):
        with pytest.raises(ValueError):
            trajectory_set(0.0, 3)
        with pytest.raises(ValueError):
            trajectory_set(1.0, 3)
        with pytest.raises(ValueError):
            trajectory_set(0.5, -1)

    def test_separation(self):
        a = trajectory_set(1 / math.pi, 40)
        b = trajectory_set(1 / math.e, 40)
        assert trajectory_min_log_separation(a, b) > 0.0
        assert trajectory_min_log_separation(a, a) == 0.0


class TestClosedness:
    @pytest.mark.parametrize("kernel", ALL_CHAINS, ids=lambda k: k.label)
    def test_absorbers_are_closed(self, kernel):
        for site in (ZERO, ONE):
            rep = is_stochastically_closed(kernel, MeasurableSet.singleton(site), [site])
            assert rep.closed and rep.max_leak == 0.0

    def test_interior_leaks(self):
        rep = is_stochastically_closed(mc1(), open_unit_interval(), [0.3])
        assert not rep
        assert math.isclose(rep.max_leak, 0.7, rel_tol=1e-12)
        assert rep.worst_probe == Point.from_linear(0.3)

    def test_trajectory_plus_absorbers_closed(self):
        s = trajectory_set(0.5, 30, include_absorbers=True).as_measurable_set()
        probes = trajectory_set(0.5, 20).points
        assert is_stochastically_closed(mc1(), s, probes).closed

    def test_probe_outside_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            is_stochastically_closed(mc1(), MeasurableSet.singleton(ZERO), [0.5])


class TestInvarianceAndAbsorption:
    @pytest.mark.parametrize("kernel", ALL_CHAINS, ids=lambda k: k.label)
    def test_dirac_absorbers_invariant(self, kernel):
        assert invariance_residual(kernel, dirac(ZERO)) == 0.0
        assert invariance_residual(kernel, dirac(ONE)) == 0.0
        mix = convex_combine([(0.5, dirac(ZERO)), (0.5, dirac(ONE))])
        assert invariance_residual(kernel, mix) == 0.0

    def test_moving_atom_residual(self):
        # sup-form: the relocated unit atom contributes its full mass
        assert math.isclose(invariance_residual(mc1(), dirac(0.5)), 1.0, rel_tol=1e-12)

    def test_absorption_flux(self):
        assert math.isclose(absorption_functional(mc1(), dirac(0.3)), 0.7, rel_tol=1e-12)
        mix = convex_combine([(0.5, dirac(ZERO)), (0.5, dirac(0.3))])
        assert math.isclose(absorption_functional(mc1(), mix), 0.35, rel_tol=1e-12)
        assert absorption_functional(mc2(), dirac(ONE)) == 0.0


class TestFellerDefect:
    def test_mc1_continuous_at_one(self):
        approach = geometric_near_one(12)
        for f in default_test_family():
            assert feller_defect(mc1(), f, ONE, approach) <= 1e-6

    def test_mc2_jump_at_one(self):
        approach = geometric_near_one(12)
        d = feller_defect(mc2(), lambda p: p.value, ONE, approach)
        assert abs(d - 1.0) <= 1e-6

    def test_approach_validation(self):
        with pytest.raises(ValueError):
            feller_defect(mc1(), lambda p: p.value, ONE, [])
        with pytest.raises(ValueError):
            feller_defect(mc1(), lambda p: p.value, ONE, [0.9, 0.8])  # wrong direction
        with pytest.raises(ValueError):
            feller_defect(mc1(), lambda p: p.value, ONE, [0.9, 1.0])


class TestFixedPoints:
    @pytest.mark.parametrize("kernel", ALL_CHAINS, ids=lambda k: k.label)
    def test_exactly_the_absorbers(self, kernel):
        pts = dirac_fixed_points(kernel, endpoint_refined_grid())
        assert pts == [ZERO, ONE]

    def test_grid_must_hold_endpoints(self):
        with pytest.raises(ValueError):
            dirac_fixed_points(mc1(), uniform_grid(10)[1:])


class TestGammaLimit:
    def test_matches_partial_products(self):
        for x0 in (0.3, 0.5, 0.9):
            # by n = 40 the plain-float partial product has fully stabilized
            assert math.isclose(gamma_limit(x0), gamma_partial(x0, 40), rel_tol=1e-12)

    def test_monotone_in_x0(self):
        vals = [gamma_limit(x) for x in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert vals == sorted(vals, reverse=True)

    def test_endpoints(self):
        assert gamma_limit(ZERO) == 1.0
        with pytest.raises(ValueError):
            gamma_limit(ONE)


class TestEmission:
    def test_csv_contract(self):
        prof = convergence_profile(mc1(), 0.5, dirac(ZERO), 3)
        text = profile_to_csv(prof)
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 5
        # float cells are repr-exact: parsing the cell recovers the value
        cell = lines[2].split(",")[3]
        assert float(cell) == prof.row(1).tv

    def test_entries_match_columns(self):
        prof = convergence_profile(mc2(), 0.3, dirac(ZERO), 2)
        for e in profile_entries(prof):
            assert tuple(e.keys()) == CSV_COLUMNS

    def test_dict_is_json_clean(self):
        # row 0 against the start itself has tv = 0, whose log must serialize
        prof = convergence_profile(mc1(), 0.5, dirac(0.5), 2)
        text = json.dumps(profile_to_dict(prof), allow_nan=False, sort_keys=True)
        back = json.loads(text)
        assert back["rows"][0]["log10_tv"] == "-inf"
        assert back["chain"] == "mc1"


class TestGrids:
    def test_uniform(self):
        g = uniform_grid(10)
        assert len(g) == 11
        assert g[0] == ZERO and g[-1] == ONE
        with pytest.raises(ValueError):
            uniform_grid(0)

    def test_endpoint_refined(self):
        g = endpoint_refined_grid()
        assert ZERO in g and ONE in g
        assert Point.from_linear(1e-12) in g
        assert Point.from_linear(1.0 - 1e-6) in g
        vals = [p.log_value for p in g]
        assert vals == sorted(vals)
        assert len(g) == len(set(g))
