"""Transition kernels: rows, pushforward, duality, built-in chains."""

import math
import random

import pytest

from unitchain.kernel import (
    BUILTIN_NAMES,
    apply_dual,
    apply_markov,
    builtin_chain,
    callable_two_jump_chain,
    cesaro_mass,
    iterate,
    kernel_from_spec,
    kernel_measure,
    kernel_to_spec,
    mc1,
    mc2,
    mc3,
    mc4,
    mc5,
    nstep_mass,
    piecewise_two_jump_chain,
    two_jump_chain,
)
from unitchain.measure import (
    ONE,
    ZERO,
    AuditError,
    Interval,
    MeasurableSet,
    Point,
    convex_combine,
    dirac,
    integrate,
    mass,
)

from oracles import PLAIN_PI, dual_action, plain_pi_mc5, two_jump_path_enumeration

ALL_CHAINS = [mc1(), mc2(), mc3(), mc4(), mc5(0.3), mc5(0.5)]


def plain_pi_for(kernel):
    if kernel.label == "mc5":
        return plain_pi_mc5(kernel.spec["p"])
    return PLAIN_PI[kernel.label]


class TestRows:
    @pytest.mark.parametrize("kernel", ALL_CHAINS, ids=lambda k: k.label)
    def test_interior_row_structure(self, kernel):
        x = Point.from_linear(0.3)
        row = kernel_measure(kernel, x)
        pi = plain_pi_for(kernel)(0.3)
        assert math.isclose(mass(row, MeasurableSet.singleton(x.squared())), pi, rel_tol=1e-12)
        assert math.isclose(mass(row, MeasurableSet.singleton(ZERO)), 1.0 - pi, rel_tol=1e-12)
        assert row.is_probability

    @pytest.mark.parametrize("kernel", ALL_CHAINS, ids=lambda k: k.label)
    def test_endpoints_absorb(self, kernel):
        assert kernel_measure(kernel, ZERO) == dirac(ZERO)
        assert kernel_measure(kernel, ONE) == dirac(ONE)

    def test_mc3_boundary_owned_by_left_piece(self):
        # both pieces give 1/2 there, so the row must show pi = 1/2
        row = kernel_measure(mc3(), 0.5)
        assert math.isclose(mass(row, MeasurableSet.singleton(Point.from_linear(0.25))), 0.5, rel_tol=1e-12)
        # just above the split the other piece applies
        row = kernel_measure(mc3(), 0.6)
        assert math.isclose(mass(row, MeasurableSet.singleton(ZERO)), 0.6, rel_tol=1e-12)

    def test_mc4_mirrors_mc3(self):
        for x in (0.1, 0.5, 0.9):
            pi3 = plain_pi_for(mc3())(x)
            row4 = kernel_measure(mc4(), x)
            sq = MeasurableSet.singleton(Point.from_linear(x).squared())
            assert math.isclose(mass(row4, sq), 1.0 - pi3, rel_tol=1e-12)

    def test_deep_state_rows_stay_exact(self):
        # interior states far below the linear floor still produce valid rows
        deep = Point.from_log(math.log(0.5) * 2.0**30)
        row = kernel_measure(mc1(), deep)
        assert row.is_probability
        assert row.support_points() == (ZERO, deep.squared())


class TestBuiltins:
    def test_names(self):
        assert BUILTIN_NAMES == ("mc1", "mc2", "mc3", "mc4", "mc5")
        for name in BUILTIN_NAMES[:4]:
            assert builtin_chain(name).label == name

    def test_mc5_needs_p(self):
        with pytest.raises(ValueError, match="jump probability"):
            builtin_chain("mc5")
        assert builtin_chain("mc5", p=0.3).spec == {"chain": "mc5", "p": 0.3}
        with pytest.raises(ValueError):
            mc5(1.5)

    def test_unknown_chain(self):
        with pytest.raises(ValueError, match="unknown chain"):
            builtin_chain("mc9")


class TestConstruction:
    def test_pieces_must_cover_interior(self):
        with pytest.raises(ValueError, match="cover"):
            piecewise_two_jump_chain(
                [(Interval(ZERO, Point.from_linear(0.4), True, True), "x")], "gap"
            )

    def test_pieces_must_not_overlap(self):
        with pytest.raises(ValueError, match="overlap"):
            piecewise_two_jump_chain(
                [
                    (Interval(ZERO, Point.from_linear(0.6), True, True), "x"),
                    (Interval(Point.from_linear(0.4), ONE, True, True), "1 - x"),
                ],
                "overlap",
            )

    def test_range_audited_per_piece(self):
        # 2x is a probability on [0,1/2] even though it exceeds 1 later
        k = piecewise_two_jump_chain(
            [
                (Interval(ZERO, Point.from_linear(0.5), True, True), "2*x"),
                (Interval(Point.from_linear(0.5), ONE, False, True), "1 - x"),
            ],
            "steep",
        )
        row = kernel_measure(k, 0.25)
        assert math.isclose(mass(row, MeasurableSet.singleton(ZERO)), 0.5, rel_tol=1e-12)
        with pytest.raises(Exception, match="outside"):
            two_jump_chain("2*x", "bad")

    def test_callable_chain_audited(self):
        k = callable_two_jump_chain(lambda p: 0.5, "const-half")
        assert kernel_measure(k, 0.3).is_probability
        with pytest.raises(AuditError):
            callable_two_jump_chain(lambda p: 1.5, "bad")

    def test_spec_round_trip(self):
        for kernel in (mc1(), mc5(0.3)):
            again = kernel_from_spec(kernel_to_spec(kernel))
            assert again.label == kernel.label
            for x in (0.1, 0.5, 0.9):
                assert kernel_measure(again, x) == kernel_measure(kernel, x)

    def test_custom_spec(self):
        spec = {
            "chain": "custom",
            "pieces": [
                {"from": 0.0, "to": 1.0, "from_closed": True, "to_closed": True, "pi": "x^2"}
            ],
        }
        k = kernel_from_spec(spec)
        assert k.label == "custom"
        row = kernel_measure(k, 0.5)
        assert math.isclose(mass(row, MeasurableSet.singleton(ZERO)), 0.75, rel_tol=1e-12)
        with pytest.raises(ValueError):
            kernel_from_spec({"chain": "custom", "pieces": []})
        with pytest.raises(ValueError):
            kernel_from_spec({"chain": "mc7"})


class TestPushforward:
    @pytest.mark.parametrize("kernel", ALL_CHAINS, ids=lambda k: k.label)
    def test_mass_conserved(self, kernel):
        mu = convex_combine([(0.2, dirac(0.0)), (0.5, dirac(0.3)), (0.3, dirac(0.8))])
        for _ in range(5):
            mu = apply_markov(kernel, mu)
            assert mu.is_probability

    def test_atom_count_grows_linearly(self):
        # two-jump structure: at most one moving atom plus the absorbers
        mus = iterate(mc2(), dirac(0.5), 10)
        for n, mu in enumerate(mus):
            assert len(mu) <= n + 2

    def test_iterate_validates(self):
        with pytest.raises(ValueError):
            iterate(mc1(), dirac(0.5), -1)
        with pytest.raises(ValueError):
            apply_markov(mc1(), dirac(0.5).scaled(math.log(0.5)))


class TestAgainstEnumeration:
    @pytest.mark.parametrize("kernel", ALL_CHAINS, ids=lambda k: k.label)
    @pytest.mark.parametrize("x0", [0.3, 0.7])
    def test_full_distribution(self, kernel, x0):
        n = 6
        want = two_jump_path_enumeration(plain_pi_for(kernel), x0, n)
        mu = iterate(kernel, dirac(x0), n)[-1]

        moving_site = Point.from_linear(x0)
        for _ in range(n):
            moving_site = moving_site.squared()
        got_moving = mass(mu, MeasurableSet.singleton(moving_site))
        got_zero = mass(mu, MeasurableSet.singleton(ZERO))

        assert math.isclose(got_moving, want.get(("interior", n), 0.0), rel_tol=1e-12, abs_tol=1e-15)
        assert math.isclose(got_zero, want.get(("zero",), 0.0), rel_tol=1e-12, abs_tol=1e-15)

    def test_nstep_mass(self):
        E = MeasurableSet.interval(0.0, 1.0)
        for k in (1, 3, 5):
            want = sum(
                p for s, p in two_jump_path_enumeration(PLAIN_PI["mc3"], 0.4, k).items()
                if s[0] == "interior"
            )
            assert math.isclose(nstep_mass(mc3(), 0.4, E, k), want, rel_tol=1e-12)
        with pytest.raises(ValueError):
            nstep_mass(mc3(), 0.4, E, 0)

    def test_cesaro_mass_is_running_average(self):
        E = MeasurableSet.interval(0.0, 1.0)
        m = 4
        want = sum(nstep_mass(mc3(), 0.4, E, k) for k in range(1, m + 1)) / m
        assert math.isclose(cesaro_mass(mc3(), 0.4, E, m), want, rel_tol=1e-14)


class TestDuality:
    def test_against_plain_arithmetic(self):
        rng = random.Random(7)
        f = lambda p: p.value * p.value - 0.5 * p.value
        plain_f = lambda x: x * x - 0.5 * x
        for kernel in ALL_CHAINS:
            pi = plain_pi_for(kernel)
            for _ in range(50):
                x = rng.uniform(1e-6, 1.0 - 1e-6)
                want = dual_action(pi, plain_f, x)
                assert math.isclose(apply_dual(kernel, f, x), want, rel_tol=1e-12)

    def test_adjoint_identity(self):
        # <A mu, f> = <mu, T f> for a measure with several atoms
        f = lambda p: abs(p.value - 0.25)
        mu = convex_combine(
            [(0.25, dirac(0.0)), (0.25, dirac(0.2)), (0.25, dirac(0.7)), (0.25, dirac(1.0))]
        )
        for kernel in ALL_CHAINS:
            lhs = integrate(f, apply_markov(kernel, mu))
            rhs = integrate(lambda p: apply_dual(kernel, f, p), mu)
            assert math.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-15)
