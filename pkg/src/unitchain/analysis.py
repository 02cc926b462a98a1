"""Convergence diagnostics for two-jump chains on the unit interval.

Strong-sense (total variation) profiles and uniformity sweeps over initial
states, weak-sense gaps against a pinned family of continuous test functions,
trajectory sets of the squaring map, stochastic closedness, invariance
residuals, absorption flux, and Feller-defect detection at a point.

Sup-type quantities over all initial states are approximated on explicit
grids with geometric refinement toward the endpoints; reports state the grid
and never claim the true supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .logprob import LOG_ZERO
from .kernel import TransitionKernel, apply_dual, iterate, kernel_measure
from .measure import (
    ZERO,
    ONE,
    AtomicMeasure,
    MeasurableSet,
    Point,
    TestFunction,
    dirac,
    integrate,
    mass,
    measure_to_dict,
    tv_distance,
    tv_distance_log10,
)

CSV_COLUMNS = ("chain", "x0", "n", "tv", "log10_tv", "weak_gap")

GAMMA_LOG_INCREMENT_TOL = 1e-16


@lru_cache(maxsize=1)
def default_test_family() -> tuple[TestFunction, ...]:
    """The pinned continuous test family: 1, x, x^2, 1-x, |x-1/2|, min(1,4x(1-x)).

    Fixed so weak-sense gap values are reproducible across runs and versions.
    """
    return (
        TestFunction(lambda p: 1.0, "1"),
        TestFunction(lambda p: p.value, "x"),
        TestFunction(lambda p: p.value * p.value, "x^2"),
        TestFunction(lambda p: 1.0 - p.value, "1 - x"),
        TestFunction(lambda p: abs(p.value - 0.5), "|x - 1/2|"),
        TestFunction(lambda p: min(1.0, 4.0 * p.value * (1.0 - p.value)), "min(1, 4x(1-x))"),
    )


# ---------------------------------------------------------------------------
# convergence profiles


@dataclass(frozen=True)
class ProfileRow:
    n: int
    tv: float
    log10_tv: float
    weak_gap: float


@dataclass(frozen=True)
class ConvergenceProfile:
    """Distance-to-target table for one chain and one initial point.

    Rows are indexed by consecutive n starting at 0; `tv` is the linear
    total variation distance (saturates to 0.0 below ~1e-308) and
    `log10_tv` stays meaningful arbitrarily deep.
    """

    chain: str
    x0: Point
    target: AtomicMeasure
    rows: tuple[ProfileRow, ...]

    def row(self, n: int) -> ProfileRow:
        r = self.rows[n]
        if r.n != n:
            raise IndexError(f"rows not consecutive at {n}")
        return r


def weak_gap_between(
    mu: AtomicMeasure, target: AtomicMeasure, tests: Sequence[TestFunction]
) -> float:
    if not tests:
        raise ValueError("empty test family")
    return max(abs(integrate(f, mu) - integrate(f, target)) for f in tests)


def convergence_profile(
    kernel: TransitionKernel,
    x0: "Point | float",
    target: AtomicMeasure,
    n_max: int,
    tests: Sequence[TestFunction] | None = None,
) -> ConvergenceProfile:
    """Iterate dirac(x0) n_max steps and tabulate tv and weak gaps vs target."""
    target.require_probability("target")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    fam = tuple(tests) if tests is not None else default_test_family()
    start = Point.of(x0)
    mus = iterate(kernel, dirac(start), n_max)
    rows = []
    for n, mu in enumerate(mus):
        rows.append(
            ProfileRow(
                n=n,
                tv=min(tv_distance(mu, target), 1.0),
                log10_tv=tv_distance_log10(mu, target),
                weak_gap=weak_gap_between(mu, target, fam),
            )
        )
    return ConvergenceProfile(chain=kernel.label, x0=start, target=target, rows=tuple(rows))


def uniformity_sup(
    kernel: TransitionKernel,
    x0_grid: Sequence["Point | float"],
    target: AtomicMeasure,
    n: int,
) -> float:
    """max over the grid of tv(mu_n^(x0), target); grid must lie inside (0,1)."""
    if not x0_grid:
        raise ValueError("empty x0 grid")
    pts = [Point.of(x) for x in x0_grid]
    for p in pts:
        if p.is_zero or p.is_one:
            raise ValueError(f"grid point {p.value!r} not inside (0,1)")
    target.require_probability("target")
    return max(tv_distance(iterate(kernel, dirac(p), n)[-1], target) for p in pts)


def weak_star_gap(
    kernel: TransitionKernel,
    x0: "Point | float",
    n: int,
    tests: Sequence[TestFunction],
    target: AtomicMeasure,
) -> float:
    """max over tests of |<f, mu_n> - <f, target>| starting from dirac(x0)."""
    target.require_probability("target")
    mu = iterate(kernel, dirac(Point.of(x0)), n)[-1]
    return weak_gap_between(mu, target, tests)


def weak_star_gap_dual(
    kernel: TransitionKernel,
    x0: "Point | float",
    n: int,
    tests: Sequence[TestFunction],
    target: AtomicMeasure,
) -> float:
    """Same gap computed through the dual operator: <f, mu_n> = (T^n f)(x0).

    Exponential in n (each dual application doubles the evaluation tree), so
    desk-scale n only; exists as a cross-check of the pushforward route.
    """
    if not tests:
        raise ValueError("empty test family")
    target.require_probability("target")
    start = Point.of(x0)

    def iterated(f) -> Callable[[Point], float]:
        g = f
        for _ in range(n):
            g = (lambda h: (lambda p: apply_dual(kernel, h, p)))(g)
        return g

    return max(
        abs(iterated(f)(start) - integrate(f, target)) for f in tests
    )


# ---------------------------------------------------------------------------
# trajectory sets of the squaring map


@dataclass(frozen=True)
class TrajectorySet:
    """Orbit {x0, x0^2, x0^4, ...} of the squaring map, exact in log domain.

    `points[k]` has log value 2^k * log(x0) bit-exactly; the sequence is
    strictly decreasing inside (0,1).
    """

    seed: Point
    depth: int
    points: tuple[Point, ...]
    include_absorbers: bool = False

    def as_measurable_set(self) -> MeasurableSet:
        s = MeasurableSet.point_set(self.points)
        if self.include_absorbers:
            s = s.union(MeasurableSet.point_set([ZERO, ONE]))
        return s

    def __len__(self) -> int:
        return len(self.points)


def trajectory_set(
    x0: "Point | float", depth: int, include_absorbers: bool = False
) -> TrajectorySet:
    seed = Point.of(x0)
    if seed.is_zero or seed.is_one:
        raise ValueError("seed must lie inside (0,1)")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    pts = [seed]
    for _ in range(depth):
        pts.append(pts[-1].squared())
    return TrajectorySet(seed=seed, depth=depth, points=tuple(pts), include_absorbers=include_absorbers)


def trajectory_min_log_separation(a: TrajectorySet, b: TrajectorySet) -> float:
    """min over pairs of |log x_i - log y_j|: separation evidence for disjointness.

    Incommensurability cannot be proven in floating point; a strictly positive
    separation at the compared depths is reported as evidence only.
    """
    return min(abs(p.log_value - q.log_value) for p in a.points for q in b.points)


# ---------------------------------------------------------------------------
# closedness, invariance, absorption


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    max_leak: float
    worst_probe: Point | None

    def __bool__(self) -> bool:
        return self.closed


def is_stochastically_closed(
    kernel: TransitionKernel, S: MeasurableSet, probes: Sequence["Point | float"]
) -> ClosureReport:
    """Check p(x, S) = 1 (within 1e-12) at every probe; probes must lie in S."""
    if not probes:
        raise ValueError("no probes given")
    max_leak = 0.0
    worst: Point | None = None
    for raw in probes:
        x = Point.of(raw)
        if not S.contains(x):
            raise ValueError(f"probe {x.value!r} lies outside the set")
        leak = 1.0 - mass(kernel_measure(kernel, x), S)
        if leak > max_leak:
            max_leak, worst = leak, x
    return ClosureReport(closed=max_leak <= 1e-12, max_leak=max_leak, worst_probe=worst)


def invariance_residual(kernel: TransitionKernel, mu: AtomicMeasure) -> float:
    """tv(A mu, mu); zero iff mu is invariant among atomic measures."""
    mu.require_probability("measure")
    from .kernel import apply_markov

    return tv_distance(apply_markov(kernel, mu), mu)


def absorption_functional(kernel: TransitionKernel, mu: AtomicMeasure) -> float:
    """One-step probability flux from (0,1) into {0}: sum of p(x,{0}) mu({x})."""
    mu.require_probability("measure")
    zero_site = MeasurableSet.singleton(ZERO)
    return math.fsum(
        mass(kernel_measure(kernel, a.point), zero_site) * a.mass
        for a in mu.atoms
        if not (a.point.is_zero or a.point.is_one)
    )


def feller_defect(
    kernel: TransitionKernel,
    f: "TestFunction | Callable[[Point], float]",
    x_star: "Point | float",
    approach: Sequence["Point | float"],
) -> float:
    """|Tf(x*) - Tf(x_last)| along a monotone approach to x*.

    The approach sequence must move strictly toward x* without reaching it;
    the last value stands in for the one-sided limit (the discontinuities of
    these chains are jumps, so no extrapolation machinery is needed).
    """
    if not approach:
        raise ValueError("empty approach sequence")
    target = Point.of(x_star)
    pts = [Point.of(x) for x in approach]
    if any(p == target for p in pts):
        raise ValueError("approach sequence must not contain the limit point")
    below = pts[0] < target
    for prev, cur in zip(pts, pts[1:]):
        stepping_in = prev < cur < target if below else target < cur < prev
        if not stepping_in:
            raise ValueError("approach sequence must move monotonically toward the limit point")
    return abs(apply_dual(kernel, f, target) - apply_dual(kernel, f, pts[-1]))


def dirac_fixed_points(
    kernel: TransitionKernel, grid: Sequence["Point | float"]
) -> list[Point]:
    """Grid points x with p(x,{x}) = 1, i.e. dirac(x) invariant; grid must hold 0 and 1."""
    pts = [Point.of(x) for x in grid]
    if ZERO not in pts or ONE not in pts:
        raise ValueError("grid must include both endpoints 0 and 1")
    out = []
    for x in sorted(set(pts)):
        if mass(kernel_measure(kernel, x), MeasurableSet.singleton(x)) >= 1.0 - 1e-12:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# the limiting moving mass of product-type chains


def gamma_limit(x0: "Point | float", max_terms: int = 400) -> float:
    """Limit of prod_{k>=0} (1 - x0^(2^k)) for x0 in (0,1).

    Partial products accumulate in log domain; iteration stops once the log
    increment falls below 1e-16, which every representable x0 reaches well
    inside the term cap.
    """
    seed = Point.of(x0)
    if seed.is_zero:
        return 1.0
    if seed.is_one:
        raise ValueError("gamma limit undefined at x0 = 1")
    lk = seed.log_value
    total = 0.0
    for _ in range(max_terms):
        xk = math.exp(lk)
        if xk >= 1.0:
            raise ValueError(f"x0 too close to 1 to resolve: {seed.value!r}")
        term = math.log1p(-xk)
        total += term
        if abs(term) < GAMMA_LOG_INCREMENT_TOL:
            return math.exp(total)
        lk = 2.0 * lk
    raise ValueError("log increments did not fall below tolerance")


# ---------------------------------------------------------------------------
# tabular emission (the CSV/JSON column contract lives here)


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def csv_table(entries: Sequence[dict]) -> str:
    """Render dict rows to CSV text under the fixed column contract."""
    lines = [",".join(CSV_COLUMNS)]
    for e in entries:
        lines.append(",".join(_csv_cell(e[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def profile_entries(profile: ConvergenceProfile) -> list[dict]:
    return [
        {
            "chain": profile.chain,
            "x0": profile.x0.value,
            "n": r.n,
            "tv": r.tv,
            "log10_tv": r.log10_tv,
            "weak_gap": r.weak_gap,
        }
        for r in profile.rows
    ]


def profile_to_csv(profile: ConvergenceProfile) -> str:
    return csv_table(profile_entries(profile))


def json_safe(v):
    # JSON has no -Infinity literal; mirror the measure serializer's spelling
    if isinstance(v, float) and v == LOG_ZERO:
        return "-inf"
    return v


def profile_to_dict(profile: ConvergenceProfile) -> dict:
    return {
        "chain": profile.chain,
        "x0": profile.x0.value,
        "target": measure_to_dict(profile.target),
        "rows": [
            {
                "n": r.n,
                "tv": r.tv,
                "log10_tv": json_safe(r.log10_tv),
                "weak_gap": r.weak_gap,
            }
            for r in profile.rows
        ],
    }
