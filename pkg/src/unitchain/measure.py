"""Atomic measures on [0,1] with log-domain state coordinates.

States are stored as log(x) so that repeated squaring (x -> x^2, the jump
skeleton of every chain in this package) stays exact far past the point where
linear doubles underflow.  Masses are likewise kept in log domain with a
linear mirror that saturates at 0.

Total variation here is the supremum form sup_E |mu(E) - nu(E)|, which for
probability measures equals the sum of positive parts of the merged atom
differences.  It is half of the full variation norm; distances reported by
this module max out at 1, not 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

from .logprob import LOG_ZERO, linear_from_log, log_add, log_from_linear, log_sub, log_sum

# Atoms closer than this in log(x) are treated as the same site when a
# measure is canonicalized. 0 and 1 are exact sentinels and never absorb
# neighbours.
ATOM_MERGE_TOL = 1e-12
PROBABILITY_TOL = 1e-12


class AuditError(ValueError):
    """A registration-time check failed (kernel rows, function bounds)."""


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True, order=True)
class Point:
    """A state in [0,1], stored as log(x). 0 is log -inf, 1 is log 0.0."""

    log_value: float

    def __post_init__(self):
        lv = self.log_value
        if math.isnan(lv) or lv > 0.0:
            raise ValueError(f"log_value must lie in [-inf, 0], got {lv}")
        if lv == 0.0:
            object.__setattr__(self, "log_value", 0.0)  # normalize -0.0

    @classmethod
    def from_linear(cls, x: float) -> "Point":
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"point outside [0,1]: {x}")
        return cls(LOG_ZERO if x == 0.0 else math.log(x))

    @classmethod
    def from_log(cls, lv: float) -> "Point":
        return cls(lv)

    @classmethod
    def of(cls, x: "Point | float | int") -> "Point":
        return x if isinstance(x, Point) else cls.from_linear(float(x))

    @property
    def value(self) -> float:
        """Linear mirror; 0.0 once log(x) is below the double floor."""
        return linear_from_log(self.log_value)

    @property
    def log10_value(self) -> float:
        return self.log_value / math.log(10) if self.log_value != LOG_ZERO else LOG_ZERO

    @property
    def is_zero(self) -> bool:
        return self.log_value == LOG_ZERO

    @property
    def is_one(self) -> bool:
        return self.log_value == 0.0

    def squared(self) -> "Point":
        # doubling the log is the one exact float operation we lean on
        return Point(2.0 * self.log_value)

    def __repr__(self) -> str:
        if self.log_value < -700.0 and not self.is_zero:
            return f"Point(log={self.log_value!r})"
        return f"Point({self.value!r})"


ZERO = Point(LOG_ZERO)
ONE = Point(0.0)


def _same_atom_site(p: Point, q: Point) -> bool:
    if p.log_value == q.log_value:
        return True
    if p.is_zero or q.is_zero or p.is_one or q.is_one:
        return False
    return abs(p.log_value - q.log_value) <= ATOM_MERGE_TOL


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True, order=True)
class Atom:
    point: Point
    log_mass: float

    @property
    def mass(self) -> float:
        return linear_from_log(self.log_mass)


def _canonical_atoms(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    live = sorted(a for a in atoms if a.log_mass != LOG_ZERO)
    merged: list[Atom] = []
    for atom in live:
        if math.isnan(atom.log_mass):
            raise ValueError("NaN mass")
        if merged and _same_atom_site(merged[-1].point, atom.point):
            prev = merged.pop()
            site = prev.point if prev.log_mass >= atom.log_mass else atom.point
            merged.append(Atom(site, log_add(prev.log_mass, atom.log_mass)))
        else:
            merged.append(atom)
    return tuple(merged)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite nonnegative atomic measure; atoms are kept sorted and merged."""

    atoms: tuple[Atom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", _canonical_atoms(self.atoms))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple["Point | float", float]]) -> "AtomicMeasure":
        """Build from (point, linear mass) pairs."""
        return cls(tuple(Atom(Point.of(p), log_from_linear(m)) for p, m in pairs))

    @property
    def total_log_mass(self) -> float:
        return log_sum(a.log_mass for a in self.atoms)

    @property
    def total_mass(self) -> float:
        return math.fsum(a.mass for a in self.atoms)

    @property
    def is_probability(self) -> bool:
        return abs(self.total_log_mass) <= PROBABILITY_TOL

    def require_probability(self, what: str = "measure") -> None:
        if not self.is_probability:
            raise ValueError(f"{what} is not a probability measure (total={self.total_mass!r})")

    def support_points(self) -> tuple[Point, ...]:
        return tuple(a.point for a in self.atoms)

    def scaled(self, log_weight: float) -> "AtomicMeasure":
        if log_weight == LOG_ZERO:
            return AtomicMeasure()
        return AtomicMeasure(tuple(Atom(a.point, a.log_mass + log_weight) for a in self.atoms))

    def __len__(self) -> int:
        return len(self.atoms)


def dirac(x: "Point | float") -> AtomicMeasure:
    """Unit mass at x."""
    return AtomicMeasure((Atom(Point.of(x), 0.0),))


# ---------------------------------------------------------------------------
# measurable sets: finite unions of intervals and points, canonical form


@dataclass(frozen=True, order=True)
class Interval:
    lo: Point
    hi: Point
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self}")

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, p: Point) -> bool:
        if p < self.lo or p > self.hi:
            return False
        if p == self.lo and not self.lo_closed:
            return False
        if p == self.hi and not self.hi_closed:
            return False
        return True

    def covers(self, other: "Interval") -> bool:
        lo_ok = self.lo < other.lo or (self.lo == other.lo and (self.lo_closed or not other.lo_closed))
        hi_ok = self.hi > other.hi or (self.hi == other.hi and (self.hi_closed or not other.hi_closed))
        return lo_ok and hi_ok

    def overlaps(self, other: "Interval") -> bool:
        # intersection endpoints, keeping the more restrictive closedness
        if self.lo > other.lo or (self.lo == other.lo and not self.lo_closed):
            L, Lc = self.lo, self.lo_closed
        else:
            L, Lc = other.lo, other.lo_closed
        if self.hi < other.hi or (self.hi == other.hi and not self.hi_closed):
            H, Hc = self.hi, self.hi_closed
        else:
            H, Hc = other.hi, other.hi_closed
        if L < H:
            return True
        return L == H and Lc and Hc


def _try_merge(a: Interval, b: Interval) -> Interval | None:
    """Merge two intervals with a.lo <= b.lo into one, if their union is an interval."""
    touches = b.lo < a.hi or (b.lo == a.hi and (a.hi_closed or b.lo_closed))
    if not touches:
        return None
    if a.lo == b.lo:
        lo, lo_c = a.lo, a.lo_closed or b.lo_closed
    else:
        lo, lo_c = a.lo, a.lo_closed
    if a.hi == b.hi:
        hi, hi_c = a.hi, a.hi_closed or b.hi_closed
    elif a.hi > b.hi:
        hi, hi_c = a.hi, a.hi_closed
    else:
        hi, hi_c = b.hi, b.hi_closed
    return Interval(lo, hi, lo_c, hi_c)


def _canonical_set(
    intervals: Iterable[Interval], points: Iterable[Point]
) -> tuple[tuple[Interval, ...], tuple[Point, ...]]:
    ivs: list[Interval] = []
    pts = set(points)
    for iv in intervals:
        if iv.is_degenerate:
            if iv.lo_closed and iv.hi_closed:
                pts.add(iv.lo)
            continue  # half-open degenerate interval is empty
        ivs.append(iv)

    changed = True
    while changed:
        changed = False
        ivs.sort()
        out: list[Interval] = []
        for iv in ivs:
            if out:
                m = _try_merge(out[-1], iv)
                if m is not None:
                    if m != out[-1]:
                        changed = True
                    out[-1] = m
                    continue
            out.append(iv)
        ivs = out
        keep = set()
        for p in pts:
            absorbed = False
            for k, iv in enumerate(ivs):
                if iv.contains(p):
                    absorbed = True
                    break
                if p == iv.lo and not iv.lo_closed:
                    ivs[k] = replace(iv, lo_closed=True)
                    absorbed = True
                    break
                if p == iv.hi and not iv.hi_closed:
                    ivs[k] = replace(iv, hi_closed=True)
                    absorbed = True
                    break
            if absorbed:
                changed = True
            else:
                keep.add(p)
        pts = keep
    return tuple(sorted(ivs)), tuple(sorted(pts))


@dataclass(frozen=True)
class MeasurableSet:
    """Finite union of intervals and isolated points in [0,1], canonicalized.

    Canonical form: intervals pairwise separated (overlaps and touching ends
    merged, bridging points absorbed), degenerate intervals promoted to
    points, points disjoint from intervals.  Membership tests are exact
    comparisons on log coordinates.
    """

    intervals: tuple[Interval, ...] = ()
    points: tuple[Point, ...] = ()

    def __post_init__(self):
        ivs, pts = _canonical_set(self.intervals, self.points)
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "points", pts)

    # -- constructors ------------------------------------------------------

    @classmethod
    def interval(
        cls,
        lo: "Point | float",
        hi: "Point | float",
        lo_closed: bool = False,
        hi_closed: bool = False,
    ) -> "MeasurableSet":
        return cls(intervals=(Interval(Point.of(lo), Point.of(hi), lo_closed, hi_closed),))

    @classmethod
    def closed_interval(cls, lo, hi) -> "MeasurableSet":
        return cls.interval(lo, hi, True, True)

    @classmethod
    def point_set(cls, xs: Iterable["Point | float"]) -> "MeasurableSet":
        return cls(points=tuple(Point.of(x) for x in xs))

    @classmethod
    def singleton(cls, x: "Point | float") -> "MeasurableSet":
        return cls.point_set((x,))

    @classmethod
    def empty(cls) -> "MeasurableSet":
        return cls()

    # -- queries -----------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.intervals and not self.points

    def contains(self, x: "Point | float") -> bool:
        p = Point.of(x)
        if p in self.points:
            return True
        return any(iv.contains(p) for iv in self.intervals)

    __contains__ = contains

    def union(self, other: "MeasurableSet") -> "MeasurableSet":
        return MeasurableSet(self.intervals + other.intervals, self.points + other.points)

    def is_subset_of(self, other: "MeasurableSet") -> bool:
        for p in self.points:
            if not other.contains(p):
                return False
        # a connected interval fits inside exactly one canonical component
        for iv in self.intervals:
            if not any(jv.covers(iv) for jv in other.intervals):
                return False
        return True

    def is_disjoint_from(self, other: "MeasurableSet") -> bool:
        if any(other.contains(p) for p in self.points):
            return False
        if any(self.contains(p) for p in other.points):
            return False
        for a in self.intervals:
            for b in other.intervals:
                if a.overlaps(b):
                    return False
        return True


def open_unit_interval() -> MeasurableSet:
    return MeasurableSet.interval(ZERO, ONE)


def full_interval() -> MeasurableSet:
    return MeasurableSet.interval(ZERO, ONE, True, True)


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFunction:
    """Bounded function on [0,1] used for weak-sense diagnostics.

    The declared bound is audited on a uniform grid at construction time so
    misdeclared functions fail at registration, not mid-run.
    """

    __test__ = False  # not a test class, despite the name

    evaluator: Callable[[Point], float]
    label: str
    bound: float = 1.0
    audit_grid_size: int = 10_000

    def __post_init__(self):
        if self.bound <= 0 or not math.isfinite(self.bound):
            raise ValueError(f"bound must be positive and finite: {self.bound}")
        n = self.audit_grid_size
        for i in range(n + 1):
            p = Point.from_linear(i / n)
            v = self.evaluator(p)
            if math.isnan(v) or abs(v) > self.bound:
                raise AuditError(
                    f"test function {self.label!r} violates |f| <= {self.bound} at x={p.value!r}: f={v!r}"
                )

    def __call__(self, x: "Point | float") -> float:
        return self.evaluator(Point.of(x))


# ---------------------------------------------------------------------------
# operations


def mass(mu: AtomicMeasure, E: MeasurableSet) -> float:
    """mu(E): sum of linear masses of the atoms lying in E."""
    return math.fsum(a.mass for a in mu.atoms if E.contains(a.point))


def mass_log(mu: AtomicMeasure, E: MeasurableSet) -> float:
    """log mu(E); LOG_ZERO when no atom of mu lies in E."""
    return log_sum(a.log_mass for a in mu.atoms if E.contains(a.point))


def _tv_signed_logs(mu: AtomicMeasure, nu: AtomicMeasure) -> tuple[float, float]:
    """Log-domain sums of the positive and negative parts of mu - nu."""
    pos = neg = LOG_ZERO
    A, B = mu.atoms, nu.atoms
    i = j = 0
    while i < len(A) or j < len(B):
        if j >= len(B) or (i < len(A) and A[i].point < B[j].point):
            pos = log_add(pos, A[i].log_mass)
            i += 1
        elif i >= len(A) or B[j].point < A[i].point:
            neg = log_add(neg, B[j].log_mass)
            j += 1
        else:
            la, lb = A[i].log_mass, B[j].log_mass
            if la > lb:
                pos = log_add(pos, log_sub(la, lb))
            elif lb > la:
                neg = log_add(neg, log_sub(lb, la))
            i += 1
            j += 1
    return pos, neg


def tv_distance_log(mu: AtomicMeasure, nu: AtomicMeasure) -> float:
    """Natural log of the sup-form total variation distance; LOG_ZERO if equal.

    Computed as the positive part of mu - nu, which for probability measures
    equals the negative part.  The positive side is used because it stays
    exact in log domain when mu carries a tiny moving atom against a point
    target; the complementary side would be a difference of masses near 1,
    where log resolution is only ~1e-16.
    """
    mu.require_probability("left argument")
    nu.require_probability("right argument")
    pos, _neg = _tv_signed_logs(mu, nu)
    return pos


def tv_distance_log10(mu: AtomicMeasure, nu: AtomicMeasure) -> float:
    lv = tv_distance_log(mu, nu)
    return lv / math.log(10) if lv != LOG_ZERO else LOG_ZERO


def tv_distance(mu: AtomicMeasure, nu: AtomicMeasure) -> float:
    """sup_E |mu(E) - nu(E)| for probability measures; 0 iff identical atoms."""
    return linear_from_log(tv_distance_log(mu, nu))


def convex_combine(terms: Sequence[tuple[float, AtomicMeasure]]) -> AtomicMeasure:
    """Mix probability measures with nonnegative weights summing to 1."""
    if not terms:
        raise ValueError("empty combination")
    weights = [w for w, _ in terms]
    if any(w < 0 for w in weights):
        raise ValueError(f"negative weight in {weights}")
    if abs(math.fsum(weights) - 1.0) > PROBABILITY_TOL:
        raise ValueError(f"weights must sum to 1, got {math.fsum(weights)!r}")
    atoms: list[Atom] = []
    for w, m in terms:
        m.require_probability("component")
        if w == 0.0:
            continue
        lw = log_from_linear(w)
        atoms.extend(Atom(a.point, a.log_mass + lw) for a in m.atoms)
    return AtomicMeasure(tuple(atoms))


def integrate(f: "TestFunction | Callable[[Point], float]", mu: AtomicMeasure) -> float:
    """<f, mu> = sum f(x) * mu({x}) over atoms, in linear domain."""
    ev = f.evaluator if isinstance(f, TestFunction) else f
    return math.fsum(ev(a.point) * a.mass for a in mu.atoms)


def is_singular(mu: AtomicMeasure, nu: AtomicMeasure) -> bool:
    """True iff the supports are disjoint (exact site comparison)."""
    mu.require_probability("left argument")
    nu.require_probability("right argument")
    sites = {a.point.log_value for a in mu.atoms}
    return not any(b.point.log_value in sites for b in nu.atoms)


# ---------------------------------------------------------------------------
# serialization


def _log_x_out(p: Point) -> float | str:
    return "-inf" if p.is_zero else p.log_value


def measure_to_dict(mu: AtomicMeasure) -> dict:
    return {
        "atoms": [
            {"log_x": _log_x_out(a.point), "mass": a.mass, "log_mass": a.log_mass}
            for a in mu.atoms
        ]
    }


def measure_from_dict(data: dict) -> AtomicMeasure:
    atoms = []
    for rec in data["atoms"]:
        raw = rec["log_x"]
        lv = LOG_ZERO if raw == "-inf" else float(raw)
        atoms.append(Atom(Point.from_log(lv), float(rec["log_mass"])))
    return AtomicMeasure(tuple(atoms))


def set_to_dict(E: MeasurableSet) -> dict:
    return {
        "intervals": [
            [iv.lo.value, iv.hi.value, iv.lo_closed, iv.hi_closed] for iv in E.intervals
        ],
        "points": [p.value for p in E.points],
    }


def set_from_dict(data: dict) -> MeasurableSet:
    ivs = tuple(
        Interval(Point.from_linear(lo), Point.from_linear(hi), bool(lc), bool(hc))
        for lo, hi, lc, hc in data.get("intervals", ())
    )
    pts = tuple(Point.from_linear(x) for x in data.get("points", ()))
    return MeasurableSet(ivs, pts)
