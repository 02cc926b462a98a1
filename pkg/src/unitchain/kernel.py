"""Transition kernels on [0,1] and the two-jump chain family.

A two-jump chain moves from x in (0,1) to x^2 with probability pi(x) and to
the absorbing state 0 with probability 1 - pi(x); the states 0 and 1 are
always absorbing.  The five builtin chains differ only in pi:

    mc1: pi(x) = x
    mc2: pi(x) = 1 - x
    mc3: pi(x) = x on [0, 1/2], 1 - x on (1/2, 1]
    mc4: pi(x) = 1 - x on [0, 1/2], x on (1/2, 1]
    mc5: pi(x) = p (constant)

Builtins are constructed through the same piecewise-expression machinery as
user-supplied chains, so a custom chain with the identical expressions
reproduces a builtin bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .expressions import PiExpression, PiRangeError, parse_expression
from .grids import audit_grid
from .logprob import LOG_ZERO, log_sub
from .measure import (
    Atom,
    AtomicMeasure,
    AuditError,
    Interval,
    MeasurableSet,
    ONE,
    Point,
    ZERO,
    dirac,
    integrate,
    mass,
    open_unit_interval,
)

KERNEL_AUDIT_GRID = 1_000
PI_AUDIT_GRID = 10_000


@dataclass(frozen=True, eq=False)
class TransitionKernel:
    """A Markov transition rule x -> p(x, .), rows audited at registration."""

    transition: Callable[[Point], AtomicMeasure]
    label: str
    spec: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        for p in audit_grid(KERNEL_AUDIT_GRID):
            row = self.transition(p)
            if not row.is_probability:
                raise AuditError(
                    f"kernel {self.label!r} row at x={p.value!r} has mass {row.total_mass!r}"
                )

    def __repr__(self) -> str:
        return f"TransitionKernel({self.label!r})"


# ---------------------------------------------------------------------------
# two-jump chains


@dataclass(frozen=True)
class JumpRule:
    """pi on one sub-interval of the state space."""

    region: Interval
    pi: PiExpression


def _almost_prob(v: float) -> bool:
    return -1e-12 <= v <= 1.0 + 1e-12


def _two_jump_row(x: Point, expr: PiExpression) -> AtomicMeasure:
    llog = expr.log_eval(x)
    if llog is None:
        v = expr.evaluate(x)
        if not _almost_prob(v):
            raise AuditError(f"pi={v!r} outside [0,1] at x={x.value!r}")
        llog = LOG_ZERO if v <= 0.0 else math.log(min(v, 1.0))
    elif llog > 0.0:
        raise AuditError(f"pi above 1 at x={x.value!r} (log pi = {llog!r})")
    atoms = []
    if llog != LOG_ZERO:
        atoms.append(Atom(x.squared(), llog))
    stay_log = log_sub(0.0, llog) if llog != 0.0 else LOG_ZERO
    if stay_log != LOG_ZERO:
        atoms.append(Atom(ZERO, stay_log))
    return AtomicMeasure(tuple(atoms))


def _validate_pieces(rules: Sequence[JumpRule]) -> None:
    regions = [MeasurableSet(intervals=(r.region,)) for r in rules]
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if not regions[i].is_disjoint_from(regions[j]):
                raise ValueError(
                    f"overlapping pi pieces: {rules[i].region} and {rules[j].region}"
                )
    union = MeasurableSet.empty()
    for r in regions:
        union = union.union(r)
    if not open_unit_interval().is_subset_of(union):
        raise ValueError("pi pieces must cover (0,1)")


def piecewise_two_jump_chain(
    pieces: Sequence[tuple[Interval, "PiExpression | str"]],
    label: str,
    spec: dict | None = None,
) -> TransitionKernel:
    """Two-jump chain with pi given piecewise; pieces must cover (0,1).

    Each piece is range-audited on its own region only, so an expression may
    leave [0,1] outside the region it governs.
    """
    rules = tuple(
        JumpRule(
            region,
            pi if isinstance(pi, PiExpression) else PiExpression(parse_expression(pi), pi),
        )
        for region, pi in pieces
    )
    if not rules:
        raise ValueError("no pi pieces given")
    _validate_pieces(rules)

    def transition(x: Point) -> AtomicMeasure:
        if x.is_zero or x.is_one:
            return dirac(x)
        for rule in rules:
            if rule.region.contains(x):
                return _two_jump_row(x, rule.pi)
        raise ValueError(f"no pi piece contains x={x.value!r}")

    # range audit over a fine grid; interior points only, absorbers are fixed
    n = PI_AUDIT_GRID
    for i in range(1, n):
        p = Point.from_linear(i / n)
        for rule in rules:
            if rule.region.contains(p):
                v = rule.pi.evaluate(p)
                if math.isnan(v) or not _almost_prob(v):
                    raise PiRangeError(f"pi value {v!r} outside [0,1]", p.value)
                break

    return TransitionKernel(transition, label, spec)


def two_jump_chain(
    pi: "PiExpression | str", label: str, spec: dict | None = None
) -> TransitionKernel:
    """Two-jump chain with a single pi expression on all of [0,1]."""
    whole = Interval(ZERO, ONE, True, True)
    return piecewise_two_jump_chain([(whole, pi)], label, spec)


def callable_two_jump_chain(pi: Callable[[Point], float], label: str) -> TransitionKernel:
    """Two-jump chain from a plain Python callable (not serializable)."""

    def transition(x: Point) -> AtomicMeasure:
        if x.is_zero or x.is_one:
            return dirac(x)
        v = pi(x)
        if math.isnan(v) or not _almost_prob(v):
            raise AuditError(f"pi={v!r} outside [0,1] at x={x.value!r}")
        llog = LOG_ZERO if v <= 0.0 else math.log(min(v, 1.0))
        atoms = []
        if llog != LOG_ZERO:
            atoms.append(Atom(x.squared(), llog))
        stay = log_sub(0.0, llog) if llog != 0.0 else LOG_ZERO
        if stay != LOG_ZERO:
            atoms.append(Atom(ZERO, stay))
        return AtomicMeasure(tuple(atoms))

    return TransitionKernel(transition, label)


# ---------------------------------------------------------------------------
# builtins

_HALF = Point.from_linear(0.5)


@lru_cache(maxsize=None)
def mc1() -> TransitionKernel:
    return two_jump_chain("x", "mc1", spec={"chain": "mc1"})


@lru_cache(maxsize=None)
def mc2() -> TransitionKernel:
    return two_jump_chain("1 - x", "mc2", spec={"chain": "mc2"})


@lru_cache(maxsize=None)
def mc3() -> TransitionKernel:
    # the left piece owns the boundary at 1/2; both rules give pi(1/2) = 1/2
    return piecewise_two_jump_chain(
        [
            (Interval(ZERO, _HALF, True, True), "x"),
            (Interval(_HALF, ONE, False, True), "1 - x"),
        ],
        "mc3",
        spec={"chain": "mc3"},
    )


@lru_cache(maxsize=None)
def mc4() -> TransitionKernel:
    return piecewise_two_jump_chain(
        [
            (Interval(ZERO, _HALF, True, True), "1 - x"),
            (Interval(_HALF, ONE, False, True), "x"),
        ],
        "mc4",
        spec={"chain": "mc4"},
    )


@lru_cache(maxsize=None)
def mc5(p: float) -> TransitionKernel:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mc5 jump probability outside [0,1]: {p}")
    text = repr(float(p))
    return two_jump_chain(text, "mc5", spec={"chain": "mc5", "p": float(p)})


BUILTIN_NAMES = ("mc1", "mc2", "mc3", "mc4", "mc5")


def builtin_chain(name: str, p: float | None = None) -> TransitionKernel:
    if name == "mc1":
        return mc1()
    if name == "mc2":
        return mc2()
    if name == "mc3":
        return mc3()
    if name == "mc4":
        return mc4()
    if name == "mc5":
        if p is None:
            raise ValueError("mc5 needs the jump probability p")
        return mc5(p)
    raise ValueError(f"unknown chain {name!r} (builtins: {', '.join(BUILTIN_NAMES)})")


# ---------------------------------------------------------------------------
# kernel spec files


def kernel_from_spec(spec: dict) -> TransitionKernel:
    """Build a kernel from its JSON description.

    {"chain": "mc1".."mc4"}, {"chain": "mc5", "p": number}, or
    {"chain": "custom", "pieces": [{"from", "to", "from_closed",
    "to_closed", "pi"}, ...]} with pi following the expression grammar.
    """
    name = spec.get("chain")
    if name in ("mc1", "mc2", "mc3", "mc4"):
        return builtin_chain(name)
    if name == "mc5":
        if "p" not in spec:
            raise ValueError("mc5 spec needs \"p\"")
        return mc5(float(spec["p"]))
    if name == "custom":
        pieces = []
        for rec in spec.get("pieces", ()):
            region = Interval(
                Point.from_linear(float(rec["from"])),
                Point.from_linear(float(rec["to"])),
                bool(rec.get("from_closed", False)),
                bool(rec.get("to_closed", False)),
            )
            pieces.append((region, str(rec["pi"])))
        if not pieces:
            raise ValueError("custom spec needs a nonempty \"pieces\" list")
        return piecewise_two_jump_chain(pieces, label="custom", spec=dict(spec))
    raise ValueError(f"unknown chain spec {name!r}")


def kernel_to_spec(kernel: TransitionKernel) -> dict:
    if kernel.spec is None:
        raise ValueError(f"kernel {kernel.label!r} has no serializable spec")
    return dict(kernel.spec)


# ---------------------------------------------------------------------------
# operations


def kernel_measure(kernel: TransitionKernel, x: "Point | float") -> AtomicMeasure:
    """The row p(x, .) as an atomic measure."""
    return kernel.transition(Point.of(x))


def apply_markov(kernel: TransitionKernel, mu: AtomicMeasure) -> AtomicMeasure:
    """Push a probability measure through the kernel: (A mu)(E) = int p(x,E) mu(dx)."""
    mu.require_probability("input")
    atoms: list[Atom] = []
    for src in mu.atoms:
        row = kernel.transition(src.point)
        atoms.extend(Atom(a.point, a.log_mass + src.log_mass) for a in row.atoms)
    out = AtomicMeasure(tuple(atoms))
    if not out.is_probability:
        raise AuditError(
            f"kernel {kernel.label!r} lost mass: total={out.total_mass!r}"
        )
    return out


def apply_dual(
    kernel: TransitionKernel, f, x: "Point | float"
) -> float:
    """(T f)(x) = int f(y) p(x, dy); f may be a TestFunction or a plain callable."""
    return integrate(f, kernel_measure(kernel, x))


def iterate(kernel: TransitionKernel, mu0: AtomicMeasure, n: int) -> list[AtomicMeasure]:
    """[mu_0, A mu_0, ..., A^n mu_0]."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = [mu0]
    for _ in range(n):
        out.append(apply_markov(kernel, out[-1]))
    return out


def nstep_mass(kernel: TransitionKernel, x: "Point | float", E: MeasurableSet, k: int) -> float:
    """p^k(x, E)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return mass(iterate(kernel, dirac(x), k)[-1], E)


def cesaro_mass(kernel: TransitionKernel, x: "Point | float", E: MeasurableSet, m: int) -> float:
    """q_m(x, E) = (1/m) sum_{k=1..m} p^k(x, E)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    steps = iterate(kernel, dirac(x), m)
    return math.fsum(mass(mu, E) for mu in steps[1:]) / m
