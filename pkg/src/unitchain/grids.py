"""Deterministic point grids used by audits and diagnostics."""

from __future__ import annotations

import numpy as np

from .measure import ONE, ZERO, Point


def _dedupe(points: list[Point]) -> list[Point]:
    return sorted(set(points))


def uniform_grid(n: int) -> list[Point]:
    """n+1 equally spaced points covering [0,1]."""
    if n < 1:
        raise ValueError("need at least two grid points")
    return [Point.from_linear(float(x)) for x in np.linspace(0.0, 1.0, n + 1)]


def geometric_near_zero(j_max: int) -> list[Point]:
    """10^-j for j = 1..j_max."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    return [Point.from_linear(10.0 ** -j) for j in range(1, j_max + 1)]


def geometric_near_one(j_max: int) -> list[Point]:
    """1 - 10^-j for j = 1..j_max."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    return [Point.from_linear(1.0 - 10.0 ** -j) for j in range(1, j_max + 1)]


def endpoint_refined_grid(j_max: int = 12, interior: int = 9) -> list[Point]:
    """0, 1, a coarse uniform interior, and geometric shells at both ends."""
    pts = [ZERO, ONE]
    pts += [Point.from_linear(k / (interior + 1)) for k in range(1, interior + 1)]
    pts += geometric_near_zero(j_max)
    pts += geometric_near_one(j_max)
    return _dedupe(pts)


def audit_grid(n_uniform: int, geo_per_end: int = 32) -> list[Point]:
    """Uniform coverage plus geometric refinement near each endpoint.

    The geometric tails run from 1e-1 down to 1e-16 (and mirrored at 1),
    where two-jump kernels have their sharpest behaviour.
    """
    pts = [Point.from_linear(float(x)) for x in np.linspace(0.0, 1.0, n_uniform + 1)]
    exps = np.linspace(1.0, 16.0, geo_per_end)
    for e in exps:
        d = float(10.0 ** -e)
        pts.append(Point.from_linear(d))
        pts.append(Point.from_linear(1.0 - d))
    return _dedupe(pts)
