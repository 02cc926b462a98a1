"""Scalar log-domain arithmetic for probabilities that underflow doubles."""

from __future__ import annotations

import math

LOG_ZERO = float("-inf")


def log_from_linear(p: float) -> float:
    if p < 0.0 or math.isnan(p):
        raise ValueError(f"not a probability mass: {p}")
    return LOG_ZERO if p == 0.0 else math.log(p)


def linear_from_log(lp: float) -> float:
    """Linear mirror of a log-domain mass; saturates to 0.0 below the double floor."""
    if lp == LOG_ZERO:
        return 0.0
    return math.exp(lp) if lp < 0.0 else math.exp(min(lp, 700.0))


def log_add(a: float, b: float) -> float:
    if a == LOG_ZERO:
        return b
    if b == LOG_ZERO:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def log_sub(a: float, b: float) -> float:
    """log(exp(a) - exp(b)) for a >= b; LOG_ZERO when equal."""
    if b == LOG_ZERO:
        return a
    if a == b:
        return LOG_ZERO
    if a < b:
        raise ValueError(f"log_sub needs a >= b, got {a} < {b}")
    d = math.exp(b - a)
    # b close enough to a that the difference is below log resolution
    return LOG_ZERO if d >= 1.0 else a + math.log1p(-d)


def log_sum(values) -> float:
    total = LOG_ZERO
    for v in values:
        total = log_add(total, v)
    return total
