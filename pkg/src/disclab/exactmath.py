"""Exact arithmetic helpers shared across the package.

Everything here avoids floating point: square-root comparisons are done by
squaring (both sides non-negative) or by integer fixed-point intervals that
are widened conservatively and refined until the comparison is decided.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One round of the splitmix64 mixer."""
    x = (x + _GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, index: int) -> int:
    """Deterministic per-trial seed: mixes the trial index into the base seed.

    This is the documented mix used everywhere a parent seed spawns child
    seeds (restarts, trials, grid cells), so parallel evaluation orders
    cannot change results.
    """
    return splitmix64((base & MASK64) ^ splitmix64(index & MASK64))


def ge_scaled_sqrt(value: int | Fraction, coeff: Fraction, radicand: int) -> bool:
    """Exact test of ``value >= coeff * sqrt(radicand)`` for coeff >= 0, radicand >= 0."""
    if coeff < 0:
        raise ValueError("coeff must be non-negative")
    if radicand < 0:
        raise ValueError("radicand must be non-negative")
    rhs_sq = coeff * coeff * radicand
    if rhs_sq == 0:
        return value >= 0
    if value < 0:
        return False
    return value * value >= rhs_sq


def le_scaled_sqrt(value: int | Fraction, coeff: Fraction, radicand: int) -> bool:
    """Exact test of ``value <= coeff * sqrt(radicand)`` for coeff >= 0, radicand >= 0."""
    if coeff < 0 or radicand < 0:
        raise ValueError("coeff and radicand must be non-negative")
    if value <= 0:
        return True
    return value * value <= coeff * coeff * radicand


def sqrtsum_lower(radicands: Iterable[int], bits: int = 96) -> Fraction:
    """A certified lower bound on sum(sqrt(r)) as a Fraction (fixed point)."""
    scale = 1 << bits
    total = 0
    s2 = scale * scale
    for r in radicands:
        total += math.isqrt(r * s2)
    return Fraction(total, scale)


def cmp_int_vs_sqrtsum(lhs: int, mult: int, radicands: list[int]) -> int:
    """Exact sign of ``lhs - mult * sum(sqrt(r) for r in radicands)``.

    mult must be a non-negative integer.  Perfect squares are folded into the
    integer part; the remaining sum of square roots of non-squares is
    irrational, so interval refinement always terminates.
    """
    if mult < 0:
        raise ValueError("mult must be non-negative")
    base = lhs
    rest = []
    for r in radicands:
        if r < 0:
            raise ValueError("radicands must be non-negative")
        s = math.isqrt(r)
        if s * s == r:
            base -= mult * s
        else:
            rest.append(r)
    if not rest or mult == 0:
        return (base > 0) - (base < 0)
    bits = 32
    while bits <= 4096:
        scale = 1 << bits
        s2 = scale * scale
        lo = sum(math.isqrt(r * s2) for r in rest)
        hi = lo + len(rest)
        if base * scale > mult * hi:
            return 1
        if base * scale < mult * lo:
            return -1
        bits *= 2
    raise ArithmeticError("square-root comparison did not converge")


def ge_int_plus_coeff_sqrtsum(lhs: int, coeff: Fraction, radicands: list[int]) -> bool:
    """Exact test of ``lhs >= coeff * sum(sqrt(r))`` where coeff may be negative.

    For negative coeff the radicands are rescaled so a single integer-vs-sum
    comparison decides the inequality exactly.
    """
    num, den = coeff.numerator, coeff.denominator
    if num >= 0:
        # lhs*den >= num * sum(sqrt(r))
        return cmp_int_vs_sqrtsum(lhs * den, num, radicands) >= 0
    # lhs*den + |num| * sum(sqrt(r)) >= 0  <=>  -(lhs*den) <= |num|*sum(sqrt(r))
    return cmp_int_vs_sqrtsum(-lhs * den, -num, radicands) <= 0
