"""Exact rational helpers and the small notational conventions used by the counts.

Rationals are plain :class:`fractions.Fraction` values; they are always in
lowest terms with a positive denominator.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable

Rational = Fraction

__all__ = [
    "Rational",
    "binomial",
    "odd_falling",
    "bar",
    "tilde",
    "tilde_sum",
    "format_rational",
    "parse_rational",
    "as_integer",
]


def binomial(n: int, k: int) -> Fraction:
    """Binomial coefficient with the extra convention ``binomial(-1, 0) == 1``.

    Only ``n >= -1`` is accepted; anything more negative means a formula was
    evaluated outside its domain.
    """
    if k < 0:
        raise ValueError(f"binomial: k must be non-negative, got {k}")
    if n < -1:
        raise ValueError(f"binomial: n must be >= -1, got {n}")
    if n == -1:
        return Fraction(1 if k == 0 else 0)
    return Fraction(comb(n, k))


def odd_falling(mu: int, a: int) -> Fraction:
    """(2mu-1)(2mu-3)...(2mu-2a-1), i.e. a+1 odd factors."""
    if a < 0:
        raise ValueError(f"odd_falling: a must be non-negative, got {a}")
    out = 1
    for t in range(a + 1):
        out *= 2 * mu - 1 - 2 * t
    return Fraction(out)


def bar(n: int) -> int:
    """n for positive n, 1 for n == 0."""
    if n < 0:
        raise ValueError(f"bar: negative argument {n}")
    return n if n > 0 else 1


def tilde(n: int) -> int:
    """n if n is a positive even integer, otherwise 0."""
    return n if n > 0 and n % 2 == 0 else 0


def tilde_sum(d: int, f: Callable[[int, int], Fraction], i_min: int = 1) -> Fraction:
    """Signed difference of two constrained sums.

    Returns ``sum_{i+x=d} x*f(i,x) - sum_{i+x=-d} x*f(i,x)`` over ``i >= i_min``,
    ``x >= 0``. At most one of the two index sets is non-empty (apart from the
    weightless ``x = 0`` terms).
    """
    total = Fraction(0)
    for sign, target in ((1, d), (-1, -d)):
        for i in range(i_min, target + 1):
            x = target - i
            if x:
                total += sign * x * f(i, x)
    return total


def format_rational(q: Fraction | int) -> str:
    """``"num/den"`` in lowest terms, ``"num"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(c.isspace() for c in text):
        raise ValueError(f"not a rational: {text!r}")
    num, sep, den = text.partition("/")
    try:
        q = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
    return q


def as_integer(q: Fraction, what: str = "value") -> int:
    """Assert integer-valuedness at an API boundary."""
    if q.denominator != 1:
        raise ArithmeticError(f"{what} is not an integer: {format_rational(q)}")
    return q.numerator
