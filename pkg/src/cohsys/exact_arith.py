"""Exact integer and rational kernel.

Python ints are already arbitrary precision and :class:`fractions.Fraction`
keeps itself normalized (positive denominator, lowest terms), so this module
is a thin layer that pins down the domain rules the rest of the package
relies on. Nothing here, or anywhere else in the package, touches floats.
"""

from __future__ import annotations

import math
from fractions import Fraction

Rational = Fraction

__all__ = [
    "DomainError",
    "Rational",
    "rational",
    "floor_div",
    "ceil_div",
    "factorial",
    "rat_cmp",
    "format_rational",
    "parse_rational",
]


class DomainError(ValueError):
    """An operation was called outside its precondition.

    ``citation`` optionally names the result that explains why the input
    is out of range (shown by the CLI next to the message).
    """

    def __init__(self, message: str, citation: str | None = None):
        super().__init__(message)
        self.citation = citation

    def __str__(self) -> str:
        msg = super().__str__()
        if self.citation:
            return f"{msg} ({self.citation})"
        return msg


def _check_int(*values: object) -> None:
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError(f"expected an integer, got {v!r}")


def rational(p: int, q: int = 1) -> Fraction:
    """Build the normalized rational ``p/q``."""
    _check_int(p, q)
    if q == 0:
        raise DomainError("zero denominator")
    return Fraction(p, q)


def floor_div(a: int, b: int) -> int:
    """Greatest ``q`` with ``q*b <= a``; ``b`` must be positive."""
    _check_int(a, b)
    if b <= 0:
        raise DomainError(f"floor_div needs a positive divisor, got {b}")
    return a // b


def ceil_div(a: int, b: int) -> int:
    """Least ``q`` with ``q*b >= a``; ``b`` must be positive."""
    return -floor_div(-a, b)


def factorial(m: int) -> int:
    _check_int(m)
    if m < 0:
        raise DomainError(f"factorial of negative integer {m}")
    return math.factorial(m)


def rat_cmp(a: Fraction | int, b: Fraction | int) -> int:
    """Three-way comparison by cross-multiplication: -1, 0 or 1."""
    a, b = Fraction(a), Fraction(b)
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    return (lhs > rhs) - (lhs < rhs)


def format_rational(x: Fraction | int) -> str:
    """Render as ``p/q``, or a bare integer when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`. Decimal notation is rejected."""
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return rational(int(p), int(q))
    return rational(int(text))
