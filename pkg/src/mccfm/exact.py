"""Exact integer, rational and surd arithmetic.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  A :class:`Surd` is a value ``coeff * sqrt(radicand)`` with a
rational coefficient and a nonnegative integer radicand.  Ordering and
equality of surds are decided by cross-squaring, so they never depend on the
radicand being squarefree.

Decimal rendering truncates toward zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Literal, Union

RationalLike = Union[int, Fraction]

#: Square factors are pulled out of radicands by trial division up to here.
SMALL_PRIME_BOUND = 1000


def _primes_upto(n: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_SMALL_PRIMES = _primes_upto(SMALL_PRIME_BOUND)


def integer_sqrt_floor(n: int) -> int:
    """Return the unique ``s`` with ``s*s <= n < (s+1)*(s+1)``."""
    if n < 0:
        raise ValueError(f"integer_sqrt_floor of negative number {n}")
    return math.isqrt(n)


def integer_sqrt_ceil(n: int) -> int:
    s = math.isqrt(n)
    return s if s * s == n else s + 1


def rational_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    """Apply ``op`` (``add``, ``sub``, ``mul`` or ``div``) exactly.

    Division by zero raises :class:`ZeroDivisionError`.
    """
    a, b = Fraction(a), Fraction(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown rational operation {op!r}")


def _extract_square_factors(radicand: int) -> tuple[int, int]:
    """Split ``radicand`` into ``(outside, inside)`` with ``outside**2 * inside == radicand``."""
    outside = 1
    inside = radicand
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > inside:
            break
        while inside % pp == 0:
            inside //= pp
            outside *= p
    # a leftover perfect square (e.g. the square of a large prime) is cheap to detect
    s = math.isqrt(inside)
    if s > 1 and s * s == inside:
        outside *= s
        inside = 1
    return outside, inside


@total_ordering
@dataclass(frozen=True, init=False)
class Surd:
    """Exact real number ``coeff * sqrt(radicand)``.

    The constructor normalizes: square factors of the radicand found by
    trial division are moved into the coefficient, and rational values are
    stored with radicand 1 (zero is ``Surd(0, 1)``).
    """

    coeff: Fraction
    radicand: int

    def __init__(self, coeff: RationalLike = 0, radicand: int = 1) -> None:
        coeff = Fraction(coeff)
        radicand = int(radicand)
        if radicand < 0:
            raise ValueError(f"negative radicand {radicand}")
        if radicand == 0 or coeff == 0:
            coeff, radicand = Fraction(0), 1
        else:
            outside, radicand = _extract_square_factors(radicand)
            coeff *= outside
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", radicand)

    @classmethod
    def sqrt_of(cls, value: RationalLike) -> "Surd":
        """Nonnegative square root of a nonnegative rational."""
        value = Fraction(value)
        if value < 0:
            raise ValueError(f"square root of negative rational {value}")
        # sqrt(n/d) = sqrt(n*d) / d
        return cls(Fraction(1, value.denominator), value.numerator * value.denominator)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def sign(self) -> int:
        return (self.coeff > 0) - (self.coeff < 0)

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def __neg__(self) -> "Surd":
        return Surd(-self.coeff, self.radicand)

    def __abs__(self) -> "Surd":
        return Surd(abs(self.coeff), self.radicand)

    def __mul__(self, other: "Surd | RationalLike") -> "Surd":
        if isinstance(other, Surd):
            return Surd(self.coeff * other.coeff, self.radicand * other.radicand)
        return Surd(self.coeff * Fraction(other), self.radicand)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return surd_compare(self, other) == "equal"

    def __lt__(self, other: "Surd | RationalLike") -> bool:
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        return surd_compare(self, other) == "less"

    def __hash__(self) -> int:
        # equal values have equal squares and signs
        return hash((self.sign(), self.square()))

    def __str__(self) -> str:
        if self.radicand == 1:
            return str(self.coeff)
        return f"({self.coeff})*sqrt({self.radicand})"

    def __repr__(self) -> str:
        return f"Surd({self.coeff!s}, {self.radicand})"


def surd_from_ratio(n: RationalLike, d: int) -> Surd:
    """Return the surd equal to ``n / sqrt(d)``, i.e. ``(n/d) * sqrt(d)``."""
    if d == 0:
        raise ZeroDivisionError("surd_from_ratio with zero denominator")
    if d < 0:
        raise ValueError(f"surd_from_ratio needs a positive denominator, got {d}")
    return Surd(Fraction(n) / d, d)


Ordering = Literal["less", "equal", "greater"]


def surd_compare(a: Surd, b: Surd) -> Ordering:
    sa, sb = a.sign(), b.sign()
    if sa != sb:
        return "less" if sa < sb else "greater"
    if sa == 0:
        return "equal"
    qa, qb = a.square(), b.square()
    if qa == qb:
        return "equal"
    # for two negatives the larger square is the smaller value
    if (qa < qb) == (sa > 0):
        return "less"
    return "greater"


def surd_enclosure(a: Surd, places: int) -> tuple[Fraction, Fraction]:
    """Rational bounds ``lo <= a <= hi`` with ``hi - lo <= 10**-places``.

    Both bounds coincide when ``a`` is exactly representable at that scale
    of the integer square root (in particular for every rational ``a``).
    """
    p, q = abs(a.coeff.numerator), a.coeff.denominator
    if a.radicand == 1:
        return a.coeff, a.coeff
    scale = 10**places
    # |a| * scale = sqrt(p*p*r*scale**2) / q
    n = p * p * a.radicand * scale * scale
    root = math.isqrt(n)
    lo = Fraction(root, q * scale)
    hi = lo if root * root == n else Fraction(root + 1, q * scale)
    if a.coeff < 0:
        return -hi, -lo
    return lo, hi


def _format_scaled(units: int, digits: int, negative: bool) -> str:
    whole, frac = divmod(units, 10**digits)
    sign = "-" if negative and units else ""
    return f"{sign}{whole}.{frac:0{digits}d}"


def surd_to_decimal(a: Surd, digits: int) -> str:
    """Decimal text of ``a`` with ``digits`` places, truncated toward zero."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    p, q = abs(a.coeff.numerator), a.coeff.denominator
    scale = 10**digits
    # floor(floor(x) / q) == floor(x / q) for a positive integer q
    units = math.isqrt(p * p * a.radicand * scale * scale) // q
    return _format_scaled(units, digits, a.coeff < 0)


def rational_to_decimal(x: RationalLike, digits: int, rounding: str = "truncate") -> str:
    """Decimal text of a rational; ``rounding`` is ``truncate`` or ``up`` (away from zero)."""
    x = Fraction(x)
    scale = 10**digits
    scaled = abs(x) * scale
    if rounding == "truncate":
        units = math.floor(scaled)
    elif rounding == "up":
        units = math.ceil(scaled)
    else:
        raise ValueError(f"unknown rounding {rounding!r}")
    return _format_scaled(units, digits, x < 0)
