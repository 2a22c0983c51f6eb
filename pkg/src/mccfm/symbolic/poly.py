"""Sparse multivariate polynomials with integer coefficients.

A monomial is a tuple of ``(symbol, exponent)`` pairs sorted by symbol name,
exponents positive; the constant monomial is ``()``.  Keying monomials by name
rather than by position means polynomials over different symbol sets combine
without an explicit shared context.
"""
from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping

Monomial = tuple[tuple[str, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    exps = dict(a)
    for name, e in b:
        left = exps.get(name, 0) - e
        if left < 0:
            return None
        if left:
            exps[name] = left
        else:
            del exps[name]
    return tuple(sorted(exps.items()))


class Polynomial:
    """Immutable sparse polynomial; the zero polynomial has no terms."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None) -> None:
        self._terms: dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}
        self._hash: int | None = None

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): 1})

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> int:
        return self._terms.get((), 0)

    def symbols(self) -> frozenset[str]:
        return frozenset(name for m in self._terms for name, _ in m)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __add__(self, other: "Polynomial | int") -> "Polynomial":
        other = _coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other: "Polynomial | int") -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> "Polynomial":
        return _coerce(other) - self

    def __mul__(self, other: "Polynomial | int") -> "Polynomial":
        other = _coerce(other)
        out: dict[Monomial, int] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        total = 0
        for m, c in self._terms.items():
            term = c
            for name, e in m:
                try:
                    term *= assignment[name] ** e
                except KeyError:
                    raise KeyError(f"no value assigned to symbol {name!r}") from None
            total += term
        return total

    def content(self) -> int:
        """Gcd of the coefficients (0 for the zero polynomial)."""
        return math.gcd(*self._terms.values()) if self._terms else 0

    def coefficient_sign(self) -> int | None:
        """+1 / -1 if every coefficient is positive / negative, 0 for zero, else None.

        Symbols are nonnegative, so a polynomial whose coefficients share a
        sign takes only values of that sign (or zero).
        """
        if not self._terms:
            return 0
        if all(c > 0 for c in self._terms.values()):
            return 1
        if all(c < 0 for c in self._terms.values()):
            return -1
        return None

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def _coerce(p: "Polynomial | int") -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, int):
        return Polynomial.constant(p)
    raise TypeError(f"cannot use {type(p).__name__} as a polynomial")


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def degree_in(p: Polynomial, t: str) -> int:
    """Highest exponent of ``t`` across the terms of ``p``."""
    if p.is_zero():
        raise ValueError("degree of the zero polynomial is undefined")
    return max(dict(m).get(t, 0) for m in p.terms)


def leading_coeff_in(p: Polynomial, t: str) -> Polynomial:
    """Coefficient polynomial of ``t**degree_in(p, t)``, free of ``t``."""
    d = degree_in(p, t)
    out: dict[Monomial, int] = {}
    for m, c in p.terms.items():
        exps = dict(m)
        if exps.get(t, 0) == d:
            exps.pop(t, None)
            out[tuple(sorted(exps.items()))] = c
    return Polynomial(out)


# -- graded-lex helpers for exact division and square roots -----------------


def _grlex_key(variables: tuple[str, ...]):
    def key(m: Monomial) -> tuple[int, tuple[int, ...]]:
        exps = dict(m)
        vec = tuple(exps.get(v, 0) for v in variables)
        return sum(vec), vec

    return key


def _leading_term(p: Polynomial, key) -> tuple[Monomial, int]:
    m = max(p.terms, key=key)
    return m, p.terms[m]


def exact_quotient(p: Polynomial, d: Polynomial) -> Polynomial | None:
    """Return ``q`` with ``q * d == p`` if such an integer polynomial exists, else None."""
    if d.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if p.is_zero():
        return Polynomial()
    key = _grlex_key(tuple(sorted(p.symbols() | d.symbols())))
    ld_m, ld_c = _leading_term(d, key)
    quotient: dict[Monomial, int] = {}
    rem = p
    while not rem.is_zero():
        lr_m, lr_c = _leading_term(rem, key)
        m = _mono_div(lr_m, ld_m)
        if m is None or lr_c % ld_c:
            return None
        t = Polynomial({m: lr_c // ld_c})
        quotient[m] = lr_c // ld_c
        rem = rem - t * d
    return Polynomial(quotient)


def polynomial_sqrt(p: Polynomial) -> Polynomial | None:
    """Return ``s`` with ``s * s == p`` and positive leading coefficient, else None."""
    if p.is_zero():
        return Polynomial()
    key = _grlex_key(tuple(sorted(p.symbols())))
    lm, lc = _leading_term(p, key)
    root_c = math.isqrt(lc) if lc > 0 else -1
    if root_c < 0 or root_c * root_c != lc or any(e % 2 for _, e in lm):
        return None
    lead = Polynomial({tuple((n, e // 2) for n, e in lm): root_c})
    lead_m, lead_c = next(iter(lead))
    s = lead
    rem = p - s * s
    # leading monomials of the remainder strictly decrease, so this terminates
    while not rem.is_zero():
        rm, rc = _leading_term(rem, key)
        m = _mono_div(rm, lead_m)
        if m is None or rc % (2 * lead_c) or key(m) >= key(lead_m):
            return None
        t = Polynomial({m: rc // (2 * lead_c)})
        rem = rem - (2 * s + t) * t
        s = s + t
    return s


def sign_on_domain(p: Polynomial) -> int | None:
    """Sign of ``p`` over nonnegative symbol values when provable, else None.

    Returns +1 for "always >= 0", -1 for "always <= 0", 0 for the zero
    polynomial.  Beyond the coefficient-sign rule, perfect squares count as
    nonnegative.
    """
    s = p.coefficient_sign()
    if s is not None:
        return s
    if polynomial_sqrt(p) is not None:
        return 1
    if polynomial_sqrt(-p) is not None:
        return -1
    return None


# -- formatting --------------------------------------------------------------


def _format_monomial(m: Monomial) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in m)


def format_polynomial(p: Polynomial) -> str:
    """Deterministic text form: terms by descending total degree, then by name."""
    if p.is_zero():
        return "0"
    variables = tuple(sorted(p.symbols()))
    key = _grlex_key(variables)
    parts: list[str] = []
    for m in sorted(p.terms, key=key, reverse=True):
        c = p.terms[m]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not m:
            body = str(mag)
        elif mag == 1:
            body = _format_monomial(m)
        else:
            body = f"{mag}*{_format_monomial(m)}"
        parts.append(f"{sign} {body}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def from_terms(pairs: Iterable[tuple[int, Mapping[str, int]]]) -> Polynomial:
    """Build a polynomial from ``(coefficient, {symbol: exponent})`` pairs."""
    out: dict[Monomial, int] = {}
    for c, exps in pairs:
        m = tuple(sorted((n, e) for n, e in exps.items() if e))
        out[m] = out.get(m, 0) + c
    return Polynomial(out)
