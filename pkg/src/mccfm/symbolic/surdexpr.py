"""Canonical radical forms ``(P/Q) * sqrt(R)`` over integer polynomials.

Every symbol is taken to range over the nonnegative integers.  Under that
assumption ``sqrt(a) * sqrt(b) == sqrt(a*b)`` holds wherever both sides are
real, which is what lets products and quotients of radicals collapse into a
single radical.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Mapping

from mccfm.exact import Surd
from mccfm.symbolic.parser import BinOp, Expr, Neg, Num, Sqrt, Sym, parse
from mccfm.symbolic.poly import (
    Polynomial,
    degree_in,
    exact_quotient,
    format_polynomial,
    leading_coeff_in,
    polynomial_sqrt,
    sign_on_domain,
)

ONE = Polynomial.constant(1)
ZERO_POLY = Polynomial()


class CanonicalizationError(ValueError):
    pass


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class SurdExpr:
    """The value ``(P / Q) * sqrt(R)``.

    ``Q`` and ``R`` are never the zero polynomial, a zero value is always
    ``(0, 1, 1)``, and a radicand that is a perfect square with a root of
    provable sign is absorbed so radical-free values carry ``R == 1``.
    """

    P: Polynomial
    Q: Polynomial
    R: Polynomial = ONE

    def __post_init__(self) -> None:
        if self.Q.is_zero():
            raise CanonicalizationError("zero denominator")
        if self.R.is_zero():
            raise CanonicalizationError("zero radicand")

    @classmethod
    def make(cls, P: Polynomial, Q: Polynomial, R: Polynomial = ONE) -> "SurdExpr":
        """Build a normalized value (zero collapse, perfect-square radicands)."""
        if Q.is_zero():
            raise CanonicalizationError("zero denominator")
        if P.is_zero() or R.is_zero():
            return ZERO
        if R != ONE:
            root = polynomial_sqrt(R)
            if root is not None and sign_on_domain(root) == 1:
                P, R = P * root, ONE
        return cls(P, Q, R)

    @property
    def is_zero(self) -> bool:
        return self.P.is_zero()

    @property
    def is_radical_free(self) -> bool:
        return self.R == ONE

    def symbols(self) -> frozenset[str]:
        return self.P.symbols() | self.Q.symbols() | self.R.symbols()

    def __str__(self) -> str:
        if self.Q == ONE and self.R == ONE:
            return format_polynomial(self.P)
        text = f"({format_polynomial(self.P)})"
        if self.Q != ONE:
            text += f"/({format_polynomial(self.Q)})"
        if self.R != ONE:
            text += f"*sqrt({format_polynomial(self.R)})"
        return text


ZERO = SurdExpr(ZERO_POLY, ONE, ONE)


def _add(a: SurdExpr, b: SurdExpr, sign: int) -> SurdExpr:
    if b.is_zero:
        return a
    if a.is_zero:
        return SurdExpr.make(sign * b.P, b.Q, b.R)
    if a.R != b.R:
        raise CanonicalizationError("sum of distinct radicals unsupported")
    return SurdExpr.make(a.P * b.Q + sign * (b.P * a.Q), a.Q * b.Q, a.R)


def _mul(a: SurdExpr, b: SurdExpr) -> SurdExpr:
    return SurdExpr.make(a.P * b.P, a.Q * b.Q, a.R * b.R)


def _div(a: SurdExpr, b: SurdExpr) -> SurdExpr:
    if b.is_zero:
        raise CanonicalizationError("zero denominator")
    # (Pa/Qa)sqrt(Ra) / ((Pb/Qb)sqrt(Rb)) = Pa*Qb*sqrt(Ra*Rb) / (Qa*Pb*Rb)
    return SurdExpr.make(a.P * b.Q, a.Q * b.P * b.R, a.R * b.R)


def _sqrt(a: SurdExpr) -> SurdExpr:
    if not a.is_radical_free:
        raise CanonicalizationError("nested radical unsupported")
    if a.is_zero:
        return ZERO
    P, Q = a.P, a.Q
    q_sign = sign_on_domain(Q)
    if q_sign == -1:
        P, Q = -P, -Q
        q_sign = 1
    if q_sign == 1:
        # sqrt(P/Q) = sqrt(P*Q) / Q for Q >= 0
        return SurdExpr.make(ONE, Q, P * Q)
    # sign of Q unknown: sqrt(P/Q) = sqrt(P*Q^3) / Q^2
    Q2 = Q * Q
    return SurdExpr.make(ONE, Q2, P * Q * Q2)


def canonicalize(e: Expr | str) -> SurdExpr:
    """Reduce an expression tree (or its text) to canonical ``(P/Q)*sqrt(R)`` form."""
    if isinstance(e, str):
        e = parse(e)
    if isinstance(e, Sym):
        return SurdExpr(Polynomial.symbol(e.name), ONE, ONE)
    if isinstance(e, Num):
        return SurdExpr.make(Polynomial.constant(e.value), ONE)
    if isinstance(e, Neg):
        inner = canonicalize(e.operand)
        return SurdExpr.make(-inner.P, inner.Q, inner.R)
    if isinstance(e, Sqrt):
        return _sqrt(canonicalize(e.arg))
    if isinstance(e, BinOp):
        left, right = canonicalize(e.left), canonicalize(e.right)
        if e.op == "+":
            return _add(left, right, 1)
        if e.op == "-":
            return _add(left, right, -1)
        if e.op == "*":
            return _mul(left, right)
        if e.op == "/":
            return _div(left, right)
    raise TypeError(f"not an expression node: {e!r}")


# -- limits ----------------------------------------------------------------


@dataclass(frozen=True)
class LimitResult:
    kind: Literal["finite", "diverges_positive", "diverges_negative", "indeterminate_sign"]
    value: SurdExpr | None = None

    def __str__(self) -> str:
        return str(self.value) if self.kind == "finite" else self.kind


def _deg(p: Polynomial, t: str) -> int:
    return degree_in(p, t) if not p.is_zero() else 0


def limit_at_infinity(e: SurdExpr, t: str) -> LimitResult:
    """Limit of ``e`` as the symbol ``t`` grows without bound.

    With the other symbols held generic, ``(P/Q)*sqrt(R)`` behaves like
    ``t**(D/2)`` times the ratio of leading coefficients in ``t``, where
    ``D = 2*(deg P - deg Q) + deg R``.
    """
    if e.is_zero:
        return LimitResult("finite", ZERO)
    D = 2 * (_deg(e.P, t) - _deg(e.Q, t)) + _deg(e.R, t)
    if D < 0:
        return LimitResult("finite", ZERO)
    lp, lq, lr = leading_coeff_in(e.P, t), leading_coeff_in(e.Q, t), leading_coeff_in(e.R, t)
    if D == 0:
        return LimitResult("finite", SurdExpr.make(lp, lq, lr))
    sign = sign_on_domain(lp * lq)
    if sign == 1:
        return LimitResult("diverges_positive")
    if sign == -1:
        return LimitResult("diverges_negative")
    return LimitResult("indeterminate_sign")


# -- identity checking ---------------------------------------------------------

Verdict = Literal["equal", "not_equal", "indeterminate"]


def _same_sign(x: Polynomial, y: Polynomial) -> bool | None:
    """Whether ``x*y >= 0`` on the whole domain: True, False (opposite), or None."""
    sx, sy = sign_on_domain(x), sign_on_domain(y)
    if sx is not None and sy is not None and sx and sy:
        return sx == sy
    s = sign_on_domain(x * y)
    if s == 1:
        return True
    # x = k*y gives x*y = k*y^2, so the sign of k decides
    for num, den in ((x, y), (y, x)):
        k = exact_quotient(num, den)
        if k is not None:
            sk = sign_on_domain(k)
            if sk:
                return sk == 1
    return None


def is_identically_equal(a: SurdExpr, b: SurdExpr) -> Verdict:
    """Decide ``a == b`` for all nonnegative symbol values by cross-squaring.

    The squares must agree as polynomials and the two values must provably
    share a sign; when the squares agree but the sign cannot be settled the
    verdict is ``indeterminate``.
    """
    if a.is_zero or b.is_zero:
        return "equal" if a.is_zero and b.is_zero else "not_equal"
    # a = X*sqrt(Ra)/(Qa*Qb), b = Y*sqrt(Rb)/(Qa*Qb)
    X = a.P * b.Q
    Y = b.P * a.Q
    if X * X * a.R != Y * Y * b.R:
        return "not_equal"
    same = _same_sign(X, Y)
    if same is None:
        return "indeterminate"
    return "equal" if same else "not_equal"


# -- numeric bridge ------------------------------------------------------------


def evaluate_at(e: SurdExpr, assignment: Mapping[str, int]) -> Surd:
    """Exact value of ``e`` at an assignment of nonnegative integers."""
    for name, v in assignment.items():
        if v < 0:
            raise ValueError(f"symbol {name!r} must be nonnegative, got {v}")
    q = e.Q.evaluate(assignment)
    r = e.R.evaluate(assignment)
    if q == 0 or r == 0:
        raise EvaluationError("evaluation at singularity")
    if r < 0:
        raise EvaluationError("negative radicand at evaluation point")
    return Surd(Fraction(e.P.evaluate(assignment), q), r)
