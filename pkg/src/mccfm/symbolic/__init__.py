"""A small computer-algebra core for radical expressions over nonnegative symbols."""
from mccfm.symbolic.parser import BinOp, Expr, ExprSyntaxError, Neg, Num, Sqrt, Sym, format_expr, parse
from mccfm.symbolic.poly import Polynomial, degree_in, leading_coeff_in, poly_arith
from mccfm.symbolic.surdexpr import (
    CanonicalizationError,
    EvaluationError,
    LimitResult,
    SurdExpr,
    canonicalize,
    evaluate_at,
    is_identically_equal,
    limit_at_infinity,
)

__all__ = [
    "BinOp", "CanonicalizationError", "EvaluationError", "Expr", "ExprSyntaxError",
    "LimitResult", "Neg", "Num", "Polynomial", "Sqrt", "SurdExpr", "Sym",
    "canonicalize", "degree_in", "evaluate_at", "format_expr", "is_identically_equal",
    "leading_coeff_in", "limit_at_infinity", "parse", "poly_arith",
]
