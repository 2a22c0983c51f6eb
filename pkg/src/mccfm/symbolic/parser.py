"""Expression text grammar and recursive-descent parser.

Grammar (whitespace is ignored between tokens)::

    expr    := term (("+" | "-") term)*          left-associative
    term    := unary (("*" | "/") unary)*        left-associative
    unary   := "-" unary | atom
    atom    := INTEGER | IDENT | "sqrt" "(" expr ")" | "(" expr ")"
    INTEGER := [0-9]+                            nonnegative literal
    IDENT   := [A-Za-z_][A-Za-z0-9_]*            any name except "sqrt"

Error positions are 0-based character offsets into the input; an error at
the end of input reports ``len(text)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sqrt:
    arg: "Expr"


Expr = Union[Sym, Num, Neg, BinOp, Sqrt]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str) -> ExprSyntaxError:
        tok = self.peek()
        return ExprSyntaxError(message, tok[2] if tok else len(self.text))

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            found = self.peek()
            what = f"{found[1]!r}" if found else "end of input"
            raise self.error(f"expected {value!r}, found {what}")

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = BinOp("+", node, self.term())
            elif self.accept("-"):
                node = BinOp("-", node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            if self.accept("*"):
                node = BinOp("*", node, self.unary())
            elif self.accept("/"):
                node = BinOp("/", node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        kind, value, _ = tok
        if kind == "num":
            self.i += 1
            return Num(int(value))
        if kind == "ident":
            self.i += 1
            if value == "sqrt":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Sqrt(arg)
            return Sym(value)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise self.error(f"unexpected {value!r}")


def parse(text: str) -> Expr:
    """Parse expression text into an AST, raising :class:`ExprSyntaxError`."""
    p = _Parser(text)
    if not p.tokens:
        raise ExprSyntaxError("empty expression", 0)
    node = p.expr()
    if p.peek() is not None:
        raise p.error(f"unexpected {p.peek()[1]!r}")
    return node


def format_expr(e: Expr) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Neg):
        return f"-({format_expr(e.operand)})"
    if isinstance(e, Sqrt):
        return f"sqrt({format_expr(e.arg)})"
    return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
