"""Arithmetic expressions in one real variable ``x``.

Grammar (``^`` is right-associative and binds tighter than the unary minus
only through the ``unary`` rule, so ``-x^2`` parses as ``(-x)^2``)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := '-'? atom
    atom   := number | 'x' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'

Functions: sin, cos, exp, log, sqrt, abs. Errors report the byte offset of
the offending token in the UTF-8 encoded input and the set of tokens that
would have been accepted there.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import TwoInnerError

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}

_ATOM_START = frozenset({"number", "x", "pi", "e", "function", "("})


class ParseError(TwoInnerError, ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str], text: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        self.text = text
        want = ", ".join(sorted(self.expected)) if self.expected else "nothing"
        super().__init__(f"{message} at byte {offset} (expected one of: {want})")


class EvaluationError(TwoInnerError, ArithmeticError):
    """An expression is undefined (or not finite) at some point."""

    def __init__(self, expr: "Expr", point: float, detail: str = ""):
        self.expr = expr
        self.point = point
        msg = f"{to_text(expr)!r} is undefined at x = {point!r}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


# --------------------------------------------------------------------------- AST


class Expr:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    # composition helpers, used to build the derived functions of the integral forms
    def __add__(self, other):
        return BinOp("+", self, _lift(other))

    def __radd__(self, other):
        return BinOp("+", _lift(other), self)

    def __sub__(self, other):
        return BinOp("-", self, _lift(other))

    def __rsub__(self, other):
        return BinOp("-", _lift(other), self)

    def __mul__(self, other):
        return BinOp("*", self, _lift(other))

    def __rmul__(self, other):
        return BinOp("*", _lift(other), self)

    def __truediv__(self, other):
        return BinOp("/", self, _lift(other))

    def __rtruediv__(self, other):
        return BinOp("/", _lift(other), self)

    def __neg__(self):
        return Neg(self)


@dataclass(frozen=True, eq=True)
class Num(Expr):
    value: float


@dataclass(frozen=True, eq=True)
class Var(Expr):
    pass


@dataclass(frozen=True, eq=True)
class Const(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True, eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Call(Expr):
    func: str
    arg: Expr


def _lift(v) -> Expr:
    if isinstance(v, Expr):
        return v
    v = float(v)
    return Neg(Num(-v)) if v < 0 else Num(v)


# --------------------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # number, x, pi, e, function, op symbol, or 'end'
    text: str
    offset: int  # byte offset


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    byte = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", byte, _ATOM_START | {"+", "-", "*", "/", "^", ")"}, text)
        lexeme = m.group()
        kind = m.lastgroup
        if kind == "ident":
            if lexeme in ("x", "pi", "e"):
                kind = lexeme
            elif lexeme in FUNCTIONS:
                kind = "function"
            else:
                raise ParseError(f"unknown identifier {lexeme!r}", byte, _ATOM_START, text)
        elif kind == "op":
            kind = lexeme
        if kind != "ws":
            tokens.append(Token(kind, lexeme, byte))
        byte += len(lexeme.encode("utf-8"))
        pos = m.end()
    tokens.append(Token("end", "", byte))
    return tokens


# --------------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected, message: str | None = None):
        t = self.tok
        if message is None:
            message = "unexpected end of input" if t.kind == "end" else f"unexpected {t.text!r}"
        raise ParseError(message, t.offset, frozenset(expected), self.text)

    def eat(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail({kind})
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "/", "^", "end"}, f"trailing input {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.eat(self.tok.kind).kind
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.eat(self.tok.kind).kind
            left = BinOp(op, left, self.factor())
        return left

    def factor(self) -> Expr:
        base = self.unary()
        if self.tok.kind == "^":
            self.eat("^")
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Expr:
        if self.tok.kind == "-":
            self.eat("-")
            return Neg(self.atom(after_minus=True))
        return self.atom()

    def atom(self, after_minus: bool = False) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.i += 1
            v = float(t.text)
            if not math.isfinite(v):
                raise ParseError(f"number {t.text!r} out of range", t.offset, frozenset({"number"}), self.text)
            return Num(v)
        if t.kind == "x":
            self.i += 1
            return Var()
        if t.kind in ("pi", "e"):
            self.i += 1
            return Const(t.kind)
        if t.kind == "function":
            self.i += 1
            self.eat("(")
            arg = self.expr()
            self.eat(")")
            return Call(t.text, arg)
        if t.kind == "(":
            self.i += 1
            inner = self.expr()
            self.eat(")")
            return inner
        self.fail(_ATOM_START if after_minus else _ATOM_START | {"-"})


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


# --------------------------------------------------------------------------- printer

_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def _level(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _LEVEL[e.op]
    if isinstance(e, Neg):
        return 4
    return 5


def _wrap(e: Expr, need: int) -> str:
    s = to_text(e)
    return f"({s})" if _level(e) < need else s


def to_text(e: Expr) -> str:
    """Canonical text; ``parse_expr(to_text(e)) == e`` for every tree."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, 5)
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    if isinstance(e, BinOp):
        if e.op in "+-":
            return f"{_wrap(e.left, 1)} {e.op} {_wrap(e.right, 2)}"
        if e.op in "*/":
            return f"{_wrap(e.left, 2)} {e.op} {_wrap(e.right, 3)}"
        return f"{_wrap(e.left, 4)}^{_wrap(e.right, 3)}"
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------- evaluation

_NP_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


def _eval(e: Expr, x: np.ndarray) -> np.ndarray:
    if isinstance(e, Num):
        return np.full_like(x, e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Const):
        return np.full_like(x, CONSTANTS[e.name])
    if isinstance(e, Neg):
        return -_eval(e.operand, x)
    if isinstance(e, Call):
        arg = _eval(e.arg, x)
        if e.func == "log":
            arg = np.where(arg > 0, arg, np.nan)
        elif e.func == "sqrt":
            arg = np.where(arg >= 0, arg, np.nan)
        return _NP_FUNCS[e.func](arg)
    if isinstance(e, BinOp):
        a, b = _eval(e.left, x), _eval(e.right, x)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            return a / np.where(b != 0, b, np.nan)
        return np.power(a, b)
    raise TypeError(f"not an expression: {e!r}")


def evaluate(e: Expr, x) -> np.ndarray | float:
    """Evaluate at a point or an array of points.

    Raises :class:`EvaluationError` naming the first point where the result is
    undefined (log/sqrt domain, division by zero, complex power) or not finite.
    """
    scalar = np.ndim(x) == 0
    pts = np.atleast_1d(np.asarray(x, dtype=float))
    with np.errstate(all="ignore"):
        out = _eval(e, pts)
    bad = ~np.isfinite(out)
    if bad.any():
        i = int(np.argmax(bad))
        raise EvaluationError(e, float(pts[i]))
    return float(out[0]) if scalar else out
