"""Small expression language for history and forcing functions of ``t``.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = primary [ "^" INTEGER ] ;
    primary = NUMBER | "t" | FUNC "(" expr ")" | "(" expr ")" ;
    FUNC    = "sin" | "cos" | "exp" ;

``^`` binds tighter than unary minus (``-t^2`` is ``-(t^2)``), exponents are
non-negative integer literals, and there is no implicit multiplication.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvalError, ExprSyntaxError, UnknownIdentifier

__all__ = [
    "Expression",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Func",
    "parse",
    "eval_expr",
    "differentiate",
    "to_string",
]

FUNCTIONS = ("sin", "cos", "exp")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: int


@dataclass(frozen=True)
class Func:
    name: str
    arg: "Expression"


Expression = Union[Const, Var, Neg, BinOp, Pow, Func]

T = Var()


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), _byte_offset(text, m.start(kind))))
        pos = m.end()
    tokens.append(("end", "", len(text.encode("utf-8"))))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ExprSyntaxError("unexpected " + (repr(value) if value else "end of input"), pos, repr(op))

    def parse(self):
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {value!r}", pos, "operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            arg = self.unary()
            return Neg(arg) if value == "-" else arg
        return self.power()

    def power(self):
        base = self.primary()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.take()
            kind, value, pos = self.take()
            if kind != "num" or not value.isdigit():
                raise ExprSyntaxError(
                    "exponent must be a non-negative integer literal", pos, "integer"
                )
            base = Pow(base, int(value))
            kind, value, pos = self.peek()
            if kind == "op" and value == "^":
                raise ExprSyntaxError("chained exponent", pos, "parentheses")
        return base

    def primary(self):
        kind, value, pos = self.take()
        if kind == "num":
            return Const(float(value))
        if kind == "name":
            if value == "t":
                return T
            if value in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Func(value, arg)
            raise UnknownIdentifier(value, pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        what = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"unexpected {what}", pos, "number, 't', function or '('")


def parse(text: str) -> Expression:
    """Parse ``text`` into an expression tree.

    Raises ExprSyntaxError (with ``.offset``) or UnknownIdentifier.
    """
    return _Parser(text).parse()


# -- evaluation --------------------------------------------------------------

_NP_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}
_MATH_FUNCS = {"sin": math.sin, "cos": math.cos, "exp": math.exp}


def _ev(e, t, funcs):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Neg):
        return -_ev(e.arg, t, funcs)
    if isinstance(e, BinOp):
        a = _ev(e.left, t, funcs)
        b = _ev(e.right, t, funcs)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a / b
    if isinstance(e, Pow):
        return _ev(e.base, t, funcs) ** e.exponent
    if isinstance(e, Func):
        return funcs[e.name](_ev(e.arg, t, funcs))
    raise TypeError(f"not an expression node: {e!r}")


def eval_expr(e: Expression, t):
    """Evaluate at a scalar or numpy array ``t``.

    A non-finite result anywhere (division by zero, overflow) raises EvalError.
    """
    if isinstance(t, np.ndarray):
        with np.errstate(all="ignore"):
            out = _ev(e, t.astype(float), _NP_FUNCS)
        out = np.broadcast_to(np.asarray(out, dtype=float), t.shape).copy()
        if not np.all(np.isfinite(out)):
            bad = float(t[~np.isfinite(out)][0])
            raise EvalError(f"non-finite value of {to_string(e)} at t={bad!r}")
        return out
    try:
        out = float(_ev(e, float(t), _MATH_FUNCS))
    except (ZeroDivisionError, OverflowError) as exc:
        raise EvalError(f"{exc} evaluating {to_string(e)} at t={t!r}") from None
    if not math.isfinite(out):
        raise EvalError(f"non-finite value of {to_string(e)} at t={t!r}")
    return out


# -- simplifying constructors ------------------------------------------------

def _is_const(e, v=None):
    return isinstance(e, Const) and (v is None or e.value == v)


def _fold(value, fallback):
    return Const(value) if math.isfinite(value) else fallback


def add(a, b):
    if _is_const(a) and _is_const(b):
        return _fold(a.value + b.value, BinOp("+", a, b))
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if isinstance(b, Neg):
        return sub(a, b.arg)
    return BinOp("+", a, b)


def sub(a, b):
    if _is_const(a) and _is_const(b):
        return _fold(a.value - b.value, BinOp("-", a, b))
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return BinOp("-", a, b)


def neg(a):
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a, b):
    if _is_const(b) and not _is_const(a):
        a, b = b, a
    if _is_const(a):
        if _is_const(b):
            return _fold(a.value * b.value, BinOp("*", a, b))
        if a.value == 0.0:
            return Const(0.0)
        if a.value == 1.0:
            return b
        if a.value == -1.0:
            return neg(b)
        if isinstance(b, BinOp) and b.op == "*" and _is_const(b.left):
            return mul(Const(a.value * b.left.value), b.right)
    return BinOp("*", a, b)


def div(a, b):
    if _is_const(b, 1.0):
        return a
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return _fold(a.value / b.value, BinOp("/", a, b))
    return BinOp("/", a, b)


def power(a, n):
    if n == 0:
        return Const(1.0)
    if n == 1:
        return a
    if _is_const(a):
        return _fold(a.value ** n, Pow(a, n))
    return Pow(a, n)


# -- differentiation ---------------------------------------------------------

def differentiate(e: Expression) -> Expression:
    """Symbolic d/dt with constant folding and 0/1 elimination only."""
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Neg):
        return neg(differentiate(e.arg))
    if isinstance(e, BinOp):
        a, b = e.left, e.right
        da, db = differentiate(a), differentiate(b)
        if e.op == "+":
            return add(da, db)
        if e.op == "-":
            return sub(da, db)
        if e.op == "*":
            return add(mul(da, b), mul(a, db))
        if _is_const(db, 0.0):
            return div(da, b)
        return div(sub(mul(da, b), mul(a, db)), power(b, 2))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return Const(0.0)
        return mul(mul(Const(float(e.exponent)), power(e.base, e.exponent - 1)),
                   differentiate(e.base))
    if isinstance(e, Func):
        inner = differentiate(e.arg)
        if e.name == "sin":
            outer = Func("cos", e.arg)
        elif e.name == "cos":
            outer = neg(Func("sin", e.arg))
        else:
            outer = e
        return mul(inner, outer)
    raise TypeError(f"not an expression node: {e!r}")


# -- printing ----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg) or (isinstance(e, Const) and (e.value < 0 or str(e.value)[0] == "-")):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def _wrap(e, need: int) -> str:
    s = to_string(e)
    return f"({s})" if _prec(e) < need else s


def to_string(e: Expression) -> str:
    """Canonical text that parses back to an equivalent tree."""
    if isinstance(e, Const):
        return _num(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, 3)
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        # right operand of - and / must not re-associate
        return f"{_wrap(e.left, p)}{e.op}{_wrap(e.right, p + 1)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, 5)}^{e.exponent}"
    if isinstance(e, Func):
        return f"{e.name}({to_string(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")
