"""Tiny expression language for target functions given on the command line.

Grammar (standard precedence, ``^`` binds tightest and associates right):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | VARIABLE | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Variables are ``x1 .. xN`` with aliases ``x``, ``y``, ``z`` for the first
three coordinates.  Functions: ``min``/``max`` (two or more arguments),
``abs``, ``sqrt``, and ``norm(e1, ..., ek)`` = Euclidean length.  Exponents
must evaluate to integers.  There is no implicit multiplication.

Parsing problems raise :class:`ParseError` with the byte offset; runtime
problems (division by zero, square root of a negative, fractional exponent)
raise :class:`EvalError`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Neg",
    "Bin",
    "Call",
    "ParseError",
    "EvalError",
    "parse",
    "eval_expr",
    "to_text",
    "num_vars",
]

_ALIASES = {"x": 0, "y": 1, "z": 2}
_FUNCTIONS = {"min": (2, None), "max": (2, None), "abs": (1, 1),
              "sqrt": (1, 1), "norm": (1, None)}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class EvalError(ArithmeticError):
    pass


class Expr:
    pass


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int      # zero-based coordinate


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Bin(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple


# -- tokenizer ---------------------------------------------------------------


def _tokenize(text: str):
    tokens = []  # (kind, value, offset)
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lit = text[i:j]
            try:
                val = float(lit)
            except ValueError:
                raise ParseError(f"bad number literal {lit!r}", i) from None
            tokens.append(("num", val, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^(),":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = Bin(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            node = Bin(op, node, self.parse_unary())
        return node

    def parse_unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.take()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.take()
            return Bin("^", base, self.parse_unary())
        return base

    def parse_atom(self) -> Expr:
        kind, value, offset = self.peek()
        if kind == "num":
            self.take()
            return Num(value)
        if kind == "(":
            self.take()
            node = self.parse_expr()
            self.take(")")
            return node
        if kind == "name":
            self.take()
            if self.peek()[0] == "(":
                return self.parse_call(value, offset)
            return self.make_var(value, offset)
        raise ParseError(f"expected a value, found {value!r}", offset)

    def parse_call(self, name: str, offset: int) -> Expr:
        if name not in _FUNCTIONS:
            raise ParseError(f"unknown function {name!r}", offset)
        self.take("(")
        args = [self.parse_expr()]
        while self.peek()[0] == ",":
            self.take()
            args.append(self.parse_expr())
        self.take(")")
        lo, hi = _FUNCTIONS[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ParseError(f"{name} takes {'at least ' + str(lo) if hi is None else str(lo)} "
                             f"argument(s), got {len(args)}", offset)
        return Call(name, tuple(args))

    def make_var(self, name: str, offset: int) -> Expr:
        if name in _ALIASES:
            return Var(_ALIASES[name])
        if name.startswith("x") and name[1:].isdigit():
            idx = int(name[1:])
            if idx >= 1:
                return Var(idx - 1)
        raise ParseError(f"unknown identifier {name!r}", offset)


def parse(text: str) -> Expr:
    p = _Parser(text)
    node = p.parse_expr()
    kind, value, offset = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {value!r}", offset)
    return node


# -- evaluation ---------------------------------------------------------------


def num_vars(e: Expr) -> int:
    """Smallest point dimension on which the expression is evaluable."""
    if isinstance(e, Var):
        return e.index + 1
    if isinstance(e, Neg):
        return num_vars(e.arg)
    if isinstance(e, Bin):
        return max(num_vars(e.left), num_vars(e.right))
    if isinstance(e, Call):
        return max(num_vars(a) for a in e.args)
    return 0


def eval_expr(e: Expr, point) -> float:
    """Evaluate at a single point (sequence of coordinates)."""
    pt = np.asarray(point, dtype=float).reshape(-1)

    def rec(node) -> float:
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Var):
            if node.index >= pt.size:
                raise EvalError(
                    f"expression uses coordinate {node.index + 1}, point has dimension {pt.size}"
                )
            return float(pt[node.index])
        if isinstance(node, Neg):
            return -rec(node.arg)
        if isinstance(node, Bin):
            a = rec(node.left)
            b = rec(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                if b == 0.0:
                    raise EvalError("division by zero")
                return a / b
            # power with integer exponent
            if b != int(b):
                raise EvalError(f"exponent {b} is not an integer")
            k = int(b)
            if a == 0.0 and k < 0:
                raise EvalError("zero raised to a negative power")
            return float(a ** k)
        if isinstance(node, Call):
            vals = [rec(a) for a in node.args]
            if node.name == "min":
                return min(vals)
            if node.name == "max":
                return max(vals)
            if node.name == "abs":
                return abs(vals[0])
            if node.name == "sqrt":
                if vals[0] < 0.0:
                    raise EvalError(f"square root of negative value {vals[0]}")
                return float(np.sqrt(vals[0]))
            if node.name == "norm":
                return float(np.sqrt(sum(v * v for v in vals)))
        raise EvalError(f"cannot evaluate node {node!r}")

    return float(rec(e))


def to_text(e: Expr) -> str:
    """Fully parenthesized text form; reparsing gives a structurally equal tree."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return f"x{e.index + 1}"
    if isinstance(e, Neg):
        return f"(-{to_text(e.arg)})"
    if isinstance(e, Bin):
        return f"({to_text(e.left)}{e.op}{to_text(e.right)})"
    if isinstance(e, Call):
        return f"{e.name}({','.join(to_text(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")
