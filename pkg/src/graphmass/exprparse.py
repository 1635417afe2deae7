"""Tokenizer and parser for scalar coordinate expressions.

Grammar
-------
  expr    := term (('+' | '-') term)*
  term    := unary (('*' | '/') unary)*
  unary   := '-' unary | power
  power   := atom ('^' unary)?          # right-associative
  atom    := NUMBER | VARIABLE | FUNC '(' expr ')' | '(' expr ')'

Variables are ``x1 .. xN`` (1-based coordinate indices); the recognised
functions are ``sin cos exp log sqrt tanh``, all unary.  Numbers are
decimal literals, optionally with a fraction part and a scientific
exponent.  ``-x1^2`` parses as ``-(x1^2)`` and ``x1^x2^x3`` as
``x1^(x2^x3)``.

The parser builds a tiny AST of tuples; evaluation walks the tree with
any operand type that supports arithmetic, so the same tree produces
plain floats or second-order duals.
"""

from __future__ import annotations

import math
import re

from .duals import DUAL_FUNCTIONS, Dual2
from .errors import DomainError, ParseError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "tanh")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if m.group("num") is not None:
            tokens.append(("num", float(m.group("num")), m.start("num")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, n_vars):
        self.tokens = tokens
        self.i = 0
        self.n_vars = n_vars          # None = infer from usage
        self.max_index = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self):
        tree = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {value!r}", pos)
        return tree

    def expr(self):
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = (value, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                node = (value, node, self.unary())
            else:
                return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return ("^", base, self.unary())   # right-assoc, minus allowed
        return base

    def atom(self):
        kind, value, pos = self.advance()
        if kind == "num":
            return ("const", value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "name":
            if value in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                k, v, p = self.peek()
                if k == "op" and v == ",":
                    raise ParseError(
                        f"function {value!r} takes exactly one argument", p)
                self.expect_op(")")
                return ("call", value, arg)
            m = re.fullmatch(r"x([0-9]+)", value)
            if m:
                index = int(m.group(1))
                if index < 1:
                    raise ParseError(
                        f"variable index must be >= 1: {value!r}", pos)
                if self.n_vars is not None and index > self.n_vars:
                    raise ParseError(
                        f"unknown identifier {value!r}: only x1..x{self.n_vars}"
                        " are in scope", pos)
                self.max_index = max(self.max_index, index)
                return ("var", index - 1)
            raise ParseError(f"unknown identifier {value!r}", pos)
        raise ParseError(f"unexpected token {value!r}", pos)


def parse_tree(text: str, n_vars: int | None = None):
    """Parse ``text`` into an AST; returns ``(tree, n_used)``.

    ``n_used`` is the largest coordinate index seen, so callers can infer
    the ambient dimension when ``n_vars`` is not pinned.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(text), n_vars)
    tree = parser.parse()
    return tree, parser.max_index


def _is_constant(node) -> bool:
    if node[0] == "const":
        return True
    if node[0] == "neg":
        return _is_constant(node[1])
    return False


def _constant_value(node) -> float:
    if node[0] == "const":
        return node[1]
    return -_constant_value(node[1])


def eval_tree(node, coords):
    """Evaluate an AST over a sequence of operands (floats or Dual2).

    Mixed float/Dual2 arithmetic dispatches through the duals' reflected
    operators, so constants never need explicit lifting.
    """
    op = node[0]
    if op == "const":
        return node[1]
    if op == "var":
        return coords[node[1]]
    if op == "neg":
        return -eval_tree(node[1], coords)
    if op == "call":
        arg = eval_tree(node[2], coords)
        if isinstance(arg, Dual2):
            return DUAL_FUNCTIONS[node[1]](arg)
        try:
            return getattr(math, node[1])(arg)
        except ValueError as exc:
            raise DomainError(
                f"{node[1]} applied outside its domain") from exc
    lhs = eval_tree(node[1], coords)
    rhs = eval_tree(node[2], coords)
    try:
        if op == "+":
            return lhs + rhs
        if op == "-":
            return lhs - rhs
        if op == "*":
            return lhs * rhs
        if op == "/":
            return lhs / rhs
        if op == "^":
            if _is_constant(node[2]):
                rhs = _constant_value(node[2])
            if not isinstance(lhs, Dual2) and not isinstance(rhs, Dual2):
                return math.pow(lhs, rhs)
            return lhs ** rhs
    except ZeroDivisionError as exc:
        raise DomainError("division by zero in expression") from exc
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    except OverflowError as exc:
        raise DomainError("overflow in expression evaluation") from exc
    raise AssertionError(f"unhandled node {op!r}")
