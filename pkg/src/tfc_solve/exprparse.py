"""Recursive-descent parser for coefficient-function expressions.

Grammar (usual precedence, ^ binds tightest and is right-associative):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 't' | 'pi' | 'e' | FUNC '(' expr ')'
            | 'pow' '(' expr ',' expr ')' | '(' expr ')'

Evaluation is numpy-vectorized, so a compiled expression accepts scalars
or arrays of t.
"""

import re

import numpy as np

from .errors import ParseError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

CONSTANTS = {"pi": np.pi, "e": np.e}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            stray = src[pos:].lstrip()
            if not stray:
                break
            off = len(src) - len(stray)
            raise ParseError(off, ("number", "name", "operator"), stray[0])
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, src):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def fail(self, expected):
        tok = self.peek()
        if tok is None:
            raise ParseError(len(self.src), expected)
        raise ParseError(tok[2], expected, tok[1])

    def accept_op(self, *ops):
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in ops:
            self.i += 1
            return tok[1]
        return None

    def expect_op(self, op):
        if self.accept_op(op) is None:
            self.fail((repr(op),))

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            self.fail(("'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while True:
            op = self.accept_op("+", "-")
            if op is None:
                return node
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)

    def term(self):
        node = self.factor()
        while True:
            op = self.accept_op("*", "/")
            if op is None:
                return node
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)

    def factor(self):
        if self.accept_op("-"):
            return ("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept_op("^"):
            return ("pow", base, self.factor())
        return base

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.fail(("number", "name", "'('"))
        kind, text, off = tok
        if kind == "number":
            self.i += 1
            return ("const", float(text))
        if kind == "name":
            self.i += 1
            if text == "t":
                return ("var",)
            if text in CONSTANTS:
                return ("const", CONSTANTS[text])
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", text, arg)
            if text == "pow":
                self.expect_op("(")
                a = self.expr()
                self.expect_op(",")
                b = self.expr()
                self.expect_op(")")
                return ("pow", a, b)
            raise ParseError(
                off, ("'t'",) + tuple(sorted(FUNCTIONS)) + ("pow", "pi", "e"), text)
        if self.accept_op("("):
            node = self.expr()
            self.expect_op(")")
            return node
        self.fail(("number", "name", "'('"))


def _eval_node(node, t):
    op = node[0]
    if op == "const":
        return node[1]
    if op == "var":
        return t
    if op == "neg":
        return -_eval_node(node[1], t)
    if op == "call":
        return FUNCTIONS[node[1]](_eval_node(node[2], t))
    a = _eval_node(node[1], t)
    b = _eval_node(node[2], t)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return np.power(a, b)
    raise AssertionError(f"unknown node {op!r}")


def parse_expression(src):
    """Compile an expression string into a function of t."""
    if not src or not src.strip():
        raise ParseError(0, ("number", "name", "'('"))
    ast = _Parser(src).parse()

    def fn(t):
        with np.errstate(invalid="ignore", divide="ignore"):
            out = _eval_node(ast, np.asarray(t, dtype=float))
        return out + np.zeros_like(np.asarray(t, dtype=float))

    fn.source = src
    return fn
