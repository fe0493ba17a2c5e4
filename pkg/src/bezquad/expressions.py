"""Integrand expressions over the variables x and y.

Grammar (recursive descent, standard precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER | 'x' | 'y' | NAME '(' expr ')' | '(' expr ')'

Exponents must be nonnegative integer literals so that the total polynomial
degree of an expression is decidable syntactically.  An expression counts as
polynomial when it uses only +, -, *, integer ^, and division by constant
subexpressions; no simplification is attempted, so ``x*x - x^2`` is a
polynomial of degree 2 even though it is identically zero.
"""

from __future__ import annotations

import math

from .errors import ExpressionError
from .engine import Integrand

FUNCTIONS = {
    "sqrt": math.sqrt,
    "exp": math.exp,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "abs": abs,
}

_TOKEN_CHARS = set("+-*/^(),")


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _TOKEN_CHARS:
            tokens.append((c, c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                while k < n and text[k].isdigit():
                    k += 1
                j = k
            word = text[i:j]
            try:
                value = float(word)
            except ValueError:
                raise ExpressionError(f"bad number {word!r} at offset "
                                      f"{_byte_offset(text, i)}",
                                      offset=_byte_offset(text, i))
            # plain digit runs stay eligible as integer exponents
            if word.isdigit():
                tokens.append(("int", int(word), i))
            else:
                tokens.append(("num", value, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ExpressionError(f"unexpected character {c!r} at offset "
                              f"{_byte_offset(text, i)}",
                              offset=_byte_offset(text, i))
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message, token):
        offset = _byte_offset(self.text, token[2])
        raise ExpressionError(f"{message} at offset {offset}", offset=offset)

    def parse(self):
        node = self.expr()
        token = self.peek()
        if token[0] != "end":
            self.fail(f"unexpected {token[1]!r}", token)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        token = self.peek()
        if token[0] in ("+", "-"):
            self.advance()
            node = self.unary()
            return node if token[0] == "+" else ("neg", node)
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            token = self.advance()
            if token[0] != "int":
                self.fail("exponent must be a nonnegative integer literal", token)
            node = ("pow", node, token[1])
        return node

    def atom(self):
        token = self.advance()
        kind, value = token[0], token[1]
        if kind in ("num", "int"):
            return ("num", float(value))
        if kind == "name":
            if value in ("x", "y"):
                return ("var", value)
            if value in FUNCTIONS:
                opening = self.advance()
                if opening[0] != "(":
                    self.fail(f"expected '(' after {value}", opening)
                arg = self.expr()
                closing = self.advance()
                if closing[0] != ")":
                    self.fail("expected ')'", closing)
                return ("call", value, arg)
            self.fail(f"unknown identifier {value!r}", token)
        if kind == "(":
            node = self.expr()
            closing = self.advance()
            if closing[0] != ")":
                self.fail("expected ')'", closing)
            return node
        self.fail(f"unexpected {value!r}" if value is not None
                  else "unexpected end of input", token)


def _evaluate(node, x, y):
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "var":
        return x if node[1] == "x" else y
    if kind == "neg":
        return -_evaluate(node[1], x, y)
    if kind == "add":
        return _evaluate(node[1], x, y) + _evaluate(node[2], x, y)
    if kind == "sub":
        return _evaluate(node[1], x, y) - _evaluate(node[2], x, y)
    if kind == "mul":
        return _evaluate(node[1], x, y) * _evaluate(node[2], x, y)
    if kind == "div":
        return _evaluate(node[1], x, y) / _evaluate(node[2], x, y)
    if kind == "pow":
        return _evaluate(node[1], x, y) ** node[2]
    return FUNCTIONS[node[1]](_evaluate(node[2], x, y))


def _has_variables(node):
    kind = node[0]
    if kind == "var":
        return True
    if kind == "num":
        return False
    if kind in ("neg", "pow"):
        return _has_variables(node[1])
    if kind == "call":
        return _has_variables(node[2])
    return _has_variables(node[1]) or _has_variables(node[2])


def _degree(node):
    """Syntactic total degree, or None when the tree is not polynomial."""
    kind = node[0]
    if kind == "num":
        return 0
    if kind == "var":
        return 1
    if kind == "neg":
        return _degree(node[1])
    if kind in ("add", "sub"):
        a, b = _degree(node[1]), _degree(node[2])
        return None if a is None or b is None else max(a, b)
    if kind == "mul":
        a, b = _degree(node[1]), _degree(node[2])
        return None if a is None or b is None else a + b
    if kind == "div":
        if _has_variables(node[2]):
            return None
        return _degree(node[1])
    if kind == "pow":
        a = _degree(node[1])
        return None if a is None else a * node[2]
    return None  # function call


def parse_expression(text: str) -> Integrand:
    """Parse an integrand; polynomial_degree is set when the tree is polynomial."""
    node = _Parser(text).parse()

    def evaluator(x, y, _node=node):
        return float(_evaluate(_node, x, y))

    return Integrand(evaluator, _degree(node))
