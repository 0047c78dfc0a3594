"""Recursive-descent parser for the polynomial expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | IDENT | 'i' | '(' expr ')'

Division is only allowed by a nonzero constant, which is how rational
literals such as ``1/27`` enter.  ``i`` is the imaginary unit unless it is
listed as a variable.
"""

from __future__ import annotations

import re
from typing import Sequence

from .algebra import Polynomial
from .errors import ParseError
from .field import I

__all__ = ["parse_poly", "infer_vars"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()−]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", pos + stripped, text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "op":
            if value == "−":
                value = "-"
            elif value == "**":
                value = "^"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vars: Sequence[str]):
        self.text = text
        self.vars = tuple(vars)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            q = self.unary()
            if tok[1] == "*":
                p = p * q
            else:
                if not q.is_constant():
                    raise self.error("division by a non-constant expression", tok)
                if q.is_zero():
                    raise self.error("division by zero", tok)
                p = p / q.constant_term()
        return p

    def unary(self) -> Polynomial:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            nxt = self.peek()
            if nxt[0] != "num":
                raise self.error("non-integer exponent: '^' needs a non-negative integer literal", nxt)
            self.take()
            if "." in nxt[1]:
                raise self.error("non-integer exponent", nxt)
            if self.peek()[:2] == ("op", "^"):
                raise self.error("chained exponents are ambiguous; use parentheses", self.peek())
            return base ** int(nxt[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            if "." in value:
                raise ParseError("decimal literals are not exact; write p/q", pos, self.text)
            return Polynomial.constant(int(value), self.vars)
        if kind == "ident":
            if value in self.vars:
                return Polynomial.variable(value, self.vars)
            if value == "i":
                return Polynomial.constant(I, self.vars)
            raise ParseError(f"unknown identifier {value!r}", pos, self.text)
        if (kind, value) == ("op", "("):
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return p
        if kind == "end":
            raise ParseError("unexpected end of expression", pos, self.text)
        raise ParseError(f"unexpected token {value!r}", pos, self.text)


def infer_vars(text: str) -> tuple:
    """Identifiers of ``text`` in sorted order, ``i`` excluded."""
    names = {v for kind, v, _ in _tokenize(text) if kind == "ident" and v != "i"}
    return tuple(sorted(names))


def parse_poly(text: str, vars: Sequence[str] | None = None) -> Polynomial:
    """Parse ``text`` into an exact polynomial in the ordered context ``vars``
    (sorted identifiers of the text when omitted)."""
    if vars is None:
        vars = infer_vars(text)
    if len(set(vars)) != len(tuple(vars)):
        raise ValueError(f"duplicate variable names in {list(vars)}")
    return _Parser(text, vars).parse()

