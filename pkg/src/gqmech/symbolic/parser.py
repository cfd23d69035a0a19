"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := ('+' | '-') unary | factor
    factor  := atom ('^' uint)?
    atom    := number | variable | 'i' | '(' expr ')'
    number  := digits ['.' digits] [exponent] | digits '/' digits
    variable:= 't' | 'q1'..'qm' | 'p0' | 'p1'..'pm'

Decimal literals are converted exactly (``0.1`` is 1/10, not the nearest
double). ``i`` is the imaginary unit, so printed complex polynomials parse
back unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .polynomial import Polynomial, variable_names
from .rational import ComplexRational

__all__ = ["ParseError", "poly_parse"]


class ParseError(ValueError):
    """Raised for malformed expressions; ``pos`` is the 0-based column."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<rational>\d+/\d+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        self.toks = _tokenize(text)
        self.i = 0
        self.names = set(variable_names(dim))

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.pos, self.text)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if self.tok.kind == "end":
            self.error("empty expression")
        result = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return result

    def expr(self) -> Polynomial:
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Polynomial:
        result = self.unary()
        while self.accept("*"):
            result = result * self.unary()
        return result

    def unary(self) -> Polynomial:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.factor()

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.accept("^"):
            tok = self.tok
            if tok.kind != "number" or not tok.text.isdigit():
                self.error("exponent must be a non-negative integer literal", tok)
            self.i += 1
            return base ** int(tok.text)
        return base

    def atom(self) -> Polynomial:
        tok = self.tok
        if tok.kind in ("number", "rational"):
            self.i += 1
            return Polynomial.constant(Fraction(tok.text), self.dim)
        if tok.kind == "name":
            self.i += 1
            if tok.text == "i":
                return Polynomial.constant(ComplexRational(0, 1), self.dim)
            if tok.text not in self.names:
                self.error(f"unknown variable {tok.text!r}", tok)
            return Polynomial.variable(tok.text, self.dim)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return inner
        if tok.kind == "end":
            self.error("unexpected end of expression")
        self.error(f"unexpected {tok.text!r}")


def poly_parse(text: str, dim: int) -> Polynomial:
    """Parse ``text`` into a canonical :class:`Polynomial` of dimension ``dim``."""
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    return _Parser(text, dim).parse()
