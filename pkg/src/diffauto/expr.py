"""Text grammar for differential polynomials.

::

    expr     := ['-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' nat)*
    atom     := rational | var | '(' expr ')'
    rational := int ('/' posint)?
    var      := name ('_(' nat (',' nat)* ')')?

A bare name is the generator with the zero operator; ``x_(1,1)`` is
x^{d_1 d_2} and must list exactly ``m`` entries.  The leading sign is the
only unary operator.  :func:`format_poly` emits this same grammar with terms
in canonical (descending) monomial order, so parse/format round-trips.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .algebra import DiffPolynomial, DiffVar, Monomial, generator_key
from .errors import ParseError

__all__ = ["default_names", "format_poly", "format_rational", "parse_poly"]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[-+*/^(),_])
    """,
    re.VERBOSE,
)


def default_names(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("z",)
    if n == 2:
        return ("x", "y")
    return tuple(f"z{i + 1}" for i in range(n))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, m: int, names: Sequence[str]):
        self.text = text
        self.m = m
        self.names = {name: i for i, name in enumerate(names)}
        self.n = len(names)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> tuple[str, str, int]:
        tok = self.take()
        if tok[1] != value:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", tok[2], self.text)
        return tok

    def nat(self) -> int:
        kind, value, pos = self.take()
        if kind != "num":
            raise ParseError(f"expected a non-negative integer, found {value or 'end of input'!r}", pos, self.text)
        return int(value)

    def parse(self) -> DiffPolynomial:
        result = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos, self.text)
        return result

    def expr(self) -> DiffPolynomial:
        negate = False
        if self.peek()[1] == "-":
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while self.peek()[1] in ("+", "-"):
            sign = self.take()[1]
            t = self.term()
            acc = acc + t if sign == "+" else acc - t
        return acc

    def term(self) -> DiffPolynomial:
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> DiffPolynomial:
        base = self.atom()
        while self.peek()[1] == "^":
            self.take()
            base = base ** self.nat()
        return base

    def atom(self) -> DiffPolynomial:
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            num = int(value)
            if self.peek()[1] == "/":
                self.take()
                dpos = self.peek()[2]
                den = self.nat()
                if den == 0:
                    raise ParseError("zero denominator", dpos, self.text)
                return DiffPolynomial.const(self.n, self.m, Fraction(num, den))
            return DiffPolynomial.const(self.n, self.m, num)
        if kind == "name":
            self.take()
            if value not in self.names:
                known = ", ".join(self.names) or "none"
                raise ParseError(f"unknown variable {value!r} (expected one of: {known})", pos, self.text)
            op = (0,) * self.m
            if self.peek()[1] == "_":
                self.take()
                self.expect("(")
                entries = [self.nat()]
                while self.peek()[1] == ",":
                    self.take()
                    entries.append(self.nat())
                close = self.expect(")")
                if len(entries) != self.m:
                    raise ParseError(
                        f"multi-index has {len(entries)} entries but m={self.m}", close[2], self.text
                    )
                op = tuple(entries)
            return DiffPolynomial.gen(self.n, self.m, self.names[value], op)
        if value == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos, self.text)


def parse_poly(text: str, m: int, names: Sequence[str] = ("x", "y")) -> DiffPolynomial:
    """Parse ``text`` into a polynomial whose indeterminates are ``names``."""
    return _Parser(text, m, names).parse()


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_generator(g: DiffVar, names: Sequence[str]) -> str:
    name = names[g.var]
    if any(g.op):
        return f"{name}_({','.join(map(str, g.op))})"
    return name


def _format_monomial(mono: Monomial, names: Sequence[str]) -> str:
    parts = []
    for g, e in sorted(mono, key=lambda f: generator_key(f[0]), reverse=True):
        s = _format_generator(g, names)
        parts.append(f"{s}^{e}" if e > 1 else s)
    return "*".join(parts)


def format_poly(p: DiffPolynomial, names: Sequence[str] | None = None) -> str:
    """Canonical text: greatest monomial first, lowest-terms coefficients."""
    if names is None:
        names = default_names(p.n)
    if p.is_zero():
        return "0"
    out = []
    for i, (mono, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = _format_monomial(mono, names)
        else:
            body = f"{format_rational(a)}*{_format_monomial(mono, names)}"
        if i == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)
