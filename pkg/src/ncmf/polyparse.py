"""Parser and printer for the polynomial text format.

Grammar (whitespace is ignored)::

    expr   := ["-"] term (("+" | "-") term)*
    term   := coeff ("*" factor)* | factor ("*" factor)*
    factor := "x" INT ["^" INT]
    coeff  := INT ["/" INT]

Factors are read left to right as a noncommutative word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InhomogeneousInput, PolySyntaxError, UnknownGenerator

__all__ = ["Term", "Expr", "parse", "to_text", "parse_poly", "evaluate"]


@dataclass(frozen=True)
class Term:
    sign: int  # +1 or -1
    coeff: Fraction | None
    factors: tuple  # ((generator, exponent), ...), generators 1-based

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def word(self) -> tuple:
        return tuple(g - 1 for g, e in self.factors for _ in range(e))


@dataclass(frozen=True)
class Expr:
    terms: tuple


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<x>x)|(?P<op>[-+*/^])|(?P<bad>\S))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace is left
            break
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        if kind == "bad":
            raise PolySyntaxError(f"unexpected character {m.group('bad')!r}", start)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind, value=None):
        tok = self.toks[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise PolySyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def at(self, kind, value=None):
        tok = self.toks[self.i]
        return tok[0] == kind and (value is None or tok[1] == value)

    def expr(self) -> Expr:
        sign = 1
        if self.at("op", "-"):
            self.take("op")
            sign = -1
        terms = [self.term(sign)]
        while self.at("op", "+") or self.at("op", "-"):
            op = self.take("op")[1]
            terms.append(self.term(1 if op == "+" else -1))
        self.take("end")
        return Expr(tuple(terms))

    def term(self, sign: int) -> Term:
        coeff = None
        factors = []
        if self.at("int"):
            num = int(self.take("int")[1])
            if self.at("op", "/"):
                self.take("op")
                tok = self.take("int")
                den = int(tok[1])
                if den == 0:
                    raise PolySyntaxError("zero denominator", tok[2])
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
        else:
            factors.append(self.factor())
        while self.at("op", "*"):
            self.take("op")
            factors.append(self.factor())
        return Term(sign, coeff, tuple(factors))

    def factor(self):
        tok = self.peek()
        self.take("x")
        gtok = self.peek()
        if gtok[0] != "int" or gtok[2] != tok[2] + 1:
            raise PolySyntaxError("generator index must follow 'x'", gtok[2])
        self.take("int")
        g = int(gtok[1])
        if g < 1:
            raise PolySyntaxError("generator indices start at 1", gtok[2])
        e = 1
        if self.at("op", "^"):
            self.take("op")
            etok = self.take("int")
            e = int(etok[1])
            if e < 1:
                raise PolySyntaxError("exponent must be positive", etok[2])
        return (g, e)


def parse(text: str) -> Expr:
    """Parse text into an :class:`Expr`; raises PolySyntaxError with a position."""
    return _Parser(text).expr()


def _coeff_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term_text(t: Term) -> str:
    parts = [] if t.coeff is None else [_coeff_text(t.coeff)]
    parts += [f"x{g}" + (f"^{e}" if e > 1 else "") for g, e in t.factors]
    return "*".join(parts)


def to_text(e: Expr) -> str:
    """Inverse of :func:`parse` up to whitespace."""
    out = []
    for k, t in enumerate(e.terms):
        body = _term_text(t)
        if k == 0:
            out.append(("-" if t.sign < 0 else "") + body)
        else:
            out.append(("- " if t.sign < 0 else "+ ") + body)
    return " ".join(out)


def evaluate(e: Expr, A, degree: int | None = None):
    """Normal form of a parsed expression in the algebra A."""
    F = A.field
    degrees = set()
    terms = []
    for t in e.terms:
        for g, _ in t.factors:
            if g > A.n:
                raise UnknownGenerator(f"x{g} is not a generator (n = {A.n})")
        c = F.one if t.coeff is None else F.convert(t.coeff)
        if t.sign < 0:
            c = F.neg(c)
        if c == 0:
            continue
        degrees.add(t.degree)
        terms.append((c, t.word()))
    if len(degrees) > 1:
        raise InhomogeneousInput(f"terms of degrees {sorted(degrees)}")
    if degrees:
        (deg,) = degrees
        if degree is not None and deg != degree:
            raise InhomogeneousInput(f"expected degree {degree}, found {deg}")
    else:
        deg = 0 if degree is None else degree
    return A.element(terms, deg)


def parse_poly(text: str, A, degree: int | None = None):
    """Parse and normalize a homogeneous polynomial in A."""
    return evaluate(parse(text), A, degree)
