"""Text syntax for polynomials and vector fields.

Grammar (whitespace-insensitive)::

    field  := '0' | fterm (('+' | '-') fterm)*
    fterm  := ['-'] factor ('*' factor)* ['*' deriv] | deriv
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*        ('/' only by constants)
    unary  := '-' unary | power
    power  := atom ['^' integer]
    atom   := number | variable | '(' expr ')'
    deriv  := 'd/d' variable

Variables are z1, z2, ... (even) and e1, e2, ... (odd) unless an explicit
Space is given.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .superfields import Space, SuperPolynomial, SuperVectorField


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col
        self.reason = message


_TOKEN = re.compile(r"\s*(?:(?P<deriv>d/d[A-Za-z_][A-Za-z_0-9]*)|(?P<num>\d+)"
                    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            p = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[p]!r}", text, p)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


_VAR = re.compile(r"^([ze])(\d+)$")


def infer_space(text: str, min_even: int = 0) -> Space:
    d, m = min_even, 0
    for t in _tokenize(text):
        name = t.value[3:] if t.kind == "deriv" else t.value if t.kind == "name" else None
        if name is None:
            continue
        mm = _VAR.match(name)
        if not mm or int(mm.group(2)) < 1:
            raise ParseError(f"unknown variable {name!r}", text, t.pos)
        if mm.group(1) == "z":
            d = max(d, int(mm.group(2)))
        else:
            m = max(m, int(mm.group(2)))
    return Space.standard(d, m)


class _Parser:
    def __init__(self, text: str, space: Space):
        self.text = text
        self.space = space
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, self.text, tok.pos)

    def eat(self, value=None, kind=None):
        t = self.tok
        if (value is not None and t.value != value) or (kind is not None and t.kind != kind):
            want = value or kind
            got = t.value or "end of input"
            self.error(f"expected {want!r}, found {got!r}")
        self.i += 1
        return t

    def const(self, c) -> SuperPolynomial:
        return SuperPolynomial.const(self.space, c)

    # polynomial grammar
    def expr(self) -> SuperPolynomial:
        out = self.term()
        while self.tok.value in ("+", "-") and self.tok.kind == "op":
            op = self.eat().value
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> SuperPolynomial:
        out = self.unary()
        while self.tok.value in ("*", "/") and self.tok.kind == "op":
            if self.toks[self.i + 1].kind == "deriv":
                break
            op = self.eat()
            rhs = self.unary()
            if op.value == "*":
                out = out * rhs
            else:
                c = _constant(rhs)
                if c is None:
                    self.error("division only by nonzero constants", op)
                out = out * (1 / c)
        return out

    def unary(self) -> SuperPolynomial:
        if self.tok.value == "-" and self.tok.kind == "op":
            self.eat()
            return -self.unary()
        if self.tok.value == "+" and self.tok.kind == "op":
            self.eat()
            return self.unary()
        return self.power()

    def power(self) -> SuperPolynomial:
        start = self.tok
        base = self.atom()
        if self.tok.value == "^":
            self.eat()
            neg = False
            if self.tok.value == "-":
                neg = True
                self.eat()
            n = self.eat(kind="num")
            if neg:
                self.error("negative exponents are not allowed", n)
            k = int(n.value)
            if start.kind == "name" and base.parity == 1 and k > 1:
                self.error("odd variable raised to a power > 1", n)
            base = base ** k
        return base

    def atom(self) -> SuperPolynomial:
        t = self.tok
        if t.kind == "num":
            self.eat()
            return self.const(int(t.value))
        if t.kind == "name":
            self.eat()
            if t.value not in self.space.names:
                self.error(f"unknown variable {t.value!r}", t)
            return SuperPolynomial.var(self.space, t.value)
        if t.value == "(":
            self.eat()
            inner = self.expr()
            self.eat(")")
            return inner
        if t.kind == "deriv":
            self.error("derivation not allowed in a polynomial")
        self.error(f"unexpected {t.value or 'end of input'!r}")

    # vector field grammar
    def field(self) -> SuperVectorField:
        out = SuperVectorField(self.space)
        sign = 1
        if self.tok.value in ("+", "-") and self.tok.kind == "op":
            sign = -1 if self.eat().value == "-" else 1
        while True:
            out = out + self.fterm() * sign
            if self.tok.kind == "end":
                return out
            if self.tok.value not in ("+", "-"):
                self.error(f"unexpected {self.tok.value!r}")
            sign = -1 if self.eat().value == "-" else 1

    def fterm(self) -> SuperVectorField:
        if self.tok.kind == "deriv":
            coeff = self.const(1)
        else:
            coeff = self.term()
            self.eat("*")
        t = self.eat(kind="deriv")
        name = t.value[3:]
        if name not in self.space.names:
            self.error(f"unknown variable {name!r}", t)
        return SuperVectorField.partial(self.space, name).times(coeff)


def _constant(p: SuperPolynomial):
    if not p.terms:
        return None
    if len(p.terms) == 1:
        (e, o), c = next(iter(p.terms.items()))
        if not any(e) and not o:
            return c
    return None


def parse_poly(text: str, space: Space | None = None) -> SuperPolynomial:
    """Parse an exact polynomial such as "z1^2*z2 + 3/2*z2^3"."""
    if space is None:
        space = infer_space(text)
    p = _Parser(text, space)
    out = p.expr()
    if p.tok.kind != "end":
        p.error(f"unexpected {p.tok.value!r}")
    return out


def parse_field(text: str, space: Space | None = None) -> SuperVectorField:
    """Parse a vector field such as "z1*z2*d/dz1 + e1*d/de1"."""
    if space is None:
        space = infer_space(text)
    if text.strip() == "0":
        return SuperVectorField(space)
    return _Parser(text, space).field()
