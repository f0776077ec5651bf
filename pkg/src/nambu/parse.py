"""Recursive-descent parser for polynomials, multivectors and structure constants.

Grammar::

    expression := ['+'|'-'] term (('+'|'-') term)*
    term       := power ('*' power)*
    power      := atom ('^' (posint | atom))*
    atom       := int ['/' int] | 'x' posint | 'd' posint | '(' expression ')'

``^`` followed by an integer raises a function to a power; followed by
anything else it is the wedge product (``d1^d2^d3``).  ``*`` multiplies by
functions and wedges multivectors.  Structure constants are lines of the form
``c[k; i1,...,in] = rational``; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .filippov import StructureConstants
from .multivector import Multivector, wedge
from .poly import Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column, self.message = line, col, message
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>x\d+)|(?P<basis>d\d+)|(?P<op>[-+*^/()]))")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        return ParseError(message, self.text, (tok or self.tok).pos)

    def take(self, kind: str, value: str | None = None) -> _Token:
        t = self.tok
        if t.kind != kind or (value is not None and t.value != value):
            want = value or kind
            got = t.value or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        self.i += 1
        return t

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def parse(self) -> Multivector:
        if self.at("end"):
            raise self.error("empty expression")
        value = self.expression()
        if not self.at("end"):
            raise self.error(f"unexpected {self.tok.value!r}")
        return value

    def _add(self, a: Multivector, b: Multivector, tok: _Token) -> Multivector:
        if a and b and a.degree != b.degree:
            raise self.error(f"cannot add degree {a.degree} and degree {b.degree} terms", tok)
        return a + b

    def expression(self) -> Multivector:
        sign = 1
        if self.at("op", "+") or self.at("op", "-"):
            sign = -1 if self.take("op").value == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.at("op", "+") or self.at("op", "-"):
            op = self.take("op")
            rhs = self.term()
            value = self._add(value, rhs if op.value == "+" else -rhs, op)
        return value

    def term(self) -> Multivector:
        value = self.power()
        while self.at("op", "*"):
            op = self.take("op")
            value = self._wedge(value, self.power(), op)
        return value

    def _wedge(self, a: Multivector, b: Multivector, tok: _Token) -> Multivector:
        if a.degree + b.degree > self.dim:
            raise self.error(f"wedge of degree {a.degree + b.degree} exceeds dimension {self.dim}", tok)
        return wedge(a, b)

    def power(self) -> Multivector:
        value = self.atom()
        while self.at("op", "^"):
            op = self.take("op")
            if self.at("int"):
                exp_tok = self.take("int")
                if value.degree != 0:
                    raise self.error("only functions can be raised to a power", op)
                value = Multivector.scalar(value.as_polynomial() ** int(exp_tok.value))
            else:
                value = self._wedge(value, self.atom(), op)
        return value

    def _index(self, tok: _Token) -> int:
        i = int(tok.value[1:])
        if not 1 <= i <= self.dim:
            raise self.error(f"index {i} out of range 1..{self.dim}", tok)
        return i

    def atom(self) -> Multivector:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            num = int(t.value)
            if self.at("op", "/"):
                self.i += 1
                den_tok = self.take("int")
                den = int(den_tok.value)
                if den == 0:
                    raise self.error("division by zero", den_tok)
                return Multivector.scalar(Polynomial.constant(self.dim, Fraction(num, den)))
            return Multivector.scalar(Polynomial.constant(self.dim, num))
        if t.kind == "var":
            self.i += 1
            return Multivector.scalar(Polynomial.var(self.dim, self._index(t)))
        if t.kind == "basis":
            self.i += 1
            return Multivector.basis(self.dim, self._index(t))
        if self.at("op", "("):
            self.i += 1
            value = self.expression()
            self.take("op", ")")
            return value
        got = t.value or "end of input"
        raise self.error(f"expected a number, variable, basis symbol or '(', found {got!r}")


def parse_multivector(text: str, dim: int, degree: int | None = None) -> Multivector:
    value = _Parser(text, dim).parse()
    if degree is not None and value and value.degree != degree:
        raise ParseError(f"expected a degree-{degree} multivector, got degree {value.degree}", text, 0)
    if degree is not None and not value:
        return Multivector.zero(dim, degree)
    return value


def parse_polynomial(text: str, dim: int) -> Polynomial:
    value = _Parser(text, dim).parse()
    if value and value.degree != 0:
        raise ParseError(f"expected a function, got a degree-{value.degree} multivector", text, 0)
    return value.as_polynomial() if value.degree == 0 else Polynomial.zero(dim)


def parse_polynomial_list(text: str, dim: int) -> list[Polynomial]:
    """Comma-separated functions, e.g. ``"x1*x4 + x2*x5, x3"``."""
    if not text.strip():
        return []
    return [parse_polynomial(part, dim) for part in text.split(",")]


def parse_multivector_list(text: str, dim: int, degree: int | None = None) -> list[Multivector]:
    """Semicolon-separated multivectors, e.g. ``"d1; x1*d2"``."""
    return [parse_multivector(part, dim, degree) for part in text.split(";") if part.strip()]


_CONST = re.compile(r"^\s*c\s*\[\s*(\d+)\s*;\s*([\d\s,]+?)\s*\]\s*=\s*(.+?)\s*$")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


_DEFINITION = re.compile(r"c\s*\[[^\]]*\]\s*=\s*[^;\n]*")


def parse_constants(text: str, dim: int) -> StructureConstants:
    """Structure constants from ``c[k; i1,...,in] = value`` lines (or ``;``-joined)."""
    clean = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
    entries = {}
    arity = None
    last = 0
    for m in _DEFINITION.finditer(clean):
        gap = clean[last:m.start()]
        if gap.strip(" \t\r\n;"):
            bad = last + len(gap) - len(gap.lstrip(" \t\r\n;"))
            raise ParseError("expected 'c[k; i1,...,in] = rational'", text, bad)
        last = m.end()
        start = m.start()
        d = _CONST.match(m.group())
        if not d:
            raise ParseError("expected 'c[k; i1,...,in] = rational'", text, start)
        k = int(d.group(1))
        idx = tuple(int(s) for s in d.group(2).replace(" ", "").split(",") if s)
        value = d.group(3).replace(" ", "")
        if not _RATIONAL.match(value):
            raise ParseError(f"bad rational {d.group(3)!r}", text, start)
        if arity is None:
            arity = len(idx)
        elif len(idx) != arity:
            raise ParseError(f"inconsistent arity: {len(idx)} after {arity}", text, start)
        for i in (k, *idx):
            if not 1 <= i <= dim:
                raise ParseError(f"index {i} out of range 1..{dim}", text, start)
        if len(set(idx)) != len(idx):
            raise ParseError(f"repeated input index in {idx}", text, start)
        if Fraction(value.split("/")[1] if "/" in value else 1) == 0:
            raise ParseError("division by zero", text, start)
        key = (k, tuple(sorted(idx)))
        if key in entries:
            raise ParseError(f"constant c[{k}; {','.join(map(str, key[1]))}] defined twice", text, start)
        entries[key] = (idx, Fraction(value))
    tail = clean[last:]
    if tail.strip(" \t\r\n;"):
        raise ParseError("expected 'c[k; i1,...,in] = rational'", text, last + len(tail) - len(tail.lstrip(" \t\r\n;")))
    if arity is None:
        raise ParseError("no structure constants given", text, 0)
    return StructureConstants(dim, arity, {(k, idx): c for (k, _), (idx, c) in entries.items()})


def parse_constants_with_arity(text: str, dim: int, arity: int) -> StructureConstants:
    """Like :func:`parse_constants` but also accepts an empty (zero) bracket."""
    if not re.sub(r"#.*", "", text).strip():
        return StructureConstants(dim, arity)
    S = parse_constants(text, dim)
    if S.arity != arity:
        raise ParseError(f"expected arity {arity}, got {S.arity}", text, 0)
    return S


def parse_expression(text: str, dim: int) -> Polynomial | Multivector | StructureConstants:
    """Dispatch on syntax: structure constants, a function, or a multivector."""
    if text.lstrip().startswith("c"):
        return parse_constants(text, dim)
    value = _Parser(text, dim).parse()
    return value.as_polynomial() if value.degree == 0 else value
