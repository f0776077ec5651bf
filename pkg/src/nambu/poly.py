"""Exact sparse multivariate polynomials with rational coefficients.

Coordinates are 1-based: ``x1, ..., xd``.  A :class:`Monomial` is a sorted
tuple of ``(index, exponent)`` pairs with positive exponents, and a
:class:`Polynomial` maps monomials to nonzero :class:`fractions.Fraction`
coefficients.  Both are immutable; equality is equality of canonical forms.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Tuple, Union

Monomial = Tuple[Tuple[int, int], ...]

ONE: Monomial = ()

Scalar = Union[int, Fraction]


class DimensionError(ValueError):
    """Operands live on coordinate spaces of different dimension."""


def monomial(exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> Monomial:
    """Canonical monomial from an index -> exponent mapping (zeros dropped)."""
    items = exponents.items() if isinstance(exponents, Mapping) else exponents
    merged: dict[int, int] = {}
    for i, e in items:
        if e < 0:
            raise ValueError(f"negative exponent {e} for x{i}")
        merged[i] = merged.get(i, 0) + e
    return tuple(sorted((i, e) for i, e in merged.items() if e))


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for i, e in b:
        out[i] = out.get(i, 0) + e
    return tuple(sorted(out.items()))


def grlex_key(m: Monomial, dim: int) -> tuple:
    """Graded-lexicographic sort key with x1 > x2 > ... > xd."""
    exps = dict(m)
    return (monomial_degree(m), tuple(-exps.get(i, 0) for i in range(1, dim + 1)))


def monomials_up_to(dim: int, max_degree: int, min_degree: int = 0) -> list[Monomial]:
    """All monomials in ``dim`` variables with degree in [min_degree, max_degree], grlex order."""
    out: list[Monomial] = []

    def rec(start: int, remaining: int, acc: dict[int, int]) -> None:
        out.append(monomial(acc))
        if remaining == 0:
            return
        for i in range(start, dim + 1):
            acc[i] = acc.get(i, 0) + 1
            rec(i, remaining - 1, acc)
            acc[i] -= 1

    rec(1, max_degree, {})
    out = [m for m in set(out) if monomial_degree(m) >= min_degree]
    out.sort(key=lambda m: grlex_key(m, dim))
    return out


def _coerce_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial in ``dim`` variables over the rationals."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Monomial, Scalar] | None = None):
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = dim
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = _coerce_scalar(c)
                if c:
                    for i, _ in m:
                        if not 1 <= i <= dim:
                            raise IndexError(f"variable x{i} outside dimension {dim}")
                    clean[m] = c
        self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, dim: int, terms: dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.dim = dim
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls._raw(dim, {})

    @classmethod
    def constant(cls, dim: int, c: Scalar) -> "Polynomial":
        c = _coerce_scalar(c)
        return cls._raw(dim, {ONE: c} if c else {})

    @classmethod
    def var(cls, dim: int, i: int) -> "Polynomial":
        if not 1 <= i <= dim:
            raise IndexError(f"variable x{i} outside dimension {dim}")
        return cls._raw(dim, {((i, 1),): Fraction(1)})

    @classmethod
    def from_monomial(cls, dim: int, m: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls(dim, {m: c})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE in self.terms)

    def degree(self) -> int:
        return max((monomial_degree(m) for m in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({ONE: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    # arithmetic
    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.dim, other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.dim)
            return Polynomial._raw(self.dim, {m: c * other for m, c in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = monomial_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial._raw(self.dim, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(self.dim, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def partial(self, i: int) -> "Polynomial":
        return partial(self, i)

    def evaluate(self, point: Mapping[int, Scalar] | Iterable[Scalar]) -> Fraction:
        """Exact value at a rational point (mapping or 1-based sequence)."""
        if not isinstance(point, Mapping):
            point = {i + 1: v for i, v in enumerate(point)}
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for i, e in m:
                v *= Fraction(point[i]) ** e
            total += v
        return total

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        def key(t):
            deg, exps = grlex_key(t[0], self.dim)
            return (-deg, exps)

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.dim}, {format_polynomial(self)!r})"


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def partial(p: Polynomial, i: int) -> Polynomial:
    """Exact partial derivative with respect to ``x_i`` (1-based)."""
    if not 1 <= i <= p.dim:
        raise IndexError(f"coordinate index {i} outside 1..{p.dim}")
    out: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        for pos, (j, e) in enumerate(m):
            if j == i:
                if e == 1:
                    dm = m[:pos] + m[pos + 1:]
                else:
                    dm = m[:pos] + ((j, e - 1),) + m[pos + 1:]
                out[dm] = out.get(dm, 0) + c * e
                break
    return Polynomial._raw(p.dim, {m: c for m, c in out.items() if c})


def gradient(p: Polynomial) -> list[Polynomial]:
    return [partial(p, i) for i in range(1, p.dim + 1)]


def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial) -> str:
    return "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in m)


def format_polynomial(p: Polynomial) -> str:
    """Render in the textual syntax accepted by :func:`nambu.parse.parse_polynomial`."""
    if not p.terms:
        return "0"
    parts = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if not m:
            body = format_scalar(a)
        elif a == 1:
            body = format_monomial(m)
        else:
            body = f"{format_scalar(a)}*{format_monomial(m)}"
        if k == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)
