"""Multivector fields with polynomial coefficients.

A degree-``k`` multivector on ``R^d`` is stored as a map from strictly
increasing index tuples ``(i1, ..., ik)`` (the basis ``d_i1 ^ ... ^ d_ik``)
to nonzero :class:`~nambu.poly.Polynomial` coefficients.  Degree 0 is a
plain function, stored under the empty tuple.

Sign conventions
----------------
``contract(L, f)`` is the interior product with ``df`` in the *first* slot:
the coefficient on ``J`` is ``sum_i (-1)**(pos - 1) * df/dx_i * L[J + {i}]``
where ``pos`` is the 1-based position of ``i`` inside the sorted ``J + {i}``.
Iterated contractions ``L_{f1,...,fk}`` apply ``f1`` first.

``schouten`` is the graded bracket that reduces to the Lie bracket on vector
fields, satisfies ``[X, f] = X(f)``, and on wedge products of vector fields
reproduces

    [X1^...^Xk, Y1^...^Yl] = sum_{i,j} (-1)**(i+j) [Xi, Yj] ^ X1..^Xi..Xk ^ Y1..^Yj..Yl.

With these choices ``[G, f] = (-1)**(deg G - 1) * contract(G, f)``, so a
bivector satisfies ``[G, f] = -G_f``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

from .poly import DimensionError, Polynomial, Scalar, partial

IndexSet = tuple[int, ...]
Coefficient = Union[Polynomial, int, Fraction]


def sort_sign(indices: Sequence[int]) -> tuple[int, IndexSet]:
    """Sign of the permutation sorting ``indices`` and the sorted tuple.

    Returns sign 0 when an index repeats.
    """
    idx = list(indices)
    sign = 1
    # insertion sort, counting transpositions
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            sign = -sign
            b -= 1
    for a in range(1, len(idx)):
        if idx[a] == idx[a - 1]:
            return 0, tuple(idx)
    return sign, tuple(idx)


class Multivector:
    """Immutable alternating contravariant tensor field of fixed degree."""

    __slots__ = ("dim", "degree", "terms", "_hash")

    def __init__(self, dim: int, degree: int, terms: Mapping[Sequence[int], Coefficient] | None = None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.dim = dim
        self.degree = degree
        acc: dict[IndexSet, Polynomial] = {}
        for idx, coeff in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index set {idx} does not have length {degree}")
            for i in idx:
                if not 1 <= i <= dim:
                    raise IndexError(f"basis d{i} outside dimension {dim}")
            if not isinstance(coeff, Polynomial):
                coeff = Polynomial.constant(dim, coeff)
            elif coeff.dim != dim:
                raise DimensionError(f"coefficient dimension {coeff.dim} != {dim}")
            sign, key = sort_sign(idx)
            if sign == 0:
                continue
            prev = acc.get(key)
            term = coeff if sign > 0 else -coeff
            acc[key] = term if prev is None else prev + term
        self.terms = {k: v for k, v in acc.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, degree: int, terms: dict[IndexSet, Polynomial]) -> "Multivector":
        mv = cls.__new__(cls)
        mv.dim = dim
        mv.degree = degree
        mv.terms = terms
        mv._hash = None
        return mv

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Multivector":
        return cls._raw(dim, degree, {})

    @classmethod
    def scalar(cls, f: Polynomial) -> "Multivector":
        return cls._raw(f.dim, 0, {(): f} if f else {})

    @classmethod
    def basis(cls, dim: int, *indices: int) -> "Multivector":
        """``d_i1 ^ ... ^ d_ik`` (unsorted indices allowed; sign applied)."""
        return cls(dim, len(indices), {indices: 1})

    @classmethod
    def vector_field(cls, components: Sequence[Coefficient], dim: int | None = None) -> "Multivector":
        dim = len(components) if dim is None else dim
        return cls(dim, 1, {(i + 1,): c for i, c in enumerate(components)})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, indices: Sequence[int]) -> Polynomial:
        sign, key = sort_sign(indices)
        c = self.terms.get(key)
        if sign == 0 or c is None:
            return Polynomial.zero(self.dim)
        return c if sign > 0 else -c

    def as_polynomial(self) -> Polynomial:
        if self.degree != 0:
            raise ValueError(f"degree-{self.degree} multivector is not a function")
        return self.terms.get((), Polynomial.zero(self.dim))

    def support(self) -> list[IndexSet]:
        return sorted(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Multivector):
            if self.dim != other.dim:
                return False
            if not self.terms and not other.terms:
                return True
            return self.degree == other.degree and self.terms == other.terms
        if isinstance(other, (Polynomial, int, Fraction)) and self.degree == 0:
            return self.as_polynomial() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, self.degree, frozenset(self.terms.items())))
        return self._hash

    # linear structure
    def _check(self, other: "Multivector") -> None:
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            if self.degree == 0 and isinstance(other, (Polynomial, int, Fraction)):
                other = Multivector.scalar(_as_poly(other, self.dim))
            else:
                return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError(f"cannot add degree {self.degree} and degree {other.degree}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out[k] + c if k in out else c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Multivector._raw(self.dim, self.degree, out)

    __radd__ = __add__

    def __neg__(self) -> "Multivector":
        return Multivector._raw(self.dim, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __mul__(self, other) -> "Multivector":
        """Multiplication by a function or scalar; use :func:`wedge` for multivectors."""
        if isinstance(other, Multivector):
            return wedge(self, other)
        if isinstance(other, (int, Fraction)):
            if not other:
                return Multivector.zero(self.dim, self.degree)
            return Multivector._raw(self.dim, self.degree, {k: c * other for k, c in self.terms.items()})
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
            out = {}
            for k, c in self.terms.items():
                p = c * other
                if p:
                    out[k] = p
            return Multivector._raw(self.dim, self.degree, out)
        return NotImplemented

    __rmul__ = __mul__

    def __xor__(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)

    def __str__(self) -> str:
        return format_multivector(self)

    def __repr__(self) -> str:
        return f"Multivector(dim={self.dim}, degree={self.degree}, {format_multivector(self)!r})"


def _as_poly(f, dim: int) -> Polynomial:
    if isinstance(f, Polynomial):
        if f.dim != dim:
            raise DimensionError(f"dimension mismatch: {dim} vs {f.dim}")
        return f
    if isinstance(f, Multivector):
        return f.as_polynomial()
    return Polynomial.constant(dim, f)


def _as_mv(a) -> Multivector:
    return a if isinstance(a, Multivector) else Multivector.scalar(a)


def wedge(a: Multivector, b: Multivector) -> Multivector:
    a, b = _as_mv(a), _as_mv(b)
    a._check(b)
    degree = a.degree + b.degree
    out: dict[IndexSet, Polynomial] = {}
    if degree > a.dim:
        return Multivector.zero(a.dim, degree)
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            sign, key = sort_sign(ia + ib)
            if not sign:
                continue
            p = ca * cb
            if sign < 0:
                p = -p
            out[key] = out[key] + p if key in out else p
    return Multivector._raw(a.dim, degree, {k: v for k, v in out.items() if v})


def wedge_all(fields: Iterable[Multivector], dim: int) -> Multivector:
    result = Multivector.scalar(Polynomial.constant(dim, 1))
    for x in fields:
        result = wedge(result, x)
    return result


def _contract_grad(L: Multivector, grad: Sequence[Polynomial]) -> Multivector:
    out: dict[IndexSet, Polynomial] = {}
    for idx, c in L.terms.items():
        for pos, i in enumerate(idx):
            g = grad[i - 1]
            if not g:
                continue
            key = idx[:pos] + idx[pos + 1:]
            p = g * c
            if pos % 2:
                p = -p
            out[key] = out[key] + p if key in out else p
    return Multivector._raw(L.dim, L.degree - 1, {k: v for k, v in out.items() if v})


def contract(L: Multivector, f: Polynomial) -> Multivector:
    """Interior product ``i_{df} L`` (``df`` inserted in the first slot)."""
    if L.degree < 1:
        raise ValueError("cannot contract a degree-0 multivector")
    f = _as_poly(f, L.dim)
    return _contract_grad(L, [partial(f, i) for i in range(1, L.dim + 1)])


def contract_all(L: Multivector, fs: Sequence[Polynomial]) -> Multivector:
    """``L_{f1,...,fk} = i_{df_k} ... i_{df_1} L``."""
    if len(fs) > L.degree:
        raise ValueError(f"cannot contract a degree-{L.degree} field with {len(fs)} functions")
    for f in fs:
        L = contract(L, f)
    return L


def bracket_eval(L: Multivector, fs: Sequence[Polynomial]) -> Polynomial:
    """The n-bracket ``{f1, ..., fn} = L_{f1,...,fn}``."""
    if len(fs) != L.degree:
        raise ValueError(f"bracket of a degree-{L.degree} field needs {L.degree} arguments, got {len(fs)}")
    return contract_all(L, fs).as_polynomial()


def hamiltonian(L: Multivector, fs: Sequence[Polynomial]) -> Multivector:
    """Hamiltonian vector field ``L_{f1,...,f_{n-1}}``."""
    if len(fs) != L.degree - 1:
        raise ValueError(f"hamiltonian field of a degree-{L.degree} field needs {L.degree - 1} functions, got {len(fs)}")
    return contract_all(L, fs)


def _right_slot_derivative(P: Multivector, i: int) -> Multivector:
    """Remove ``d_i`` from the last slot: coefficient sign ``(-1)**(k - pos)``."""
    out = {}
    k = P.degree
    for idx, c in P.terms.items():
        if i in idx:
            pos = idx.index(i) + 1
            key = idx[:pos - 1] + idx[pos:]
            out[key] = c if (k - pos) % 2 == 0 else -c
    return Multivector._raw(P.dim, k - 1, out)


def _coordinate_derivative(P: Multivector, i: int) -> Multivector:
    out = {}
    for idx, c in P.terms.items():
        dc = partial(c, i)
        if dc:
            out[idx] = dc
    return Multivector._raw(P.dim, P.degree, out)


def _half_bracket(P: Multivector, Q: Multivector) -> Multivector:
    degree = P.degree + Q.degree - 1
    acc = Multivector.zero(P.dim, degree)
    if P.degree == 0:
        return acc
    for i in range(1, P.dim + 1):
        rp = _right_slot_derivative(P, i)
        if not rp:
            continue
        dq = _coordinate_derivative(Q, i)
        if not dq:
            continue
        acc = acc + wedge(rp, dq)
    return acc


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket of multivector fields (degree p + q - 1)."""
    P, Q = _as_mv(P), _as_mv(Q)
    P._check(Q)
    p, q = P.degree, Q.degree
    if p == 0 and q == 0:
        return Multivector.zero(P.dim, 0)
    degree = p + q - 1
    first = _half_bracket(P, Q)
    second = _half_bracket(Q, P)
    if ((p - 1) * (q - 1)) % 2 == 0:
        result = first - second
    else:
        result = first + second
    if not result:
        return Multivector.zero(P.dim, degree)
    return result


def lie_bracket(X: Multivector, Y: Multivector) -> Multivector:
    if X.degree != 1 or Y.degree != 1:
        raise ValueError("lie_bracket expects vector fields")
    return schouten(X, Y)


def s_operator(G: Multivector, fs: Sequence[Polynomial]) -> Polynomial:
    """``s(G)(f1..fn) = sum_i (-1)**(i+1) f_i G_{f1..^fi..fn}``."""
    n = G.degree + 1
    if len(fs) != n:
        raise ValueError(f"s-operator of a degree-{G.degree} field needs {n} arguments, got {len(fs)}")
    fs = [_as_poly(f, G.dim) for f in fs]
    total = Polynomial.zero(G.dim)
    if not G:
        return total
    for i, f in enumerate(fs):
        if not f:
            continue
        rest = fs[:i] + fs[i + 1:]
        term = f * bracket_eval(G, rest)
        total = total + term if i % 2 == 0 else total - term
    return total


def nj_bracket_eval(D: Multivector, G: Multivector | None, fs: Sequence[Polynomial]) -> Polynomial:
    """Nambu-Jacobi bracket ``(D + s(G))(f1, ..., fn)``."""
    if G is not None:
        D._check(G)
        if G.degree != D.degree - 1:
            raise ValueError(f"gamma must have degree {D.degree - 1}, got {G.degree}")
    value = bracket_eval(D, fs)
    if G is not None and G:
        value = value + s_operator(G, fs)
    return value


def coordinate_functions(dim: int, indices: Iterable[int]) -> list[Polynomial]:
    return [Polynomial.var(dim, i) for i in indices]


def index_sets(dim: int, degree: int) -> list[IndexSet]:
    return list(combinations(range(1, dim + 1), degree))


def _format_term(c: Polynomial, basis: str) -> tuple[str, str]:
    """Sign and body of one ``coefficient * basis`` term."""
    if len(c.terms) == 1:
        (m, q), = c.terms.items()
        sign = "-" if q < 0 else "+"
        mag = Polynomial._raw(c.dim, {m: abs(q)})
        if not m and abs(q) == 1:
            return sign, basis
        return sign, f"{mag}*{basis}"
    return "+", f"({c})*{basis}"


def format_multivector(L: Multivector) -> str:
    """Render in the textual syntax accepted by :func:`nambu.parse.parse_multivector`."""
    if not L.terms:
        return "0"
    if L.degree == 0:
        return str(L.terms[()])
    out = []
    for idx in sorted(L.terms):
        sign, body = _format_term(L.terms[idx], "^".join(f"d{i}" for i in idx))
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)
