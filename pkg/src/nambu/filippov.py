"""Finite-dimensional Filippov (n-Lie) algebras given by structure constants.

The basis is ``e1, ..., em``.  Constants ``c[k; I]`` are stored only for
strictly increasing input tuples ``I``; access with any other ordering picks
up the sign of the sorting permutation, and repeated inputs give zero.
Vectors are tuples of :class:`~fractions.Fraction` of length ``m``.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import lcm, prod
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .multivector import Multivector, sort_sign
from .poly import Polynomial, format_scalar
from .verify import Verdict, Witness

Vector = tuple[Fraction, ...]
BasisTuple = tuple[int, ...]


class StructureConstants:
    """A skew n-bracket on an m-dimensional space."""

    __slots__ = ("dim", "arity", "constants")

    def __init__(self, dim: int, arity: int, constants: Mapping[tuple[int, Sequence[int]], object] | None = None):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.dim = dim
        self.arity = arity
        table: dict[tuple[int, BasisTuple], Fraction] = {}
        for (k, idx), c in (constants or {}).items():
            idx = tuple(idx)
            if len(idx) != arity:
                raise ValueError(f"input tuple {idx} does not have {arity} entries")
            for i in (k, *idx):
                if not 1 <= i <= dim:
                    raise IndexError(f"basis index {i} outside 1..{dim}")
            sign, key = sort_sign(idx)
            if sign == 0:
                raise ValueError(f"input tuple {idx} repeats an index")
            c = Fraction(c) * sign
            s = table.get((k, key), Fraction(0)) + c
            if s:
                table[(k, key)] = s
            else:
                table.pop((k, key), None)
        self.constants = table

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return (self.dim, self.arity, self.constants) == (other.dim, other.arity, other.constants)

    def __hash__(self) -> int:
        return hash((self.dim, self.arity, frozenset(self.constants.items())))

    def __repr__(self) -> str:
        return f"StructureConstants(dim={self.dim}, arity={self.arity}, {len(self.constants)} constants)"

    def __str__(self) -> str:
        return format_constants(self)

    def is_zero(self) -> bool:
        return not self.constants

    def basis_bracket(self, indices: Sequence[int]) -> dict[int, Fraction]:
        """``[e_i1, ..., e_in]`` as a sparse map ``k -> coefficient``."""
        sign, key = sort_sign(indices)
        if sign == 0:
            return {}
        return {k: c * sign for (k, I), c in self.constants.items() if I == key}

    def _by_input(self) -> dict[BasisTuple, dict[int, Fraction]]:
        out: dict[BasisTuple, dict[int, Fraction]] = {}
        for (k, I), c in self.constants.items():
            out.setdefault(I, {})[k] = c
        return out


def basis_vector(dim: int, i: int) -> Vector:
    if not 1 <= i <= dim:
        raise IndexError(f"basis index {i} outside 1..{dim}")
    return tuple(Fraction(int(j == i)) for j in range(1, dim + 1))


def vector(coords: Iterable) -> Vector:
    return tuple(Fraction(c) for c in coords)


def _sparse(v: Sequence) -> dict[int, Fraction]:
    return {i + 1: Fraction(c) for i, c in enumerate(v) if c}


def _sparse_bracket(S: StructureConstants, table, vs: Sequence[dict[int, Fraction]]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for choice in product(*(v.items() for v in vs)):
        idx = [i for i, _ in choice]
        sign, key = sort_sign(idx)
        if not sign:
            continue
        col = table.get(key)
        if not col:
            continue
        w = sign * prod(c for _, c in choice)
        for k, c in col.items():
            out[k] = out.get(k, 0) + w * c
    return {k: c for k, c in out.items() if c}


def bracket(S: StructureConstants, vs: Sequence[Sequence]) -> Vector:
    """Multilinear skew bracket ``[v1, ..., vn]``."""
    if len(vs) != S.arity:
        raise ValueError(f"bracket of arity {S.arity} got {len(vs)} vectors")
    for v in vs:
        if len(v) != S.dim:
            raise ValueError(f"vector of length {len(v)} in a {S.dim}-dimensional algebra")
    res = _sparse_bracket(S, S._by_input(), [_sparse(v) for v in vs])
    return tuple(res.get(k, Fraction(0)) for k in range(1, S.dim + 1))


def _fi_residual_basis(S, table, fs: BasisTuple, gs: BasisTuple) -> dict[int, Fraction]:
    def br(vs):
        return _sparse_bracket(S, table, vs)

    f_vecs = [{i: Fraction(1)} for i in fs]
    g_vecs = [{j: Fraction(1)} for j in gs]
    total = dict(br(f_vecs + [br(g_vecs)]))
    for pos in range(len(gs)):
        inner = br(f_vecs + [g_vecs[pos]])
        if not inner:
            continue
        term = br(g_vecs[:pos] + [inner] + g_vecs[pos + 1:])
        for k, c in term.items():
            total[k] = total.get(k, 0) - c
    return {k: c for k, c in total.items() if c}


def fi_residual(S: StructureConstants, fs: Sequence[Sequence], gs: Sequence[Sequence]) -> Vector:
    """LHS minus RHS of the fundamental identity on arbitrary vectors."""
    n = S.arity
    if len(fs) != n - 1 or len(gs) != n:
        raise ValueError(f"fundamental identity of arity {n} needs {n - 1} + {n} vectors")
    table = S._by_input()

    def br(vs):
        return _sparse_bracket(S, table, vs)

    fv = [_sparse(v) for v in fs]
    gv = [_sparse(v) for v in gs]
    total = dict(br(fv + [br(gv)]))
    for pos in range(n):
        term = br(gv[:pos] + [br(fv + [gv[pos]])] + gv[pos + 1:])
        for k, c in term.items():
            total[k] = total.get(k, 0) - c
    return tuple(total.get(k, Fraction(0)) for k in range(1, S.dim + 1))


def _basis_names(idx: BasisTuple) -> str:
    return ",".join(f"e{i}" for i in idx)


def check_filippov(S: StructureConstants) -> Verdict:
    """Fundamental identity on all increasing basis tuples; decides it on the whole space."""
    m, n = S.dim, S.arity
    if n < 2 or S.is_zero():
        return Verdict(True, check="filippov", checked=0)
    table = S._by_input()
    checked = 0
    for fs in combinations(range(1, m + 1), n - 1):
        for gs in combinations(range(1, m + 1), n):
            checked += 1
            r = _fi_residual_basis(S, table, fs, gs)
            if r:
                w = Witness(
                    tuple(basis_vector(m, i) for i in fs),
                    tuple(basis_vector(m, j) for j in gs),
                    tuple(r.get(k, Fraction(0)) for k in range(1, m + 1)),
                    f"fs=({_basis_names(fs)}), gs=({_basis_names(gs)})",
                )
                return Verdict(False, w, check="filippov", checked=checked)
    return Verdict(True, check="filippov", checked=checked)


def contract_algebra(S: StructureConstants, x: Sequence) -> StructureConstants:
    """Structure constants of ``[v1, ..., v_{n-1}]_x = [x, v1, ..., v_{n-1}]``."""
    if S.arity < 2:
        raise ValueError("cannot contract an algebra of arity < 2")
    if len(x) != S.dim:
        raise ValueError(f"vector of length {len(x)} in a {S.dim}-dimensional algebra")
    table = S._by_input()
    xs = _sparse(x)
    out = {}
    for J in combinations(range(1, S.dim + 1), S.arity - 1):
        col = _sparse_bracket(S, table, [xs] + [{j: Fraction(1)} for j in J])
        for k, c in col.items():
            out[(k, J)] = c
    return StructureConstants(S.dim, S.arity - 1, out)


def to_linear_multivector(S: StructureConstants) -> Multivector:
    """Degree-n field with coefficient ``sum_k c[k; I] x_k`` on ``d_I``."""
    terms: dict[BasisTuple, Polynomial] = {}
    for (k, I), c in S.constants.items():
        terms[I] = terms.get(I, Polynomial.zero(S.dim)) + Polynomial.var(S.dim, k) * c
    return Multivector(S.dim, S.arity, terms)


def from_linear_multivector(L: Multivector) -> StructureConstants:
    """Inverse of :func:`to_linear_multivector`; the field must be linear."""
    out = {}
    for I, coeff in L.terms.items():
        for mono, c in coeff.terms.items():
            if len(mono) != 1 or mono[0][1] != 1:
                raise ValueError(f"coefficient {coeff} on {I} is not linear")
            out[(mono[0][0], I)] = c
    return StructureConstants(L.dim, L.degree, out)


def polarization_vectors(dim: int) -> list[Vector]:
    """``e_i`` and ``e_i + e_j`` (i < j): enough to pin down a quadratic form."""
    vs = [basis_vector(dim, i) for i in range(1, dim + 1)]
    for i, j in combinations(range(1, dim + 1), 2):
        vs.append(tuple(a + b for a, b in zip(basis_vector(dim, i), basis_vector(dim, j))))
    return vs


def check_problem_hypothesis(S: StructureConstants) -> Verdict:
    """Is every contraction ``[., ..., .]_x`` a Filippov bracket?

    The fundamental-identity residual of the contracted bracket is quadratic
    in ``x``, so testing ``x`` on the polarization vectors decides it for
    every ``x``.
    """
    if S.arity < 3:
        raise ValueError("the contraction hypothesis needs arity >= 3")
    checked = 0
    for x in polarization_vectors(S.dim):
        checked += 1
        v = check_filippov(contract_algebra(S, x))
        if not v.passed:
            w = Witness((x,) + v.witness.fs, v.witness.gs, v.witness.residual, f"x={format_vector(x)}; {v.witness.label}")
            return Verdict(False, w, check="problem_hypothesis", checked=checked, details={"x": x})
    return Verdict(True, check="problem_hypothesis", checked=checked)


def format_vector(v: Sequence) -> str:
    return "[" + ", ".join(format_scalar(Fraction(c)) for c in v) + "]"


def format_constants(S: StructureConstants) -> str:
    """One ``c[k; i1,...,in] = value`` line per nonzero constant."""
    lines = []
    for (k, I), c in sorted(S.constants.items(), key=lambda t: (t[0][1], t[0][0])):
        lines.append(f"c[{k}; {','.join(map(str, I))}] = {format_scalar(c)}")
    return "\n".join(lines)


# -- counterexample search ------------------------------------------------

def _slots(dim: int, arity: int) -> list[tuple[int, BasisTuple]]:
    """Free constants ``(k, I)`` ordered by output index, then input tuple."""
    return [(k, I) for k in range(1, dim + 1) for I in combinations(range(1, dim + 1), arity)]


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _fi_zero_mask(T: np.ndarray, arity: int) -> np.ndarray:
    """Batch test of the fundamental identity on dense skew tensors.

    ``T`` has shape ``(batch, m, m, ..., m)`` with ``arity`` input axes.
    Returns a boolean array: True where the residual vanishes identically.
    """
    n = arity
    if n < 2:
        return np.ones(T.shape[0], dtype=bool)
    letters = iter(_LETTERS[2:])
    f = [next(letters) for _ in range(n - 1)]
    g = [next(letters) for _ in range(n)]
    b, k, l = "b", next(letters), next(letters)
    out = b + k + "".join(f) + "".join(g)
    R = np.einsum(f"{b}{l}{''.join(g)},{b}{k}{''.join(f)}{l}->{out}", T, T)
    for i in range(n):
        inner = f"{b}{l}{''.join(f)}{g[i]}"
        outer_in = g[:i] + [l] + g[i + 1:]
        R -= np.einsum(f"{inner},{b}{k}{''.join(outer_in)}->{out}", T, T)
    return ~R.reshape(R.shape[0], -1).any(axis=1)


def _dense_tensors(dim: int, arity: int, values: np.ndarray) -> np.ndarray:
    """Dense skew tensors from a ``(batch, n_slots)`` array of slot values."""
    batch = values.shape[0]
    T = np.zeros((batch, dim) + (dim,) * arity, dtype=np.int64)
    perms = [(p, sort_sign(p)[0]) for p in permutations(range(arity))]
    for s, (k, I) in enumerate(_slots(dim, arity)):
        col = values[:, s]
        for p, sign in perms:
            idx = tuple(I[j] - 1 for j in p)
            T[(slice(None), k - 1) + idx] = sign * col
    return T


def _classify(dim: int, arity: int, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hypothesis mask and Filippov mask for a batch of integer assignments."""
    T = _dense_tensors(dim, arity, values)
    hyp = np.ones(T.shape[0], dtype=bool)
    for x in polarization_vectors(dim):
        xv = np.array([int(c) for c in x], dtype=np.int64)
        Tx = np.tensordot(T, xv, axes=([2], [0]))
        hyp &= _fi_zero_mask(Tx, arity - 1)
    fil = np.zeros_like(hyp)
    if hyp.any():
        fil[hyp] = _fi_zero_mask(T[hyp], arity)
    return hyp, fil


def _scaled_coefficients(coeffs: Sequence[Fraction]) -> list[int]:
    """Integer multiples of the coefficients; the identity is homogeneous in them."""
    scale = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [int(c * scale) for c in coeffs]


@dataclass
class SearchReport:
    dim: int
    arity: int
    coefficients: list[str]
    mode: str
    seed: int | None
    start: int
    stop: int
    space_size: int | None
    examined: int = 0
    hypothesis_satisfied: int = 0
    filippov_among_hypothesis: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def counterexample_found(self) -> bool:
        return bool(self.counterexamples)

    def merge(self, other: "SearchReport") -> "SearchReport":
        self.examined += other.examined
        self.hypothesis_satisfied += other.hypothesis_satisfied
        self.filippov_among_hypothesis += other.filippov_among_hypothesis
        self.counterexamples.extend(other.counterexamples)
        return self

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "arity": self.arity,
            "coefficients": self.coefficients,
            "mode": self.mode,
            "seed": self.seed,
            "range": [self.start, self.stop],
            "space_size": self.space_size,
            "examined": self.examined,
            "hypothesis_satisfied": self.hypothesis_satisfied,
            "filippov_among_hypothesis": self.filippov_among_hypothesis,
            "counterexample_found": self.counterexample_found,
            "counterexamples": self.counterexamples,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        lines = [
            f"search m={self.dim} n={self.arity} C={{{', '.join(self.coefficients)}}} mode={self.mode}"
            + (f" seed={self.seed}" if self.seed is not None else "")
            + f" range=[{self.start}, {self.stop})",
            f"  examined: {self.examined}",
            f"  hypothesis satisfied: {self.hypothesis_satisfied}",
            f"  Filippov among them: {self.filippov_among_hypothesis}",
        ]
        if self.counterexamples:
            lines.append(f"  COUNTEREXAMPLES: {len(self.counterexamples)}")
            for ce in self.counterexamples:
                lines.append(f"  - assignment {ce['assignment']}: {ce['constants'].replace(chr(10), '; ')}")
                lines.append(f"    witness {ce['witness']}")
        else:
            lines.append("  no counterexample in this range")
        return "\n".join(lines)


def _digits(index: int, base: int, width: int) -> list[int]:
    out = [0] * width
    for s in range(width - 1, -1, -1):
        index, out[s] = divmod(index, base)
    return out


def _process_assignments(dim, arity, coeffs, scaled, rows, labels, batch_size) -> SearchReport:
    part = SearchReport(dim, arity, [], "", None, 0, 0, None)
    slots = _slots(dim, arity)
    for s in range(0, len(rows), batch_size):
        chunk = np.asarray(rows[s:s + batch_size], dtype=np.int64)
        vals = np.asarray(scaled, dtype=np.int64)[chunk]
        hyp, fil = _classify(dim, arity, vals)
        part.examined += len(chunk)
        part.hypothesis_satisfied += int(hyp.sum())
        part.filippov_among_hypothesis += int(fil.sum())
        for r in np.flatnonzero(hyp & ~fil):
            digits = chunk[r]
            S = StructureConstants(dim, arity, {slot: coeffs[d] for slot, d in zip(slots, digits)})
            v = check_filippov(S)
            if v.passed or not check_problem_hypothesis(S).passed:
                raise RuntimeError(f"vectorized and exact classifications disagree on assignment {labels[s + r]}")
            part.counterexamples.append({
                "assignment": labels[s + r],
                "constants": format_constants(S),
                "witness": v.witness.label,
                "residual": format_vector(v.witness.residual),
            })
    return part


def _exhaustive_range(dim, arity, coeffs, scaled, start, stop, batch_size) -> SearchReport:
    width = len(_slots(dim, arity))
    base = len(coeffs)
    rows = [_digits(i, base, width) for i in range(start, stop)]
    return _process_assignments(dim, arity, coeffs, scaled, rows, list(range(start, stop)), batch_size)


def search(
    dim: int,
    arity: int,
    coefficients: Sequence = (-1, 0, 1),
    mode: Literal["exhaustive", "random"] = "exhaustive",
    *,
    seed: int = 0,
    count: int = 1000,
    start: int = 0,
    stop: int | None = None,
    bound: int = 2 ** 24,
    workers: int = 1,
    batch_size: int = 512,
) -> SearchReport:
    """Hunt for brackets whose contractions are all Filippov but which are not.

    Exhaustive mode walks assignments ``start <= a < stop`` of coefficient
    values to the free constants (mixed radix, first constant most
    significant) and refuses ranges larger than ``bound``.  Random mode draws
    ``count`` assignments from a seeded generator.  Every counterexample is
    re-verified on the exact path and reported in full.
    """
    if not dim >= arity >= 3:
        raise ValueError("search needs dim >= arity >= 3")
    coeffs = sorted({Fraction(c) for c in coefficients})
    if not coeffs:
        raise ValueError("empty coefficient set")
    scaled = _scaled_coefficients(coeffs)
    width = len(_slots(dim, arity))
    names = [format_scalar(c) for c in coeffs]

    if mode == "random":
        rng = random.Random(seed)
        rows = [[rng.randrange(len(coeffs)) for _ in range(width)] for _ in range(count)]
        report = SearchReport(dim, arity, names, "random", seed, 0, count, None)
        labels = [f"sample {i}" for i in range(count)]
        return report.merge(_process_assignments(dim, arity, coeffs, scaled, rows, labels, batch_size))
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")

    space = len(coeffs) ** width
    stop = space if stop is None else min(stop, space)
    if not 0 <= start <= stop:
        raise ValueError(f"bad range [{start}, {stop})")
    if stop - start > bound:
        raise OverflowError(f"{stop - start} assignments exceed the exhaustive bound {bound}; narrow the range or raise the bound")
    report = SearchReport(dim, arity, names, "exhaustive", None, start, stop, space)
    if workers <= 1:
        return report.merge(_exhaustive_range(dim, arity, coeffs, scaled, start, stop, batch_size))
    step = max(batch_size, -(-(stop - start) // (4 * workers)))
    bounds = [(a, min(a + step, stop)) for a in range(start, stop, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_exhaustive_range, dim, arity, coeffs, scaled, a, b, batch_size) for a, b in bounds]
        for fut in futures:
            report.merge(fut.result())
    return report
