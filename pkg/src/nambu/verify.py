"""Decision procedures for Nambu-Poisson and Nambu-Jacobi structures.

Every check returns a :class:`Verdict`.  A failing verdict carries a
:class:`Witness` whose arguments, fed back into the matching identity
evaluator, reproduce the stored nonzero residual exactly.

The enumerating checks test the identities on tuples of monomials of degree
at most ``max_degree``.  Each residual is multilinear in its function
arguments and depends only on their 2-jets, and monomials of degree <= 2 span
every 2-jet at every point, so ``max_degree=2`` already decides the identity
for polynomial tensors.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Literal, Sequence

from .multivector import (
    Multivector,
    bracket_eval,
    contract,
    contract_all,
    coordinate_functions,
    hamiltonian,
    nj_bracket_eval,
    schouten,
    wedge,
    wedge_all,
)
from .poly import Polynomial, format_scalar, monomials_up_to


def _fmt(obj) -> str:
    if isinstance(obj, tuple):
        return "[" + ", ".join(format_scalar(c) for c in obj) + "]"
    return str(obj)


@dataclass(frozen=True)
class Witness:
    """Arguments violating an identity together with the nonzero residual.

    ``fs`` and ``gs`` are the two argument groups of the fundamental identity;
    checks that are not of that shape put their functions in ``fs``.
    """

    fs: tuple[Polynomial, ...]
    gs: tuple[Polynomial, ...]
    residual: Polynomial | Multivector
    label: str = ""

    @property
    def argument_tuple(self) -> tuple[Polynomial, ...]:
        return self.fs + self.gs

    def to_dict(self) -> dict:
        out = {
            "fs": [_fmt(f) for f in self.fs],
            "gs": [_fmt(g) for g in self.gs],
            "residual": _fmt(self.residual),
        }
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class Verdict:
    passed: bool
    witness: Witness | None = None
    check: str = ""
    checked: int = 0
    exhaustive: bool = True
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "passed": self.passed,
            "checked": self.checked,
            "exhaustive": self.exhaustive,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


@dataclass(frozen=True)
class CheckConfig:
    max_degree: int = 2
    mode: Literal["exhaustive", "random"] = "exhaustive"
    samples: int = 1000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    @property
    def exhaustive(self) -> bool:
        return self.mode == "exhaustive"

    def to_dict(self) -> dict:
        out = {"max_degree": self.max_degree, "mode": self.mode, "workers": self.workers}
        if self.mode == "random":
            out.update(samples=self.samples, seed=self.seed)
        return out


DEFAULT_CONFIG = CheckConfig()


def probe_functions(dim: int, max_degree: int, include_constants: bool) -> list[Polynomial]:
    """Monomials of degree <= max_degree in graded-lex order, as polynomials."""
    monos = monomials_up_to(dim, max_degree, min_degree=0 if include_constants else 1)
    return [Polynomial.from_monomial(dim, m) for m in monos]


def _index_tuples(pool: int, k: int, cfg: CheckConfig) -> list[tuple[int, ...]]:
    """Strictly increasing index tuples, all of them or a seeded sample in canonical order."""
    if not cfg.exhaustive and comb(pool, k) > cfg.samples:
        rng = random.Random(cfg.seed)
        picked = {tuple(sorted(rng.sample(range(pool), k))) for _ in range(cfg.samples)}
        return sorted(picked)
    return list(combinations(range(pool), k))


def _first_failure(evaluate: Callable, items: Sequence, workers: int):
    """Index and result of the first item whose evaluation is not None.

    With several workers the items are split into ordered chunks; the
    canonical first failure wins regardless of scheduling.
    """
    if workers <= 1 or len(items) < 2 * workers:
        for k, item in enumerate(items):
            r = evaluate(item)
            if r is not None:
                return k, r
        return None
    size = max(1, len(items) // (4 * workers))
    chunks = [items[i:i + size] for i in range(0, len(items), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for c, found in enumerate(pool.map(partial(_scan_chunk, evaluate), chunks)):
            if found is not None:
                k, r = found
                return c * size + k, r
    return None


def _scan_chunk(evaluate: Callable, chunk: Sequence):
    for k, item in enumerate(chunk):
        r = evaluate(item)
        if r is not None:
            return k, r
    return None


def _support_coordinates(R: Multivector) -> tuple[Polynomial, ...]:
    return tuple(coordinate_functions(R.dim, R.support()[0]))


def _require_degree(L: Multivector, degree: int, name: str) -> None:
    if L.degree != degree:
        raise ValueError(f"{name} expects a degree-{degree} multivector, got degree {L.degree}")


# -- Poisson and Nambu-Poisson ------------------------------------------------

def check_poisson(L: Multivector) -> Verdict:
    """Bivector ``L`` is Poisson iff ``[L, L] = 0``.

    On failure the witness arguments are the coordinate functions of the
    first nonzero component of ``[L, L]``, split as ``fs=(x_a,)``,
    ``gs=(x_b, x_c)`` for replay through :func:`check_fi_direct`.
    """
    _require_degree(L, 2, "check_poisson")
    R = schouten(L, L)
    if not R:
        return Verdict(True, check="poisson", checked=1)
    xs = _support_coordinates(R)
    return Verdict(False, Witness(xs[:1], xs[1:], R, "[L,L]"), check="poisson", checked=1)


def _np_residual(L: Multivector, fs: Sequence[Polynomial]) -> Multivector | None:
    R = schouten(hamiltonian(L, fs), L)
    return R if R else None


def _np_eval(L: Multivector, funcs: Sequence[Polynomial], tup: tuple[int, ...]):
    return _np_residual(L, [funcs[i] for i in tup])


def check_nambu_poisson(L: Multivector, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    """``[L_{f1..f_{n-1}}, L] = 0`` for all (n-1)-tuples of nonconstant monomials.

    The witness carries the violating ``fs`` and, as ``gs``, the coordinate
    functions of the first nonzero component of the residual tensor; the
    fundamental-identity residual on ``(fs, gs)`` equals that component.
    """
    n = L.degree
    if n < 2:
        raise ValueError("check_nambu_poisson needs degree >= 2")
    if n == 2:
        return check_poisson(L)
    if not L:
        return Verdict(True, check="nambu_poisson", checked=0, exhaustive=cfg.exhaustive)
    funcs = probe_functions(L.dim, cfg.max_degree, include_constants=False)
    tuples = _index_tuples(len(funcs), n - 1, cfg)
    found = _first_failure(partial(_np_eval, L, funcs), tuples, cfg.workers)
    if found is None:
        return Verdict(True, check="nambu_poisson", checked=len(tuples), exhaustive=cfg.exhaustive)
    k, R = found
    fs = tuple(funcs[i] for i in tuples[k])
    return Verdict(
        False,
        Witness(fs, _support_coordinates(R), R, "[L_fs, L]"),
        check="nambu_poisson",
        checked=k + 1,
        exhaustive=cfg.exhaustive,
    )


# -- fundamental identity --------------------------------------------------

def fi_residual(
    D: Multivector, G: Multivector | None, fs: Sequence[Polynomial], gs: Sequence[Polynomial]
) -> Polynomial:
    """LHS minus RHS of the fundamental identity for the bracket ``D + s(G)``."""
    n = D.degree
    if len(fs) != n - 1 or len(gs) != n:
        raise ValueError(f"fundamental identity of order {n} needs {n - 1} + {n} arguments")

    def br(args):
        return nj_bracket_eval(D, G, args)

    fs, gs = list(fs), list(gs)
    total = br(fs + [br(gs)])
    for i, g in enumerate(gs):
        total = total - br(gs[:i] + [br(fs + [g])] + gs[i + 1:])
    return total


def check_fi_direct(
    bracket: Multivector | tuple[Multivector, Multivector | None],
    fs: Sequence[Polynomial],
    gs: Sequence[Polynomial],
) -> Verdict:
    """Evaluate the fundamental identity on concrete functions."""
    D, G = bracket if isinstance(bracket, tuple) else (bracket, None)
    fs = tuple(fs)
    gs = tuple(gs)
    r = fi_residual(D, G, fs, gs)
    if not r:
        return Verdict(True, check="fi_direct", checked=1)
    return Verdict(False, Witness(fs, gs, r, "FI"), check="fi_direct", checked=1)


def _nj_eval(D, G, funcs, gs_tuples, inner_g, fs_tuple):
    """First violating g-tuple for a fixed f-tuple (or None)."""
    fs = [funcs[i] for i in fs_tuple]

    def br(args):
        return nj_bracket_eval(D, G, args)

    inner_f = {}
    for gt in gs_tuples:
        total = br(fs + [inner_g[gt]])
        for pos, gi in enumerate(gt):
            if gi not in inner_f:
                inner_f[gi] = br(fs + [funcs[gi]])
            args = [funcs[j] for j in gt]
            args[pos] = inner_f[gi]
            total = total - br(args)
        if total:
            return gt, total
    return None


def check_nambu_jacobi(
    D: Multivector, G: Multivector | None, cfg: CheckConfig = DEFAULT_CONFIG
) -> Verdict:
    """Fundamental identity for the bracket ``D + s(G)``.

    Order 2 is decided exactly by :func:`check_jacobi_pair`.  From order 3 the
    identity is tested on strictly increasing monomial tuples (constants
    included, since ``s(G)`` sees function values).
    """
    n = D.degree
    if G is None:
        G = Multivector.zero(D.dim, n - 1)
    if G.degree != n - 1 or G.dim != D.dim:
        raise ValueError(f"gamma must be a degree-{n - 1} field on the same space")
    if n < 2:
        raise ValueError("check_nambu_jacobi needs order >= 2")
    if n == 2:
        return check_jacobi_pair(D, G)
    if not D and not G:
        return Verdict(True, check="nambu_jacobi", checked=0, exhaustive=cfg.exhaustive)
    funcs = probe_functions(D.dim, cfg.max_degree, include_constants=True)
    gs_tuples = list(combinations(range(len(funcs)), n))
    fs_tuples = list(combinations(range(len(funcs)), n - 1))
    if not cfg.exhaustive:
        return _check_nambu_jacobi_random(D, G, funcs, fs_tuples, gs_tuples, cfg)
    inner_g = {gt: nj_bracket_eval(D, G, [funcs[j] for j in gt]) for gt in gs_tuples}
    evaluate = partial(_nj_eval, D, G, funcs, gs_tuples, inner_g)
    found = _first_failure(evaluate, fs_tuples, cfg.workers)
    total = len(fs_tuples) * len(gs_tuples)
    if found is None:
        return Verdict(True, check="nambu_jacobi", checked=total)
    k, (gt, r) = found
    fs = tuple(funcs[i] for i in fs_tuples[k])
    gs = tuple(funcs[j] for j in gt)
    checked = k * len(gs_tuples) + gs_tuples.index(gt) + 1
    return Verdict(False, Witness(fs, gs, r, "FI"), check="nambu_jacobi", checked=checked)


def _check_nambu_jacobi_random(D, G, funcs, fs_tuples, gs_tuples, cfg) -> Verdict:
    rng = random.Random(cfg.seed)
    pairs = sorted({(rng.randrange(len(fs_tuples)), rng.randrange(len(gs_tuples))) for _ in range(cfg.samples)})
    for k, (a, b) in enumerate(pairs):
        fs = tuple(funcs[i] for i in fs_tuples[a])
        gs = tuple(funcs[j] for j in gs_tuples[b])
        r = fi_residual(D, G, fs, gs)
        if r:
            return Verdict(False, Witness(fs, gs, r, "FI"), check="nambu_jacobi", checked=k + 1, exhaustive=False)
    return Verdict(True, check="nambu_jacobi", checked=len(pairs), exhaustive=False)


def check_jacobi_pair(D: Multivector, G: Multivector) -> Verdict:
    """Binary Jacobi structure: ``[G, D] = 0`` and ``[D, D] = -2 G ^ D``."""
    _require_degree(D, 2, "check_jacobi_pair")
    _require_degree(G, 1, "check_jacobi_pair")
    r1 = schouten(G, D)
    if r1:
        return Verdict(False, Witness((), (), r1, "[G,D]"), check="jacobi_pair", checked=1)
    r2 = schouten(D, D) + wedge(G, D) * 2
    if r2:
        return Verdict(False, Witness((), (), r2, "[D,D] + 2 G^D"), check="jacobi_pair", checked=2)
    return Verdict(True, check="jacobi_pair", checked=2)


# -- decomposability and involutivity ----------------------------------------

def check_decomposable(L: Multivector) -> Verdict:
    """Plucker test: ``L_{x_J} ^ L = 0`` for every (n-1)-subset ``J`` of coordinates."""
    n = L.degree
    if n < 1:
        raise ValueError("check_decomposable needs degree >= 1")
    if n == 1 or not L:
        return Verdict(True, check="decomposable", checked=0)
    subsets = list(combinations(range(1, L.dim + 1), n - 1))
    for k, J in enumerate(subsets):
        xs = coordinate_functions(L.dim, J)
        R = wedge(contract_all(L, xs), L)
        if R:
            return Verdict(False, Witness(tuple(xs), (), R, "L_xJ ^ L"), check="decomposable", checked=k + 1)
    return Verdict(True, check="decomposable", checked=len(subsets))


def check_involutive(fields: Sequence[Multivector]) -> Verdict:
    """``[X_i, X_j] ^ X_1 ^ ... ^ X_n = 0`` for all i < j (identity level)."""
    if not fields:
        raise ValueError("check_involutive needs at least one field")
    dim = fields[0].dim
    for X in fields:
        _require_degree(X, 1, "check_involutive")
        if X.dim != dim:
            raise ValueError("fields live on different spaces")
    top = wedge_all(fields, dim)
    checked = 0
    for i, j in combinations(range(len(fields)), 2):
        checked += 1
        R = wedge(schouten(fields[i], fields[j]), top)
        if R:
            return Verdict(False, Witness((), (), R, f"[X{i + 1},X{j + 1}] ^ X1^...^Xn"), check="involutive", checked=checked)
    return Verdict(True, check="involutive", checked=checked)


# -- identities from the structure theory ----------------------------------

def ham_identity_residual(L: Multivector, fs: Sequence[Polynomial], gs: Sequence[Polynomial]) -> Multivector:
    n = L.degree
    if len(fs) != n - 1 or len(gs) != n - 1:
        raise ValueError(f"hamiltonian identity of order {n} needs {n - 1} + {n - 1} functions")
    fs, gs = list(fs), list(gs)
    lhs = schouten(hamiltonian(L, fs), hamiltonian(L, gs))
    rhs = Multivector.zero(L.dim, 1)
    for i, g in enumerate(gs):
        rhs = rhs + hamiltonian(L, gs[:i] + [bracket_eval(L, fs + [g])] + gs[i + 1:])
    return lhs - rhs


def check_ham_identity(L: Multivector, fs: Sequence[Polynomial], gs: Sequence[Polynomial]) -> Verdict:
    """Lie bracket of hamiltonian fields versus the sum of hamiltonian fields of inner brackets."""
    R = ham_identity_residual(L, fs, gs)
    if not R:
        return Verdict(True, check="ham_identity", checked=1)
    return Verdict(False, Witness(tuple(fs), tuple(gs), R, "ham"), check="ham_identity", checked=1)


def contraction_pair(D: Multivector, G: Multivector, f: Polynomial) -> tuple[Multivector, Multivector]:
    """The pair ``(D_f + f G, -G_f)`` describing the bracket ``{f, ...}``."""
    if D.degree < 3 or G.degree != D.degree - 1:
        raise ValueError("contraction_pair needs deg D = deg G + 1 >= 3")
    return contract(D, f) + G * f, -contract(G, f)


def n3_identities(D: Multivector, G: Multivector, f: Polynomial) -> dict[str, Multivector]:
    """Residuals of the intermediate identities for an order-3 Nambu-Jacobi pair.

    Keys ending in ``*`` are the forms consistent with the expansion they
    are derived from; the bare keys are the shorter printed variants.  All
    vanish on valid pairs.
    """
    Df, Gf = contract(D, f), contract(G, f)
    DfDf = schouten(Df, Df)
    DfG = schouten(Df, G)
    GfDf = wedge(Gf, Df)
    GfG = wedge(Gf, G)
    return {
        "expanded": DfDf + DfG * (2 * f) - GfDf * 2 - GfG * (4 * f),
        "shift*": DfG - GfG * 2,
        "shift": DfG - wedge(Gf, D) * 2,
        "difference*": DfDf - GfDf * 2,
        "difference": DfDf + GfDf * 2,
        "square": GfDf,
        "poisson": DfDf,
    }


def theorem1_crosscheck(L: Multivector, cfg: CheckConfig = DEFAULT_CONFIG) -> Verdict:
    """Compare the verdict on ``L`` with the verdicts on its contractions.

    The contracting functions are all nonconstant monomials of degree <=
    ``max_degree`` and all sums of two of them.  The Nambu-Poisson condition
    on ``L_f`` is quadratic in ``f``, so this polarization family covers every
    polynomial ``f`` of that degree.  Passes when the top-level verdict equals
    the conjunction of the contraction verdicts.
    """
    n = L.degree
    if n < 3:
        raise ValueError("theorem1_crosscheck needs degree >= 3")
    top = check_nambu_poisson(L, cfg)
    monos = probe_functions(L.dim, cfg.max_degree, include_constants=False)
    family = list(monos) + [a + b for a, b in combinations(monos, 2)]
    failing = None
    sub_verdict = None
    checked = 0
    for f in family:
        checked += 1
        v = check_nambu_poisson(contract(L, f), cfg)
        if not v.passed:
            failing, sub_verdict = f, v
            break
    contractions_pass = failing is None
    details = {
        "top": top,
        "contractions_pass": contractions_pass,
        "failing_contraction": failing,
        "contraction_verdict": sub_verdict,
        "contractions_checked": checked,
    }
    if top.passed == contractions_pass:
        return Verdict(True, check="theorem1_crosscheck", checked=checked, exhaustive=cfg.exhaustive, details=details)
    if top.passed:
        w = Witness((failing,), (), sub_verdict.witness.residual, "top passes, contraction fails")
    else:
        w = Witness(top.witness.fs, top.witness.gs, top.witness.residual, "top fails, all contractions pass")
    return Verdict(False, w, check="theorem1_crosscheck", checked=checked, exhaustive=cfg.exhaustive, details=details)


def replay(verdict: Verdict, D: Multivector, G: Multivector | None = None) -> Polynomial | Multivector:
    """Recompute the residual stored in a failing verdict from its witness."""
    w = verdict.witness
    if w is None:
        raise ValueError("nothing to replay on a passing verdict")
    if verdict.check in ("fi_direct", "nambu_jacobi") and w.label == "FI":
        return fi_residual(D, G, w.fs, w.gs)
    if verdict.check == "nambu_poisson":
        return schouten(hamiltonian(D, list(w.fs)), D)
    if verdict.check == "poisson":
        return schouten(D, D)
    if verdict.check == "decomposable":
        return wedge(contract_all(D, list(w.fs)), D)
    if verdict.check == "jacobi_pair":
        return schouten(G, D) if w.label == "[G,D]" else schouten(D, D) + wedge(G, D) * 2
    raise ValueError(f"no replay rule for {verdict.check!r}")
