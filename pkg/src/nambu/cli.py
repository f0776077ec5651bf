"""Command-line front end.

Exit codes: 0 when the property holds or the computation succeeded, 1 when
the property fails (the report carries a witness), 2 on usage or parse
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import shlex
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .filippov import (
    StructureConstants,
    check_filippov,
    check_problem_hypothesis,
    contract_algebra,
    format_constants,
    format_vector,
    search,
    vector,
)
from .multivector import Multivector, bracket_eval, contract_all, nj_bracket_eval, schouten, wedge
from .parse import (
    ParseError,
    parse_constants,
    parse_multivector,
    parse_multivector_list,
    parse_polynomial_list,
)
from .verify import (
    CheckConfig,
    Verdict,
    check_decomposable,
    check_fi_direct,
    check_ham_identity,
    check_involutive,
    check_nambu_jacobi,
    check_nambu_poisson,
    check_poisson,
    theorem1_crosscheck,
)

COMMANDS = (
    "contract", "wedge", "schouten", "bracket",
    "check-poisson", "check-np", "check-nj", "check-decomposable", "check-involutive",
    "check-ham", "check-fi-direct", "theorem1-crosscheck",
    "filippov-check", "filippov-contract", "filippov-search",
)


class UsageError(Exception):
    pass


@dataclass
class Job:
    command: str
    dim: int | None
    inputs: dict[str, Any]
    config: CheckConfig


@dataclass
class Report:
    command: str
    inputs: dict[str, str]
    verdict: dict | None = None
    result: Any = None
    witness: dict | None = None
    replay: str | None = None
    config: dict = field(default_factory=dict)
    seed: int | None = None
    elapsed_ms: float | None = None
    version: str = __version__
    exit_code: int = 0

    def digests(self) -> dict[str, str]:
        return {k: hashlib.sha256(v.encode()).hexdigest()[:16] for k, v in self.inputs.items()}

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "inputs": {k: {"text": v, "sha256": d} for (k, v), d in zip(self.inputs.items(), self.digests().values())},
            "verdict": self.verdict,
            "config": self.config,
            "elapsed_ms": self.elapsed_ms,
            "version": self.version,
        }
        if self.result is not None:
            out["result"] = self.result
        if self.witness is not None:
            out["witness"] = self.witness
        if self.replay is not None:
            out["replay"] = self.replay
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"nambu {self.version}: {self.command}"]
        for (k, v), d in zip(self.inputs.items(), self.digests().values()):
            shown = v.replace("\n", "; ")
            lines.append(f"  {k} [{d}]: {shown}")
        if self.config:
            lines.append("  config: " + ", ".join(f"{k}={v}" for k, v in self.config.items()))
        if self.verdict is not None:
            status = "PASS" if self.verdict["passed"] else "FAIL"
            scope = "" if self.verdict.get("exhaustive", True) else " (randomized, non-exhaustive)"
            lines.append(f"  verdict: {status}{scope} after {self.verdict['checked']} evaluations")
        if self.witness is not None:
            w = self.witness
            if w.get("label"):
                lines.append(f"  witness ({w['label']}):")
            else:
                lines.append("  witness:")
            if w.get("fs"):
                lines.append("    fs = " + ", ".join(w["fs"]))
            if w.get("gs"):
                lines.append("    gs = " + ", ".join(w["gs"]))
            lines.append(f"    residual = {w['residual']}")
        if self.replay is not None:
            lines.append(f"  replay: {self.replay}")
        if self.result is not None:
            if isinstance(self.result, str):
                lines.append("  result: " + self.result.replace("\n", "\n          "))
            else:
                lines.append("  result:\n" + json.dumps(self.result, indent=2, sort_keys=True))
        if self.elapsed_ms is not None:
            lines.append(f"  elapsed: {self.elapsed_ms:.1f} ms")
        return "\n".join(lines)


def _read_text(value: str) -> str:
    if value.startswith("@"):
        return Path(value[1:]).read_text()
    return value


def _need(args, name: str) -> str:
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")
    return _read_text(value)


def _need_dim(args) -> int:
    if args.dim is None:
        raise UsageError(f"--dim is required for {args.command}")
    if args.dim < 1:
        raise UsageError("--dim must be positive")
    return args.dim


def build_job(args: argparse.Namespace) -> Job:
    cmd = args.command
    cfg = CheckConfig(
        max_degree=args.max_degree,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
    )
    inputs: dict[str, Any] = {}
    dim = None
    if cmd.startswith("filippov"):
        dim = _need_dim(args)
        if cmd == "filippov-search":
            inputs["coeffs"] = [c.strip() for c in args.coeffs.split(",") if c.strip()]
            if args.arity is None:
                raise UsageError("--arity is required for filippov-search")
            inputs.update(arity=args.arity, start=args.start, stop=args.stop, bound=args.bound)
        else:
            inputs["constants"] = parse_constants(_need(args, "constants"), dim)
            if cmd == "filippov-contract":
                inputs["vector"] = vector(c.strip() for c in _need(args, "vector").split(","))
                if len(inputs["vector"]) != dim:
                    raise UsageError(f"--vector needs {dim} entries")
        return Job(cmd, dim, inputs, cfg)

    dim = _need_dim(args)
    if cmd == "check-involutive":
        inputs["fields"] = parse_multivector_list(_need(args, "fields"), dim, degree=1)
        if not inputs["fields"]:
            raise UsageError("--fields needs at least one vector field")
        return Job(cmd, dim, inputs, cfg)
    if cmd == "check-nj":
        inputs["delta"] = parse_multivector(_need(args, "delta"), dim)
        n = inputs["delta"].degree
        inputs["gamma"] = parse_multivector(_read_text(args.gamma), dim, degree=n - 1) if args.gamma else Multivector.zero(dim, n - 1)
        return Job(cmd, dim, inputs, cfg)

    inputs["tensor"] = parse_multivector(_need(args, "tensor"), dim)
    if cmd in ("wedge", "schouten"):
        inputs["other"] = parse_multivector(_need(args, "other"), dim)
    if cmd in ("contract", "bracket"):
        inputs["functions"] = parse_polynomial_list(_need(args, "functions"), dim)
    if cmd in ("check-ham", "check-fi-direct"):
        inputs["fs"] = parse_polynomial_list(_need(args, "fs"), dim)
        inputs["gs"] = parse_polynomial_list(_need(args, "gs"), dim)
    if cmd in ("bracket", "check-fi-direct") and args.gamma:
        inputs["gamma"] = parse_multivector(_read_text(args.gamma), dim, degree=inputs["tensor"].degree - 1)
    return Job(cmd, dim, inputs, cfg)


def _input_text(value) -> str:
    if isinstance(value, StructureConstants):
        return format_constants(value)
    if isinstance(value, tuple):
        return format_vector(value)
    if isinstance(value, list):
        sep = "; " if value and isinstance(value[0], Multivector) else ", "
        return sep.join(str(v) for v in value)
    return str(value)


def _replay_command(dim: int, tensor: Multivector, gamma: Multivector | None, verdict: Verdict) -> str | None:
    w = verdict.witness
    if w is None or not w.gs:
        return None
    parts = ["nambu", "check-fi-direct", "--dim", str(dim), "--tensor", str(tensor)]
    if gamma is not None and gamma:
        parts += ["--gamma", str(gamma)]
    parts += ["--fs", ", ".join(map(str, w.fs)), "--gs", ", ".join(map(str, w.gs))]
    return " ".join(shlex.quote(p) for p in parts)


def _verdict_report(job: Job, verdict: Verdict, report: Report, tensor=None, gamma=None) -> Report:
    report.verdict = {k: v for k, v in verdict.to_dict().items() if k != "witness"}
    if verdict.witness is not None:
        report.witness = verdict.witness.to_dict()
        if tensor is not None:
            report.replay = _replay_command(job.dim, tensor, gamma, verdict)
    report.exit_code = 0 if verdict.passed else 1
    return report


def execute(job: Job) -> Report:
    cmd, inp, cfg = job.command, job.inputs, job.config
    report = Report(cmd, {k: _input_text(v) for k, v in inp.items()})
    enumerating = cmd in ("check-np", "check-nj", "theorem1-crosscheck")
    if enumerating:
        report.config = cfg.to_dict()
        if cfg.mode == "random":
            report.seed = cfg.seed

    if cmd == "contract":
        report.result = str(contract_all(inp["tensor"], inp["functions"]))
    elif cmd == "wedge":
        report.result = str(wedge(inp["tensor"], inp["other"]))
    elif cmd == "schouten":
        report.result = str(schouten(inp["tensor"], inp["other"]))
    elif cmd == "bracket":
        gamma = inp.get("gamma")
        value = nj_bracket_eval(inp["tensor"], gamma, inp["functions"]) if gamma else bracket_eval(inp["tensor"], inp["functions"])
        report.result = str(value)
    elif cmd == "check-poisson":
        _verdict_report(job, check_poisson(inp["tensor"]), report, inp["tensor"])
    elif cmd == "check-np":
        _verdict_report(job, check_nambu_poisson(inp["tensor"], cfg), report, inp["tensor"])
    elif cmd == "check-nj":
        _verdict_report(job, check_nambu_jacobi(inp["delta"], inp["gamma"], cfg), report, inp["delta"], inp["gamma"])
    elif cmd == "check-decomposable":
        _verdict_report(job, check_decomposable(inp["tensor"]), report)
    elif cmd == "check-involutive":
        _verdict_report(job, check_involutive(inp["fields"]), report)
    elif cmd == "check-ham":
        _verdict_report(job, check_ham_identity(inp["tensor"], inp["fs"], inp["gs"]), report)
    elif cmd == "check-fi-direct":
        gamma = inp.get("gamma")
        _verdict_report(job, check_fi_direct((inp["tensor"], gamma), inp["fs"], inp["gs"]), report)
    elif cmd == "theorem1-crosscheck":
        v = theorem1_crosscheck(inp["tensor"], cfg)
        _verdict_report(job, v, report)
        d = v.details
        report.result = {
            "top_level_passed": d["top"].passed,
            "contractions_passed": d["contractions_pass"],
            "failing_contraction": None if d["failing_contraction"] is None else str(d["failing_contraction"]),
            "contractions_checked": d["contractions_checked"],
        }
    elif cmd == "filippov-check":
        S = inp["constants"]
        v = check_filippov(S)
        _verdict_report(job, v, report)
        if S.arity >= 3:
            report.result = {"contraction_hypothesis": check_problem_hypothesis(S).passed}
    elif cmd == "filippov-contract":
        report.result = format_constants(contract_algebra(inp["constants"], inp["vector"])) or "0"
    elif cmd == "filippov-search":
        args = job.inputs
        rep = search(
            job.dim,
            args["arity"],
            args["coeffs"],
            cfg.mode,
            seed=cfg.seed,
            count=cfg.samples,
            start=args["start"],
            stop=args["stop"],
            bound=args["bound"],
            workers=cfg.workers,
        )
        report.result = rep.to_dict()
        report.config = {"mode": cfg.mode, "workers": cfg.workers}
        if cfg.mode == "random":
            report.seed = cfg.seed
        report.exit_code = 1 if rep.counterexample_found else 0
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown command {cmd}")
    return report


def run(job: Job, timing: bool = True) -> tuple[Report, int]:
    t0 = time.perf_counter()
    report = execute(job)
    if timing:
        report.elapsed_ms = round((time.perf_counter() - t0) * 1000, 1)
    return report, report.exit_code


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nambu", description="Exact checks for Nambu-Poisson, Nambu-Jacobi and Filippov structures.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="dimension of the coordinate space (or of the algebra)")
    common.add_argument("--json", action="store_true", help="print a machine-readable report")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed time so reports are byte-identical across runs")
    common.add_argument("--max-degree", type=int, default=2, help="largest monomial degree in enumerations (default 2)")
    common.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    common.add_argument("--samples", type=int, default=1000, help="sample count in random mode")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    helps = {
        "contract": "iterated contraction L_{f1,...,fk}",
        "wedge": "wedge product of two multivectors",
        "schouten": "Schouten-Nijenhuis bracket",
        "bracket": "evaluate the bracket induced by a tensor (plus s(gamma) with --gamma)",
        "check-poisson": "[L, L] = 0 for a bivector",
        "check-np": "Nambu-Poisson test",
        "check-nj": "Nambu-Jacobi test for (delta, gamma)",
        "check-decomposable": "Plucker decomposability test",
        "check-involutive": "involutivity of the distribution spanned by --fields",
        "check-ham": "hamiltonian-field bracket identity for given --fs/--gs",
        "check-fi-direct": "fundamental identity on given --fs/--gs",
        "theorem1-crosscheck": "compare a tensor's verdict with its contractions' verdicts",
        "filippov-check": "fundamental identity for structure constants",
        "filippov-contract": "structure constants of the contraction with --vector",
        "filippov-search": "search for non-Filippov brackets with Filippov contractions",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        if name in ("contract", "wedge", "schouten", "bracket", "check-poisson", "check-np", "check-decomposable",
                    "check-ham", "check-fi-direct", "theorem1-crosscheck"):
            sp.add_argument("--tensor", help="multivector expression, e.g. '1*d1^d2^d3' (or @file)")
        if name in ("wedge", "schouten"):
            sp.add_argument("--other", help="second multivector")
        if name in ("contract", "bracket"):
            sp.add_argument("--functions", help="comma-separated functions")
        if name in ("check-ham", "check-fi-direct"):
            sp.add_argument("--fs", help="comma-separated functions f1,...")
            sp.add_argument("--gs", help="comma-separated functions g1,...")
        if name in ("bracket", "check-fi-direct", "check-nj"):
            sp.add_argument("--gamma", help="the (n-1)-vector of a Nambu-Jacobi pair")
        if name == "check-nj":
            sp.add_argument("--delta", help="the n-vector of a Nambu-Jacobi pair")
        if name == "check-involutive":
            sp.add_argument("--fields", help="semicolon-separated vector fields")
        if name in ("filippov-check", "filippov-contract"):
            sp.add_argument("--constants", help="lines 'c[k; i1,...,in] = q' (or @file)")
        if name == "filippov-contract":
            sp.add_argument("--vector", help="comma-separated coordinates of x")
        if name == "filippov-search":
            sp.add_argument("--arity", type=int)
            sp.add_argument("--coeffs", default="-1,0,1", help="comma-separated coefficient set")
            sp.add_argument("--start", type=int, default=0)
            sp.add_argument("--stop", type=int, default=None)
            sp.add_argument("--bound", type=int, default=2 ** 24, help="largest exhaustive range accepted")
    return p


def main(argv: Sequence[str] | None = None, out: Callable[[str], None] = print) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        job = build_job(args)
        report, code = run(job, timing=not args.no_timing)
    except (ParseError, UsageError, ValueError, IndexError, OverflowError, OSError) as exc:
        print(f"nambu {args.command}: error: {exc}", file=sys.stderr)
        return 2
    out(report.to_json() if args.json else report.to_text())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
