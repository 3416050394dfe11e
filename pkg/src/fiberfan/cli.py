"""Command-line front end.

    fiberfan build OBJECT [N] [--lambda L] [--word W] --out PATH
    fiberfan fiber-polytope POLYTOPE.json PROJECTION.json --out PATH
    fiberfan nbar N --out PATH
    fiberfan verify N_MAX K_MAX [--no-parity]

Exit codes: 0 all checks passed, 1 a check failed or the computation raised,
2 usage error, 3 time budget exhausted (partial report marked incomplete).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, PolyhedralError
from .fan import f_vector, fan_to_json, is_complete
from .fiber import Deadline, Projection, fiber_polytope
from .models import (
    gt_pattern_polytope,
    gt_polytope,
    gt_string_polytope,
    hypersimplex,
    parity_lattice,
    phi,
    pi_lambda,
    standard_reduced_word,
    weight_polytope,
)
from .polytope import polytope_from_json, polytope_to_json
from .verify import run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_SEED = 20240601

BUILD_OBJECTS = ("hypersimplex", "gt", "gt-pattern", "gt-string", "weight-polytope", "phi", "pi-lambda",
                 "parity-lattice")


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    complete: bool = True
    timing: float | None = None
    engine_version: str = __version__

    @property
    def passed(self) -> bool:
        return self.complete and all(c["passed"] for c in self.checks)

    def to_json(self, with_timing: bool = False) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "checks": self.checks,
            "summary": self.summary,
            "complete": self.complete,
            "engine_version": self.engine_version,
        }
        if with_timing and self.timing is not None:
            out["timing_seconds"] = round(self.timing, 3)
        return out

    def to_text(self) -> str:
        lines = [f"fiberfan {self.engine_version} :: {self.command}"]
        for k, v in self.summary.items():
            lines.append(f"  {k}: {json.dumps(v)}")
        for path_name, path in self.outputs.items():
            lines.append(f"  wrote {path_name}: {path}")
        if self.checks:
            width = max(len(c["name"]) for c in self.checks)
            for c in self.checks:
                status = "PASS" if c["passed"] else "FAIL"
                lines.append(f"  [{status}] {c['name']:<{width}}  {json.dumps(c['witness'], sort_keys=True)}")
        if not self.complete:
            lines.append("  INCOMPLETE: time budget exhausted")
        return "\n".join(lines)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path, payload, force: bool) -> str:
    p = Path(path)
    if p.exists() and not force:
        raise UsageError(f"{p} exists; pass --force to overwrite")
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(_dump(payload), encoding="utf-8")
    return str(p)


def _parse_ints(text: str | None, what: str):
    if text is None:
        raise UsageError(f"--{what} is required for this object")
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x != "")
    except ValueError:
        raise UsageError(f"--{what} must be a comma-separated list of integers") from None


def _need_n(n):
    if n is None:
        raise UsageError("n is required")
    if n < 3:
        raise UsageError("n must be at least 3")
    return n


def lattice_to_json(L) -> dict:
    return {"ambient_dim": L.ambient_dim,
            "congruences": [{"vector": list(m), "modulus": mod, "residue": res} for m, mod, res in L.congruences]}


def cmd_build(obj: str, n=None, lam=None, word=None, out=None, force=False) -> RunReport:
    if obj not in BUILD_OBJECTS:
        raise UsageError(f"unknown object {obj!r}; choose from {', '.join(BUILD_OBJECTS)}")
    inputs = {"object": obj, "n": n, "lambda": list(lam) if lam else None, "word": list(word) if word else None}
    summary = {}
    if obj in ("hypersimplex", "gt"):
        n = _need_n(n)
        P = hypersimplex(n) if obj == "hypersimplex" else gt_polytope(n)
        payload = polytope_to_json(P)
    elif obj == "phi":
        payload = phi(_need_n(n)).to_json()
    elif obj == "parity-lattice":
        payload = lattice_to_json(parity_lattice(_need_n(n)))
    else:
        if lam is None:
            raise UsageError("--lambda is required for this object")
        try:
            if obj == "gt-pattern":
                P = gt_pattern_polytope(lam)
            elif obj == "gt-string":
                P = gt_string_polytope(lam)
            elif obj == "weight-polytope":
                P = weight_polytope(lam)
            else:
                w = tuple(word) if word else standard_reduced_word(len(lam))
                payload = pi_lambda(w, lam).to_json()
                P = None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if P is not None:
            payload = polytope_to_json(P)
    if "vertices" in payload:
        summary = {"ambient_dim": payload["ambient_dim"], "vertices": len(payload["vertices"]),
                   "facets": len(payload["inequalities"]), "equations": len(payload["equations"])}
    report = RunReport("build", inputs, summary=summary)
    if out:
        report.outputs["result"] = _write(out, payload, force)
    else:
        report.summary["result"] = payload
    return report


def _fiber_summary(res) -> dict:
    F = res.fan_from_sigma
    return {
        "sigma_dim": res.dim,
        "sigma_vertices": len(res.sigma.vertices),
        "fan_f_vector": list(f_vector(F)),
        "fan_complete": is_complete(F),
        "chambers": len(res.chamber_complex.chambers),
        "walls": len(res.chamber_complex.walls),
        "agreement": res.agreement,
        "scaling": "sigma is not divided by the volume of the image",
    }


def _fiber_checks(res) -> list:
    return [
        {"name": "fan agreement", "passed": res.agreement,
         "witness": {} if res.agreement else {"fan_from_sigma": fan_to_json(res.fan_from_sigma),
                                              "fan_from_refinement": fan_to_json(res.fan_from_refinement)}},
        {"name": "dim sigma = dim P - dim image", "passed": res.dimension_formula_holds,
         "witness": {"sigma": res.dim, "source": res.source_polytope_dim, "image": res.image_dim}},
    ]


def cmd_fiber_polytope(polytope_path, projection_path, out=None, force=False, budget=None) -> RunReport:
    inputs = {"polytope": str(polytope_path), "projection": str(projection_path)}
    try:
        P = polytope_from_json(json.loads(Path(polytope_path).read_text()))
        pi = Projection.from_json(json.loads(Path(projection_path).read_text()))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read inputs: {exc}") from None
    if P.ambient_dim != pi.source_dim:
        raise UsageError(f"dimension mismatch: polytope in dimension {P.ambient_dim}, "
                         f"projection from dimension {pi.source_dim}")
    report = RunReport("fiber-polytope", inputs)
    res = fiber_polytope(P, pi, Deadline(budget))
    report.summary = _fiber_summary(res)
    report.checks = _fiber_checks(res)
    if out:
        report.outputs["result"] = _write(out, res.to_json(), force)
    return report


def cmd_nbar(n, out=None, force=False, budget=None) -> RunReport:
    from .models import nbar_fan

    n = _need_n(n)
    report = RunReport("nbar", {"n": n})
    if n >= 7:
        report.summary["note"] = "n >= 7 is best effort"
    res = nbar_fan(n, Deadline(budget))
    report.summary.update(_fiber_summary(res))
    F = res.fan_from_sigma
    report.summary["rays"] = [list(r) for r in F.rays]
    report.checks = _fiber_checks(res) + [
        {"name": "fan complete", "passed": is_complete(F), "witness": {"f_vector": list(f_vector(F))}}]
    if out:
        report.outputs["result"] = _write(out, res.to_json(), force)
    return report


def cmd_verify(n_max, k_max, parity=True, seed=DEFAULT_SEED, budget=None, out=None, force=False) -> RunReport:
    if n_max is None or k_max is None:
        raise UsageError("verify needs N_MAX and K_MAX")
    if n_max < 3 or k_max < 1:
        raise UsageError("need N_MAX >= 3 and K_MAX >= 1")
    report = RunReport("verify", {"n_max": n_max, "k_max": k_max, "parity": parity, "seed": seed})
    checks = run_checks(n_max, k_max, parity=parity, seed=seed, deadline=Deadline(budget) if budget else None)
    report.checks = [c.to_json() for c in checks]
    report.summary = {"checks": len(checks), "failed": sum(not c.passed for c in checks)}
    if out:
        report.outputs["report"] = _write(out, report.to_json(), force)
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fiberfan", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"fiberfan {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result JSON here")
    common.add_argument("--force", action="store_true", help="overwrite an existing --out file")
    common.add_argument("--format", choices=("json", "text"), default="text", help="report format on stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--budget-seconds", type=float, default=None,
                        help="abort long computations cleanly, reporting them as incomplete")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="construct a named polytope, projection or lattice")
    b.add_argument("object", help=" | ".join(BUILD_OBJECTS))
    b.add_argument("n_pos", nargs="?", type=int, metavar="N")
    b.add_argument("--n", type=int)
    b.add_argument("--lambda", dest="lam", help="comma-separated weight, e.g. 1,1,0,0")
    b.add_argument("--word", help="comma-separated reduced word (pi-lambda only)")

    f = sub.add_parser("fiber-polytope", parents=[common], help="fiber polytope of a user-supplied projection")
    f.add_argument("polytope")
    f.add_argument("projection")

    nb = sub.add_parser("nbar", parents=[common], help="run the polygon-space pipeline for n")
    nb.add_argument("n_pos", nargs="?", type=int, metavar="N")
    nb.add_argument("--n", type=int)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("n_pos", nargs="?", type=int, metavar="N_MAX")
    v.add_argument("k_pos", nargs="?", type=int, metavar="K_MAX")
    v.add_argument("--n", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--no-parity", action="store_true",
                   help="test mode: count on the plain integer lattice (expected to fail)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        if args.command == "build":
            n = args.n if args.n is not None else args.n_pos
            lam = _parse_ints(args.lam, "lambda") if args.lam else None
            word = _parse_ints(args.word, "word") if args.word else None
            report = cmd_build(args.object, n, lam, word, args.out, args.force)
        elif args.command == "fiber-polytope":
            report = cmd_fiber_polytope(args.polytope, args.projection, args.out, args.force, args.budget_seconds)
        elif args.command == "nbar":
            report = cmd_nbar(args.n if args.n is not None else args.n_pos, args.out, args.force,
                              args.budget_seconds)
        else:
            report = cmd_verify(args.n if args.n is not None else args.n_pos,
                                args.k if args.k is not None else args.k_pos,
                                parity=not args.no_parity, seed=args.seed, budget=args.budget_seconds,
                                out=args.out, force=args.force)
    except UsageError as exc:
        print(f"fiberfan: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        report = RunReport(args.command, {k: v for k, v in vars(args).items() if k != "command"},
                           summary={"reason": str(exc), "partial": exc.partial}, complete=False)
        _emit(report, args, start)
        return EXIT_BUDGET
    except PolyhedralError as exc:
        print(f"fiberfan: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(report, args, start)
    return EXIT_OK if report.passed else EXIT_FAIL


def _emit(report: RunReport, args, start):
    report.timing = time.monotonic() - start
    if args.format == "json":
        sys.stdout.write(_dump(report.to_json(with_timing=args.timing)))
    else:
        print(report.to_text())
        if args.timing:
            print(f"  time: {report.timing:.2f}s")


if __name__ == "__main__":
    sys.exit(main())
