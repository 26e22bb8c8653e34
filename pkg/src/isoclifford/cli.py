"""Command-line front end: build systems, run verification pipelines, print reports.

Exit status: 0 when every check passes, 1 when a check fails, 2 on an
input or usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import focal, scenarios
from .exact import Subspace, involution_eigenspace
from .polynomial import FkmPolynomial, killing_tangency, verify_cartan_muenzner
from .rep import delta, irreducible_generators, verify_rep
from .system import (CliffordSystem, enumerate_classes, make_system,
                     sphere_identity_checks, verify_system)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_SEED = 2 ** 64


class UsageError(ValueError):
    pass


def jsonable(obj: Any) -> Any:
    """Recursively convert numbers, arrays and subspaces to plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Subspace):
        return {"dim": obj.dim, "basis": [jsonable(b) for b in obj.basis]}
    return obj


@dataclass
class Report:
    command: str
    config: dict
    checks: list[dict] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timing: float | None = None

    def check(self, name: str, expected: Any, computed: Any, ok: bool | None = None, **extra) -> bool:
        ok = bool(expected == computed) if ok is None else bool(ok)
        row = {"name": name, "expected": expected, "computed": computed, "status": "pass" if ok else "fail"}
        row.update(extra)
        self.checks.append(row)
        return ok

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json(self) -> dict:
        out = {"command": self.command, "config": self.config, "passed": self.passed,
               "checks": self.checks, "results": self.results}
        if self.timing is not None:
            out["timing_seconds"] = self.timing
        return jsonable(out)

    def to_text(self) -> str:
        lines = [f"# {self.command}  " + " ".join(f"{k}={v}" for k, v in self.config.items())]
        for c in self.checks:
            lines.append(f"{c['status'].upper():4}  {c['name']}: expected {_short(c['expected'])}, "
                         f"computed {_short(c['computed'])}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'} "
                     f"({sum(c['status'] == 'pass' for c in self.checks)}/{len(self.checks)} checks)")
        if self.timing is not None:
            lines.append(f"time: {self.timing:.2f}s")
        return "\n".join(lines) + "\n"


def _short(v: Any) -> str:
    v = jsonable(v)
    text = json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v
    return text if len(text) <= 80 else text[:77] + "..."


# ---------------------------------------------------------------------------
# argument helpers


def parse_signs(text: str | None) -> list[int] | None:
    """'+-+' or '1,-1,1' to a list of ±1."""
    if text is None:
        return None
    text = text.strip()
    if set(text) <= {"+", "-"} and text:
        return [1 if c == "+" else -1 for c in text]
    try:
        out = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse signs {text!r}; use '+-' or '1,-1'") from None
    if any(v not in (1, -1) for v in out):
        raise UsageError(f"signs must be ±1, got {out}")
    return out


def resolve_seed(arg: int | None) -> int:
    if arg is None:
        env = os.environ.get("FKM_SEED")
        if env is None:
            return 0
        try:
            arg = int(env)
        except ValueError:
            raise UsageError(f"FKM_SEED={env!r} is not an integer") from None
    if not 0 <= arg < MAX_SEED:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {arg}")
    return arg


def load_system(path: str) -> CliffordSystem:
    """Read a system from a JSON file (a bare system object or a report containing one)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    if isinstance(data, dict) and "matrices" not in data:
        data = data.get("results", data).get("system", data)
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    try:
        return CliffordSystem.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def system_from_args(args, require_valid: bool = True) -> tuple[CliffordSystem, dict]:
    if getattr(args, "system", None):
        s = load_system(args.system)
        problems = verify_system(s) if require_valid else []
        if problems:
            raise UsageError(f"{args.system}: not a Clifford system ({problems[0]})")
        return s, {"system_file": args.system, "m": s.m, "l": s.l}
    if args.m is None:
        raise UsageError("give either --system FILE or --m M [--k K] [--signs S]")
    signs = parse_signs(args.signs)
    k = args.k if args.k is not None else (len(signs) if signs else 1)
    try:
        s = make_system(args.m, k, signs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return s, {"m": args.m, "k": k, "signs": signs if signs else [1] * k}


# ---------------------------------------------------------------------------
# commands


def cmd_rep(args, report: Report) -> None:
    rep = irreducible_generators(args.m)
    report.check("verify_rep", [], verify_rep(rep))
    report.check("dimension delta(m)", delta(args.m), rep.generators[0].rows if rep.generators else 1)
    report.results["representation"] = rep.to_json()


def cmd_system(args, report: Report) -> None:
    s, _ = system_from_args(args)
    report.check("verify_system", [], verify_system(s))
    report.results["product_trace"] = s.product_trace()
    report.results["system"] = s.to_json()


def table_rows(m_max: int, k_max: int) -> list[dict]:
    if m_max < 1 or k_max < 1:
        raise UsageError("table bounds must be >= 1")
    rows = []
    for m in range(1, m_max + 1):
        for k in range(1, k_max + 1):
            l = k * delta(m)
            m2 = l - m - 1
            flag = "F constant" if m2 < 0 else ("g=2" if m2 == 0 else "")
            classes = enumerate_classes(m, k)
            rows.append({"m": m, "k": k, "l": l, "m1": m, "m2": m2, "classes": len(classes),
                         "traces": sorted({t for _, t in classes}), "flag": flag})
    return rows


def cmd_table(args, report: Report) -> None:
    rows = table_rows(args.m_max, args.k_max)
    for r in rows:
        if r["m"] % 4 == 0:
            report.check(f"classes (m={r['m']}, k={r['k']})", r["k"] // 2 + 1, r["classes"])
    report.results["rows"] = rows


def render_table(rows: list[dict], fmt: str) -> str:
    header = ["m", "k", "l", "m1", "m2", "classes", "traces", "flag"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, quoting=csv.QUOTE_ALL, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([r["m"], r["k"], r["l"], r["m1"], r["m2"], r["classes"],
                        " ".join(str(t) for t in r["traces"]), r["flag"]])
        return buf.getvalue()
    lines = ["{:>3} {:>3} {:>5} {:>4} {:>5} {:>7}  {:<14} {}".format(*header)]
    for r in rows:
        lines.append("{:>3} {:>3} {:>5} {:>4} {:>5} {:>7}  {:<14} {}".format(
            r["m"], r["k"], r["l"], r["m1"], r["m2"], r["classes"],
            ",".join(str(t) for t in r["traces"]), r["flag"]).rstrip())
    return "\n".join(lines) + "\n"


def cmd_verify(args, report: Report) -> None:
    s, _ = system_from_args(args, require_valid=False)
    if not report.check("verify_system", [], verify_system(s)):
        return
    if not args.system:
        report.check("verify_rep", [], verify_rep(irreducible_generators(s.m)))
    p = FkmPolynomial(s)
    cm = verify_cartan_muenzner(p, args.samples, seed=report.config["seed"], exact=True)
    report.check("Cartan-Muenzner |grad F|^2 = 16 r^6 and Laplace F = c r^2 (exact)", True, cm["exact_zero"],
                 residual_grad=cm["residual_grad"], residual_laplace=cm["residual_laplace"])
    fl = verify_cartan_muenzner(p, args.samples, tol=args.tol, seed=report.config["seed"], exact=False)
    report.check(f"Cartan-Muenzner at float points, relative residual < {args.tol}", True, fl["passed"],
                 residual_grad=fl["residual_grad"], residual_laplace=fl["residual_laplace"])
    if s.m >= 1:
        kt = killing_tangency(p, 0, 1, n_samples=min(args.samples, 10), seed=report.config["seed"])
        report.check("<grad F, P0P1 x> = 0 (exact)", 0, kt["max_abs"])
    rng = np.random.default_rng(report.config["seed"])
    for c in sphere_identity_checks(s, rng):
        report.check(c["name"], c["expected"], c["computed"])
    report.results.update({"m1": s.m1, "m2": s.m2, "product_trace": s.product_trace(), "c": p.c,
                           "residual_grad": cm["residual_grad"], "residual_laplace": cm["residual_laplace"],
                           "float_residual_grad": fl["residual_grad"],
                           "float_residual_laplace": fl["residual_laplace"],
                           "seed": report.config["seed"], "samples": args.samples})


def _spectrum_level(s: CliffordSystem, level: float, points: int, rng: np.random.Generator,
                    report: Report) -> list[dict]:
    out = []
    for _ in range(points):
        x = focal.random_mplus_float(s, rng)
        pm = focal.random_unit_float(s, rng)
        r = focal.shape_spectrum(s, focal.level_point(s, level, p=pm, x=x))
        out.append(r.to_json())
    pattern = [k for _, k in out[0]["predicted"]] if out else []
    mults = [[k for _, k in r["clusters"]] for r in out]
    report.check(f"level {level}: multiplicity pattern", pattern, mults[0] if mults else None,
                 ok=all(m == pattern for m in mults))
    report.check(f"level {level}: cot(t + k pi/4) within {focal.CLUSTER_TOL}", True,
                 all(r["matches"] for r in out), max_residual=max(r["residual"] for r in out))
    return out


def cmd_spectrum(args, report: Report) -> None:
    s, _ = system_from_args(args)
    focal.require_nondegenerate(s, allow_g2=True)
    rng = np.random.default_rng(report.config["seed"])
    levels = {}
    for level in args.levels:
        levels[repr(level)] = _spectrum_level(s, level, args.points, rng, report)
    report.results["levels"] = levels
    if args.minimal and s.m2 > 0:
        report.results["minimal"] = _minimal(s, report)


def _minimal(s: CliffordSystem, report: Report) -> dict:
    t, level = focal.minimal_level(s)
    closed = 0.5 * math.atan(math.sqrt(s.m1 / s.m2))
    report.check("t* agrees with 1/2 arctan sqrt(m1/m2)", closed, t, ok=abs(t - closed) < 1e-12)
    r = focal.shape_spectrum(s, focal.level_point(s, level, x=focal.mplus_point(s)))
    report.check("spectrum trace at the minimal level below 1e-6", 0.0, r.trace, ok=abs(r.trace) < 1e-6)
    return {"t": t, "level": level, "trace": r.trace}


def _scenario_matches(spec: dict, m: int, k: int | None) -> bool:
    sysdef = spec["system"]
    if sysdef.get("kind") == "make":
        return sysdef["m"] == m and (k is None or sysdef.get("k", 1) == k)
    # extension-based systems are the (8,7) families with k = 2
    return sysdef["m"] == m and (k is None or k == 2)


def cmd_invariants(args, report: Report) -> None:
    specs = scenarios.load_scenarios(args.scenario_file)
    if args.scenario:
        known = {sp["name"] for sp in specs}
        missing = [n for n in args.scenario if n not in known]
        if missing:
            raise UsageError(f"unknown scenario(s) {missing}; available: {sorted(known)}")
        specs = [sp for sp in specs if sp["name"] in args.scenario]
    elif args.m is not None:
        specs = [sp for sp in specs if _scenario_matches(sp, args.m, args.k)]
        if not specs:
            raise UsageError(f"no scripted scenario for m={args.m}, k={args.k}")
    results = []
    for spec in specs:
        res = scenarios.run_scenario(spec, seed=report.config["seed"])
        for c in res["checks"]:
            report.check(f"{res['name']}: {c['name']}", c["expected"], c["computed"],
                         ok=c["status"] == "pass", compare=c["compare"], source=c["source"])
        results.append(res)
    report.results["scenarios"] = results


def cmd_focal(args, report: Report) -> None:
    s, _ = system_from_args(args)
    seed = report.config["seed"]
    rng = np.random.default_rng(seed)
    op = args.op
    out: dict[str, Any] = {"op": op, "stabilization": f"basis normals, then seeded random normals until "
                                                      f"{focal.PATIENCE} unchanged refinements"}
    if op == "spectrum":
        focal.require_nondegenerate(s, allow_g2=True)
        x = focal.mplus_point(s)
        r = focal.shape_spectrum(s, focal.level_point(s, args.level, x=x))
        report.check("spectrum matches cot(t + k pi/4)", True, r.matches, residual=r.residual)
        out.update({"point_trail": x.trail, "report": r.to_json()})
    elif op == "minimal":
        out.update(_minimal(s, report))
    elif op == "sigma":
        focal.require_nondegenerate(s)
        x = focal.random_mplus_point(s, rng)
        sp = focal.sigma_plus(s, x)
        report.check("sigma_plus within [0, dim M_+]", True, sp, ok=0 <= sp <= 2 * s.l - s.m - 2)
        y = focal.mminus_point(s, 0, [1] + [0] * (s.dim - 1))
        sm = focal.sigma_minus(s, y, seed=seed)
        span, rounds = focal.kernel_span_minus(s, y, seed=seed)
        report.check("sigma_minus agrees with the direct kernel span", sm, span.dim)
        out.update({"plus_point": [str(v) for v in x.x], "sigma_plus": sp,
                    "minus_point": [str(v) for v in y.x], "witness": "P0", "sigma_minus": sm,
                    "refinements": rounds})
    elif op == "condition-a":
        focal.require_nondegenerate(s)
        x = focal.random_mplus_point(s, rng)
        common, rounds = focal.common_kernel_plus(s, x, seed)
        report.check("0 <= d(x) <= m1", True, common.dim, ok=0 <= common.dim <= s.m1)
        y = focal.mminus_point(s, 0, [1] + [0] * (s.dim - 1))
        ck = focal.common_kernel_minus(s, y, seed=seed)
        out.update({"plus_point": [str(v) for v in x.x], "d": common.dim, "refinements": rounds,
                    "minus_point": [str(v) for v in y.x], "minus_common_kernel_dim": ck.dim,
                    "condition_a_minus": ck.dim == s.m2})
    elif op == "reconstruct":
        focal.require_nondegenerate(s)
        y = focal.mminus_point(s, 0, [1] + [0] * (s.dim - 1))
        r = focal.reconstruct_eplus(s, y, seed=seed)
        report.check("reconstructed space equals E_+(P0)", True, r == involution_eigenspace(s.matrices[0], 1))
        out.update({"minus_point": [str(v) for v in y.x], "dim": r.dim})
    report.results.update(out)


# ---------------------------------------------------------------------------
# parser


def _global(p: argparse.ArgumentParser, sub: bool) -> None:
    dflt = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
    p.add_argument("--seed", type=int, default=dflt(None),
                   help="RNG seed (unsigned 64-bit); falls back to $FKM_SEED, then 0")
    p.add_argument("--json", action="store_true", default=dflt(False), help="emit the JSON report")
    p.add_argument("--out", default=dflt(None), help="write the report to this file instead of stdout")
    p.add_argument("--timing", action="store_true", default=dflt(False),
                   help="include wall time (makes reports non-reproducible)")


def _system_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, help="number of matrices minus one")
    p.add_argument("--k", type=int, help="number of irreducible summands")
    p.add_argument("--signs", help="P0 orientation of each summand, e.g. '+-' or '1,-1'")
    p.add_argument("--system", help="JSON file with a system (as written by the 'system' command)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isoclifford",
                                     description="Clifford systems and FKM isoparametric hypersurfaces")
    _global(parser, sub=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rep", help="irreducible representation of C_{m-1}")
    _global(p, sub=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("system", help="build and verify a Clifford system")
    _global(p, sub=True)
    _system_args(p)

    p = sub.add_parser("table", help="multiplicity table with class counts")
    _global(p, sub=True)
    p.add_argument("--m-max", type=int, default=9)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")

    p = sub.add_parser("verify", help="Clifford relations, Cartan-Muenzner equations, sphere identities")
    _global(p, sub=True)
    _system_args(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-9, help="relative tolerance for the float residuals")

    p = sub.add_parser("spectrum", help="principal curvatures of level hypersurfaces")
    _global(p, sub=True)
    _system_args(p)
    p.add_argument("--levels", type=float, nargs="+", default=[-0.5, 0.0, 0.5])
    p.add_argument("--points", type=int, default=3, help="random points per level")
    p.add_argument("--minimal", action="store_true", help="also locate the minimal hypersurface")

    p = sub.add_parser("invariants", help="condition (A) and sigma invariants at scripted points")
    _global(p, sub=True)
    p.add_argument("--scenario", action="append", help="scenario name (repeatable; default all)")
    p.add_argument("--scenario-file", help="alternative scenario JSON file")
    p.add_argument("--m", type=int, help="select scenarios by m")
    p.add_argument("--k", type=int, help="select scenarios by k")

    p = sub.add_parser("focal", help="focal-manifold computations on one system")
    _global(p, sub=True)
    _system_args(p)
    p.add_argument("--op", required=True, choices=["spectrum", "sigma", "condition-a", "reconstruct", "minimal"])
    p.add_argument("--level", type=float, default=0.0)
    return parser


COMMANDS = {"rep": cmd_rep, "system": cmd_system, "table": cmd_table, "verify": cmd_verify,
            "spectrum": cmd_spectrum, "invariants": cmd_invariants, "focal": cmd_focal}

_CONFIG_KEYS = ("m", "k", "signs", "system", "m_max", "k_max", "samples", "levels", "points",
                "minimal", "scenario", "scenario_file", "op", "level", "format", "tol")


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str | None]:
    """Execute one command; returns (exit status, rendered output, output path)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = resolve_seed(args.seed)
    config = {"command": args.command, "seed": seed}
    for key in _CONFIG_KEYS:
        if getattr(args, key, None) is not None:
            config[key] = getattr(args, key)
    report = Report(args.command, config)
    start = time.perf_counter()
    COMMANDS[args.command](args, report)
    if args.timing:
        report.timing = time.perf_counter() - start
    if args.json or getattr(args, "format", None) == "json":
        text = json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n"
    elif args.command == "table":
        text = render_table(report.results["rows"], args.format)
    else:
        text = report.to_text()
    return (EXIT_OK if report.passed else EXIT_FAIL), text, args.out


def main(argv: Sequence[str] | None = None) -> int:
    try:
        status, text, out_path = run(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except ValueError as exc:  # UsageError, GeometryError, ScenarioError and bad numeric input
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
