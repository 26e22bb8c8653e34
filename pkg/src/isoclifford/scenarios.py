"""Interpreter for the declarative special-point scenarios in ``scenarios.json``.

A scenario names a system, a list of exact point constructions and a list of
checks.  Operators are written as lists of matrix names multiplied left to
right: ``P0..Pm`` are the system matrices; ``P9`` is the extension of a
truncated system; ``Q0``/``Q9`` complete a definite system.
"""
from __future__ import annotations

import json
import operator
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

import numpy as np

from . import focal
from .exact import ExactMatrix, exact_vector, involution_eigenspace, is_rational_square, norm2, rational_sqrt
from .focal import FocalPoint, GeometryError
from .system import CliffordSystem, basis_element, definite_from_extension, make_system, truncated_extension

COMPARE = {"eq": operator.eq, "le": operator.le, "ge": operator.ge, "lt": operator.lt, "gt": operator.gt}


class ScenarioError(ValueError):
    """Malformed or unsupported scenario description."""


@dataclass
class Context:
    system: CliffordSystem
    names: dict[str, ExactMatrix]
    points: dict[str, FocalPoint] = field(default_factory=dict)
    seed: int = 0


def load_scenarios(path: str | None = None) -> list[dict]:
    if path is None:
        text = resources.files("isoclifford").joinpath("scenarios.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        data = json.loads(text)
        return list(data["scenarios"])
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ScenarioError(f"unreadable scenario file: {exc}") from None


def build(spec: dict) -> tuple[CliffordSystem, dict[str, ExactMatrix]]:
    kind = spec.get("kind")
    if kind == "make":
        s = make_system(int(spec["m"]), int(spec.get("k", 1)), spec.get("signs"))
        extra = {}
    elif kind == "truncated_extension":
        s, ext = truncated_extension(int(spec["m"]))
        extra = {f"P{s.m + 1}": ext}
    elif kind == "definite_from_extension":
        s, q0, qn = definite_from_extension(int(spec["m"]))
        extra = {"Q0": q0, f"Q{s.m + 1}": qn}
    else:
        raise ScenarioError(f"unknown system kind {kind!r}")
    names = {f"P{i}": p for i, p in enumerate(s.matrices)}
    names.update(extra)
    return s, names


def _operator(ctx: Context, word: list[str]) -> ExactMatrix:
    out = ExactMatrix.identity(ctx.system.dim)
    for name in word:
        if name not in ctx.names:
            raise ScenarioError(f"unknown matrix {name!r}")
        out = out @ ctx.names[name]
    return out


def _eigen(ctx: Context, spec: dict):
    ops = [_operator(ctx, w) for w in spec["operators"]]
    return focal.special_eigenvector(ops, spec.get("signs"), spec.get("search", True), spec.get("pinned", ()))


def make_point(ctx: Context, spec: dict) -> FocalPoint:
    trail: dict[str, Any] = {}
    if "eigen" in spec:
        x, signs, space = _eigen(ctx, spec["eigen"])
        trail = {"operators": spec["eigen"]["operators"], "signs": list(signs), "joint_dim": space.dim}
    elif "sum" in spec:
        x = exact_vector([0] * ctx.system.dim)
        for term in spec["sum"]:
            v = ctx.points[term["point"]].x
            x = x + (_operator(ctx, term.get("apply", [])) @ v)
        trail = {"sum": spec["sum"]}
    elif "balanced" in spec:
        b = spec["balanced"]
        split = _operator(ctx, b["split"])
        ops = [_operator(ctx, w) for w in b["operators"]]
        signs = list(b.get("signs", [1] * len(ops)))
        a, _, sa = focal.special_eigenvector(ops + [split], signs + [1], search=False)
        c, _, sc = focal.special_eigenvector(ops + [split], signs + [-1], search=False)
        q = norm2(a) / norm2(c)
        if is_rational_square(q):
            c = c * rational_sqrt(q)
        else:
            c = focal.vector_with_norm(sc.basis, norm2(a), np.random.default_rng(ctx.seed), reflections=0)
        x = exact_vector(a + c)
        trail = {"operators": b["operators"], "signs": signs, "split": b["split"]}
    else:
        raise ScenarioError(f"point {spec.get('name')!r} has no construction")
    manifold = spec.get("manifold", "plus")
    witness = None
    if manifold == "plus":
        if not focal.on_mplus(ctx.system, x):
            raise GeometryError(f"constructed point {spec['name']} is not on M_+")
    else:
        idx = int(spec["witness"][1:])
        witness = basis_element(ctx.system, idx)
        if list(witness.matrix @ x) != list(x):
            raise GeometryError(f"constructed point {spec['name']} is not fixed by {spec['witness']}")
    return FocalPoint(x, manifold, witness, trail)


def _witness(ctx: Context, name: str):
    return basis_element(ctx.system, int(name[1:]))


def evaluate(ctx: Context, check: dict):
    op = check["op"]
    s = ctx.system
    pt = ctx.points.get(check.get("point", ""))
    if op == "product_trace":
        return s.product_trace()
    if op == "sigma_plus":
        return focal.sigma_plus(s, pt)
    if op == "sigma_minus":
        return focal.sigma_minus(s, pt, seed=ctx.seed)
    if op == "kernel_span_minus":
        return focal.kernel_span_minus(s, pt, seed=ctx.seed)[0].dim
    if op == "common_kernel_minus":
        return focal.common_kernel_minus(s, pt, seed=ctx.seed).dim
    if op == "condition_a_dim":
        return focal.condition_a_dim(s, pt, seed=ctx.seed)
    if op == "nplus_membership":
        return focal.nplus_membership(s, pt)[0]
    if op == "eigenspace_dim":
        ops = [_operator(ctx, w) for w in check["operators"]]
        return focal.joint_eigenspace(ops, check.get("signs", [1] * len(ops))).dim
    if op == "random_condition_a_min":
        rng = np.random.default_rng(ctx.seed)
        best = None
        for _ in range(int(check.get("samples", 100))):
            d = focal.condition_a_dim(s, focal.random_mplus_point(s, rng), seed=ctx.seed)
            best = d if best is None else min(best, d)
            if best == 0:
                break
        return best
    if op == "reconstruct":
        el = _witness(ctx, check.get("witness", "P0"))
        y = focal.mminus_point(s, el, [1] + [0] * (s.dim - 1))
        return focal.reconstruct_eplus(s, y) == involution_eigenspace(el.matrix, 1)
    raise ScenarioError(f"unknown check op {op!r}")


def run_scenario(spec: dict, seed: int = 0) -> dict:
    """Build the points of one scenario and evaluate its checks."""
    s, names = build(spec["system"])
    ctx = Context(s, names, seed=seed)
    points = {}
    for p in spec.get("points", []):
        fp = make_point(ctx, p)
        ctx.points[p["name"]] = fp
        points[p["name"]] = {"manifold": fp.manifold, "x": [str(v) for v in fp.x], "trail": fp.trail}
    checks = []
    for c in spec.get("checks", []):
        computed = evaluate(ctx, c)
        cmp = c.get("compare", "eq")
        ok = bool(COMPARE[cmp](computed, c["expected"]))
        checks.append({"name": c["name"], "op": c["op"], "point": c.get("point"), "compare": cmp,
                       "expected": c["expected"], "computed": computed, "source": c.get("source", "cited"),
                       "status": "pass" if ok else "fail"})
    return {"name": spec["name"], "description": spec.get("description", ""),
            "system": {"m": s.m, "l": s.l, "m1": s.m1, "m2": s.m2}, "points": points, "checks": checks}


def find(name: str, path: str | None = None) -> dict:
    for spec in load_scenarios(path):
        if spec["name"] == name:
            return spec
    raise ScenarioError(f"no scenario named {name!r}")


__all__ = ["ScenarioError", "load_scenarios", "run_scenario", "find", "build"]
