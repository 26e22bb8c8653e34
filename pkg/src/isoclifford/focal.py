"""Focal manifolds M_± of the FKM family, shape operators and kernel invariants.

Exact points are kept unnormalized (e.g. ``y + N`` instead of
``(y + N)/√2``); every exact predicate used here is homogeneous, so the
scale never matters.  Float paths (spectra of level hypersurfaces) normalize.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import null_space

from .exact import (ExactMatrix, Subspace, dot, exact_vector, intersect, involution_eigenspace,
                    is_rational_square, norm2, primitive, rank, rational_sqrt)
from .polynomial import FkmPolynomial
from .system import CliffordSystem, SphereElement, basis_element, random_unit_rational, sphere_element

CLUSTER_TOL = 1e-6
NEAR_FOCAL = 1e-6
PATIENCE = 3


class GeometryError(ValueError):
    """A geometric operation was called outside its domain."""


class DegenerateSystemError(GeometryError):
    pass


class NearFocalError(GeometryError):
    pass


@dataclass(frozen=True)
class FocalPoint:
    x: np.ndarray
    manifold: str
    witness: SphereElement | None = None
    trail: dict = field(default_factory=dict, compare=False)

    def unit(self) -> np.ndarray:
        v = np.array([float(c) for c in self.x])
        return v / np.linalg.norm(v)


@dataclass(frozen=True)
class SpherePoint:
    x: np.ndarray
    level: float
    t: float | None = None


@dataclass(frozen=True)
class Spectrum:
    clusters: tuple[tuple[float, int], ...]
    tol: float

    @property
    def dimension(self) -> int:
        return sum(k for _, k in self.clusters)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.clusters)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.clusters)

    def to_json(self) -> list:
        return [[v, k] for v, k in self.clusters]


@dataclass(frozen=True)
class ShapeReport:
    level: float
    t: float
    spectrum: Spectrum
    predicted: tuple[tuple[float, int], ...]
    residual: float
    matches: bool
    trace: float

    def to_json(self) -> dict:
        return {"level": self.level, "t": self.t, "clusters": self.spectrum.to_json(),
                "predicted": [[v, k] for v, k in self.predicted],
                "residual": self.residual, "matches": self.matches, "trace": self.trace}


@dataclass(frozen=True)
class FocalShape:
    """Second fundamental tensor S_N of M_+ at x for N = Px."""

    spectrum: Spectrum
    kernel: Subspace
    operator: ExactMatrix
    cube_identity: bool


@dataclass(frozen=True)
class MinusShape:
    """Eigenspaces of S_N on M_- at y."""

    plus: Subspace
    minus: Subspace
    kernel: Subspace


# ---------------------------------------------------------------------------
# guards and small helpers


def require_nondegenerate(s: CliffordSystem, allow_g2: bool = False) -> None:
    if s.m2 < 0:
        raise DegenerateSystemError(
            f"m2 = {s.m2} < 0: F ≡ −⟨x,x⟩² on this system and M_- is the whole sphere")
    if s.m2 == 0 and not allow_g2:
        raise DegenerateSystemError("m2 = 0: the levels form a g = 2 family")


def _as_element(s: CliffordSystem, p) -> SphereElement:
    if p is None:
        return basis_element(s, 0)
    if isinstance(p, SphereElement):
        return p
    if isinstance(p, int):
        return basis_element(s, p)
    return sphere_element(s, p)


def unit_element(s: CliffordSystem, p) -> SphereElement:
    """Rescale an exact sphere element to unit norm; the norm must be rational."""
    el = _as_element(s, p)
    n2 = el.norm2
    if n2 == 0:
        raise GeometryError("zero sphere element")
    if n2 == 1:
        return el
    if not is_rational_square(n2):
        raise GeometryError(f"|c|² = {n2} is not a rational square; pick a rational unit direction")
    r = rational_sqrt(n2)
    return SphereElement(s, tuple(c / r for c in el.coefficients))


def _orth_matrices(el: SphereElement) -> list[ExactMatrix]:
    """Matrices spanning RΣ_P for P = el."""
    return [q.matrix for q in el.orthogonal_complement()]


def on_mplus(s: CliffordSystem, x: Sequence) -> bool:
    x = exact_vector(x)
    return any(v != 0 for v in x) and all(dot(p @ x, x) == 0 for p in s.matrices)


def _check_plus(s: CliffordSystem, x) -> np.ndarray:
    x = exact_vector(x.x if isinstance(x, FocalPoint) else x)
    if not on_mplus(s, x):
        raise GeometryError("point is not on M_+ (some ⟨P_i x, x⟩ ≠ 0)")
    return x


def _check_minus(s: CliffordSystem, y, p) -> tuple[np.ndarray, SphereElement, ExactMatrix]:
    if isinstance(y, FocalPoint):
        p = y.witness if p is None else p
        y = y.x
    el = unit_element(s, p)
    pm = el.matrix
    y = exact_vector(y)
    if not any(v != 0 for v in y) or list(pm @ y) != list(y):
        raise GeometryError("point is not a +1 eigenvector of the witness P")
    return y, el, pm


def _random_combination(basis: list[np.ndarray], rng: np.random.Generator, span: int = 3) -> np.ndarray:
    while True:
        coeffs = rng.integers(-span, span + 1, size=len(basis))
        if np.any(coeffs != 0):
            break
    out = np.zeros(len(basis[0]), dtype=object)
    out[:] = 0
    for c, b in zip(coeffs, basis):
        if c:
            out = out + int(c) * b
    return out


def vector_with_norm(basis: list[np.ndarray], target, rng: np.random.Generator,
                     tries: int = 4000, reflections: int = 2) -> np.ndarray:
    """Rational vector in span(basis) with squared norm ``target``.

    Searches small integer combinations ``w`` until ``target/|w|²`` is a
    rational square, then moves the hit around the sphere with random
    reflections ``v ↦ v − 2⟨v,d⟩/|d|² d`` (which preserve the norm).
    """
    target = Fraction(target)
    v = None
    for _ in range(tries):
        w = _random_combination(basis, rng, span=2)
        q = target / norm2(w)
        if is_rational_square(q):
            v = exact_vector(w) * rational_sqrt(q)
            break
    if v is None:
        raise GeometryError("no rational vector of the requested norm found")
    for _ in range(reflections):
        d = _random_combination(basis, rng)
        v = v - (2 * dot(v, d) / norm2(d)) * d
    return exact_vector(v)


def _stabilize(start: Subspace, step: Callable[[Subspace], Subspace], done: Callable[[Subspace], bool],
               patience: int = PATIENCE) -> tuple[Subspace, int]:
    """Apply ``step`` until the dimension is unchanged ``patience`` times in a row."""
    cur = start
    unchanged = 0
    rounds = 0
    while unchanged < patience and not done(cur):
        nxt = step(cur)
        rounds += 1
        unchanged = unchanged + 1 if nxt.dim == cur.dim else 0
        cur = nxt
    return cur, rounds


# ---------------------------------------------------------------------------
# points


def mminus_point(s: CliffordSystem, p, seed_vector: Sequence) -> FocalPoint:
    """x = (Id + P)·seed, a point of M_- with witness P."""
    el = unit_element(s, p)
    pm = el.matrix
    seed_vector = exact_vector(seed_vector)
    x = seed_vector + pm @ seed_vector
    if not any(v != 0 for v in x):
        raise GeometryError("seed lies in E_-(P); its projection to E_+(P) vanishes")
    return FocalPoint(x, "minus", el, {"construction": "projector", "seed": [str(v) for v in seed_vector]})


def minus_normal_space(s: CliffordSystem, y, p=None) -> Subspace:
    """⊥_y M_- = {N ∈ E_-(P) : N ⊥ Σ_P y}."""
    y, el, pm = _check_minus(s, y, p)
    eminus = involution_eigenspace(pm, -1)
    orth = Subspace.span([q @ y for q in _orth_matrices(el)], s.dim).orthogonal_complement()
    return intersect(eminus, orth)


def mplus_point(s: CliffordSystem, p=None, normal_index: int = 0) -> FocalPoint:
    """(y + N) for the first basis vector y of E_+(P) and the normal_index-th basis normal N."""
    require_nondegenerate(s, allow_g2=True)
    el = unit_element(s, p)
    y = exact_vector(involution_eigenspace(el.matrix, 1).basis[0])
    nu = minus_normal_space(s, y, el)
    if not 0 <= normal_index < nu.dim:
        raise GeometryError(f"normal_index {normal_index} out of range 0..{nu.dim - 1}")
    n = exact_vector(nu.basis[normal_index])
    q = norm2(y) / norm2(n)
    searched = False
    if is_rational_square(q):
        n = n * rational_sqrt(q)
    else:
        n = vector_with_norm(nu.basis, norm2(y), np.random.default_rng(normal_index), reflections=0)
        searched = True
    x = y + n
    if not on_mplus(s, x):
        raise GeometryError("internal error: constructed point is not on M_+")
    return FocalPoint(exact_vector(x), "plus", el,
                      {"construction": "y+N", "y": [str(v) for v in y], "N": [str(v) for v in n],
                       "normal_index": normal_index, "searched": searched})


def random_mplus_point(s: CliffordSystem, rng: np.random.Generator, attempts: int = 50) -> FocalPoint:
    """Generic exact point of M_+: random y ∈ E_+(P_0), random N ∈ ⊥_y M_- with |N| = |y|."""
    require_nondegenerate(s, allow_g2=True)
    el = basis_element(s, 0)
    eplus = involution_eigenspace(el.matrix, 1).basis
    for _ in range(attempts):
        y = exact_vector(_random_combination(eplus, rng))
        nu = minus_normal_space(s, y, el)
        try:
            n = vector_with_norm(nu.basis, norm2(y), rng, tries=600)
        except GeometryError:
            continue
        x = y + n
        if on_mplus(s, x):
            return FocalPoint(exact_vector(x), "plus", el, {"construction": "random y+N"})
    raise GeometryError("could not construct a rational M_+ point")


def random_mplus_float(s: CliffordSystem, rng: np.random.Generator) -> np.ndarray:
    """Unit float point of M_+ (same construction as random_mplus_point, in floats)."""
    stack = s.float_stack()
    p0 = stack[0]
    n = s.dim
    y = (np.eye(n) + p0) @ rng.standard_normal(n)
    cons = np.vstack([np.eye(n) + p0] + [(stack[i] @ y)[None, :] for i in range(1, s.m + 1)])
    nu = null_space(cons)
    nvec = nu @ rng.standard_normal(nu.shape[1])
    nvec *= np.linalg.norm(y) / np.linalg.norm(nvec)
    x = y + nvec
    return x / np.linalg.norm(x)


def random_unit_float(s: CliffordSystem, rng: np.random.Generator) -> np.ndarray:
    c = rng.standard_normal(s.m + 1)
    c /= np.linalg.norm(c)
    return np.tensordot(c, s.float_stack(), axes=1)


def _float_point(x) -> np.ndarray:
    if isinstance(x, FocalPoint):
        return x.unit()
    if isinstance(x, SpherePoint):
        return np.asarray(x.x, dtype=float)
    v = np.array([float(c) for c in x])
    return v / np.linalg.norm(v)


def _float_matrix(s: CliffordSystem, p) -> np.ndarray:
    if isinstance(p, np.ndarray):
        return p
    el = _as_element(s, p)
    m = el.float_matrix()
    return m / math.sqrt(float(el.norm2))


def normal_circle_profile(s: CliffordSystem, x, p, ts: Sequence[float]) -> list[tuple[float, float]]:
    """Samples (t, f(cos t·x + sin t·Px)) along the normal great circle at x ∈ M_+."""
    if isinstance(x, FocalPoint) or (isinstance(x, np.ndarray) and x.dtype == object):
        _check_plus(s, x)
    xf = _float_point(x)
    fk = FkmPolynomial(s)
    if abs(fk.value(xf) - 1.0) > 1e-9:
        raise GeometryError("point is not on M_+")
    px = _float_matrix(s, p) @ xf
    return [(float(t), fk.value(math.cos(t) * xf + math.sin(t) * px)) for t in ts]


def level_point(s: CliffordSystem, level: float, p=None, normal_index: int = 0,
                x=None) -> SpherePoint:
    """x_t = cos t·x + sin t·Px with t = arccos(level)/4, so that f(x_t) = level.

    ``x`` defaults to ``mplus_point(s, P, normal_index)``; it may be an exact
    FocalPoint or a unit float point of M_+.
    """
    require_nondegenerate(s, allow_g2=True)
    if not -1.0 < level < 1.0:
        raise GeometryError(f"|level| = {abs(level)} ≥ 1 is a focal value, not a hypersurface")
    if x is None:
        x = mplus_point(s, p, normal_index)
    xf = _float_point(x)
    px = _float_matrix(s, p) @ xf
    t = math.acos(level) / 4.0
    return SpherePoint(math.cos(t) * xf + math.sin(t) * px, level, t)


# ---------------------------------------------------------------------------
# spectra


def cluster(values: Sequence[float], tol: float = CLUSTER_TOL) -> Spectrum:
    vals = sorted(values, reverse=True)
    groups: list[list[float]] = []
    for v in vals:
        if groups and abs(groups[-1][-1] - v) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return Spectrum(tuple((float(np.mean(g)), len(g)) for g in groups), tol)


def predicted_curvatures(s: CliffordSystem, t: float) -> list[tuple[float, int]]:
    """cot(t + kπ/4) with multiplicities (m1, m2, m1, m2), dropping zero multiplicities."""
    mult = (s.m1, s.m2, s.m1, s.m2)
    return [(1.0 / math.tan(t + k * math.pi / 4), mult[k]) for k in range(4) if mult[k] > 0]


def shape_operator(s: CliffordSystem, x) -> tuple[np.ndarray, float]:
    """Shape operator of the level through the unit point x, in an orthonormal tangent basis.

    With G = grad F − 4F x the spherical gradient and ξ = G/|G|,
    S V = −π_T (Hess F − 4f Id) V / |G| on T = {x, ξ}^⊥.
    """
    x = _float_point(x)
    fk = FkmPolynomial(s)
    f = fk.value(x)
    if abs(f) > 1.0 - NEAR_FOCAL:
        raise NearFocalError(f"level {f} is within {NEAR_FOCAL} of a focal manifold")
    grad = fk.gradient(x) - 4.0 * f * x
    xi = grad / np.linalg.norm(grad)
    basis = null_space(np.vstack([x, xi]))
    hess = fk.hessian(x) - 4.0 * f * np.eye(s.dim)
    op = -(basis.T @ hess @ basis) / np.linalg.norm(grad)
    return 0.5 * (op + op.T), f


def shape_spectrum(s: CliffordSystem, x, tol: float = CLUSTER_TOL) -> ShapeReport:
    op, f = shape_operator(s, x)
    eig = np.linalg.eigvalsh(op)
    spec = cluster(eig, tol)
    t = math.acos(max(-1.0, min(1.0, f))) / 4.0
    predicted = predicted_curvatures(s, t)
    matches = len(spec.clusters) == len(predicted)
    residual = 0.0
    if matches:
        for (cv, ck), (pv, pk) in zip(spec.clusters, sorted(predicted, reverse=True)):
            matches &= ck == pk
        expected = np.repeat([v for v, _ in sorted(predicted, reverse=True)],
                             [k for _, k in sorted(predicted, reverse=True)])
        residual = float(np.max(np.abs(np.sort(eig)[::-1] - expected)))
        matches &= residual < tol
    else:
        residual = float("inf")
    return ShapeReport(f, t, spec, tuple(predicted), residual, bool(matches), float(np.sum(eig)))


# ---------------------------------------------------------------------------
# second fundamental tensors of M_+


def plus_tangent_space(s: CliffordSystem, x) -> Subspace:
    x = _check_plus(s, x)
    return Subspace.span([x] + [p @ x for p in s.matrices], s.dim).orthogonal_complement()


def plus_kernel(s: CliffordSystem, x: np.ndarray, el: SphereElement) -> Subspace:
    """ker S_N = RΣ_P N for N = Px (scale invariant in P)."""
    n = el.matrix @ x
    return Subspace.span([q @ n for q in _orth_matrices(el)], s.dim)


def focal_shape_plus(s: CliffordSystem, x, p) -> FocalShape:
    """S_N v = tangential part of (−Pv) at x ∈ M_+ for N = Px, with exact spectrum."""
    require_nondegenerate(s, allow_g2=True)
    x = _check_plus(s, x)
    el = unit_element(s, p)
    pm = el.matrix
    n = s.dim
    r2 = dot(x, x)
    radial = [x] + [q @ x for q in s.matrices]
    acc = np.empty((n, n), dtype=object)
    acc[:] = Fraction(0)
    for v in radial:
        acc = acc + np.outer(v, v)
    proj = ExactMatrix.identity(n) - ExactMatrix(acc) * (1 / r2)
    op = -(proj @ pm @ proj)
    ident = ExactMatrix.identity(n)
    normal_dim = len(radial)
    zero_mult = n - rank(op) - normal_dim
    plus_mult = n - rank(op - ident)
    minus_mult = n - rank(op + ident)
    spec = Spectrum(tuple((v, k) for v, k in ((1.0, plus_mult), (0.0, zero_mult), (-1.0, minus_mult))
                          if k > 0), 0.0)
    return FocalShape(spec, plus_kernel(s, x, el), op, op @ op @ op == op)


def _random_element(s: CliffordSystem, rng: np.random.Generator) -> SphereElement:
    c = [Fraction(int(v)) for v in rng.integers(-5, 6, size=s.m + 1)]
    if not any(c):
        c[0] = Fraction(1)
    return sphere_element(s, c)


def common_kernel_plus(s: CliffordSystem, x, seed: int = 0) -> tuple[Subspace, int]:
    """∩_N ker S_N at x ∈ M_+: basis normals, then random normals until stable."""
    x = _check_plus(s, x)
    rng = np.random.default_rng(seed)
    cur = plus_kernel(s, x, basis_element(s, 0))
    for i in range(1, s.m + 1):
        cur = intersect(cur, plus_kernel(s, x, basis_element(s, i)))
    return _stabilize(cur, lambda c: intersect(c, plus_kernel(s, x, _random_element(s, rng))),
                      lambda c: c.dim == 0)


def condition_a_dim(s: CliffordSystem, x, seed: int = 0) -> int:
    """d(x) = dim ∩_N ker S_N at x ∈ M_+ (0 ≤ d ≤ m1)."""
    return common_kernel_plus(s, x, seed)[0].dim


def sigma_plus(s: CliffordSystem, x) -> int:
    """dim Span ∪_N ker S_N at x ∈ M_+, as the rank of {P_i P_j x : i < j}."""
    x = _check_plus(s, x)
    px = [p @ x for p in s.matrices]
    cols = [s.matrices[i] @ px[j] for i, j in itertools.combinations(range(s.m + 1), 2)]
    return rank(cols)


def nplus_membership(s: CliffordSystem, x) -> tuple[bool, dict]:
    """Whether P_a P_b P_c P_d x = ±x for some basis 4-subset.

    For m = 3 this is exactly x ∈ N_+; for larger m it is a sufficient test
    restricted to 4-frames drawn from the basis.
    """
    x = _check_plus(s, x)
    for idx in itertools.combinations(range(s.m + 1), 4):
        y = s.product(idx) @ x
        for sign in (1, -1):
            if all(a == sign * b for a, b in zip(y, x)):
                return True, {"operators": list(idx), "sign": sign}
    return False, {}


# ---------------------------------------------------------------------------
# second fundamental tensors of M_-


def minus_kernel(s: CliffordSystem, y: np.ndarray, el: SphereElement, eplus: Subspace,
                 normal: np.ndarray) -> Subspace:
    """ker S_N = {v ∈ E_+(P) : v ⊥ y, v ⊥ Σ_P N}."""
    constraints = [y] + [q @ normal for q in _orth_matrices(el)]
    return intersect(eplus, Subspace.span(constraints, s.dim).orthogonal_complement())


def focal_shape_minus(s: CliffordSystem, y, normal: Sequence, p=None) -> MinusShape:
    """E_±(S_N) = RΣ_P(y ± N) and ker S_N at y ∈ M_-; N is rescaled to |y|."""
    require_nondegenerate(s)
    y, el, pm = _check_minus(s, y, p)
    normal = exact_vector(normal)
    nu = minus_normal_space(s, y, el)
    if not any(v != 0 for v in normal) or not nu.contains(normal):
        raise GeometryError("N is not normal to M_- at y")
    q = norm2(y) / norm2(normal)
    if not is_rational_square(q):
        raise GeometryError("|y|/|N| is irrational; pick N with a rational norm ratio")
    normal = normal * rational_sqrt(q)
    qs = _orth_matrices(el)
    plus = Subspace.span([qm @ (y + normal) for qm in qs], s.dim)
    minus = Subspace.span([qm @ (y - normal) for qm in qs], s.dim)
    kernel = minus_kernel(s, y, el, involution_eigenspace(pm, 1), normal)
    return MinusShape(plus, minus, kernel)


def minus_tangent_dim(s: CliffordSystem) -> int:
    return 2 * s.l - 2 - s.m2


def _minus_setup(s, y, p):
    require_nondegenerate(s)
    y, el, pm = _check_minus(s, y, p)
    nu = minus_normal_space(s, y, el)
    return y, el, pm, nu


def common_sigma_normals(s: CliffordSystem, y, p=None, seed: int = 0) -> tuple[Subspace, int]:
    """∩_N RΣ_P N over N ∈ ⊥_y M_-: basis normals, then random normals until stable."""
    y, el, pm, nu = _minus_setup(s, y, p)
    qs = _orth_matrices(el)
    rng = np.random.default_rng(seed)

    def space(n):
        return Subspace.span([q @ n for q in qs], s.dim)

    basis = nu.basis
    cur = space(basis[0])
    for n in basis[1:]:
        cur = intersect(cur, space(n))
    return _stabilize(cur, lambda c: intersect(c, space(_random_combination(basis, rng))),
                      lambda c: c.dim == 0)


def sigma_minus(s: CliffordSystem, y, p=None, seed: int = 0) -> int:
    """dim Span ∪_N ker S_N at y ∈ M_- = dim T_y M_- − m1 − dim ∩_N RΣ_P N."""
    common, _ = common_sigma_normals(s, y, p, seed)
    return minus_tangent_dim(s) - s.m1 - common.dim


def kernel_span_minus(s: CliffordSystem, y, p=None, seed: int = 0) -> tuple[Subspace, int]:
    """Span ∪_N ker S_N at y ∈ M_-, accumulated directly from the kernels."""
    y, el, pm, nu = _minus_setup(s, y, p)
    eplus = involution_eigenspace(pm, 1)
    rng = np.random.default_rng(seed)
    basis = nu.basis
    cur = Subspace.zero(s.dim)
    for n in basis:
        cur = cur + minus_kernel(s, y, el, eplus, n)
    bound = s.l - 1
    return _stabilize(cur, lambda c: c + minus_kernel(s, y, el, eplus, _random_combination(basis, rng)),
                      lambda c: c.dim >= bound)


def common_kernel_minus(s: CliffordSystem, y, p=None, seed: int = 0) -> Subspace:
    """∩_N ker S_N at y ∈ M_-; condition (A) holds iff its dimension is m2."""
    y, el, pm, nu = _minus_setup(s, y, p)
    eplus = involution_eigenspace(pm, 1)
    rng = np.random.default_rng(seed)
    basis = nu.basis
    cur = minus_kernel(s, y, el, eplus, basis[0])
    for n in basis[1:]:
        cur = intersect(cur, minus_kernel(s, y, el, eplus, n))
    out, _ = _stabilize(cur, lambda c: intersect(c, minus_kernel(s, y, el, eplus,
                                                                 _random_combination(basis, rng))),
                        lambda c: c.dim == 0)
    return out


def reconstruct_eplus(s: CliffordSystem, y, p=None, seed: int = 0) -> Subspace:
    """Ry ⊕ Span ∪_N ker S_N, which recovers E_+(P) when m1 ≤ m2."""
    if s.m1 > s.m2:
        raise GeometryError(
            f"reconstruction needs m1 ≤ m2, got ({s.m1}, {s.m2}); kernels do not span E_+(P)")
    y, el, _ = _check_minus(s, y, p)
    span, _ = kernel_span_minus(s, y, el, seed)
    return span + Subspace.span([y], s.dim)


# ---------------------------------------------------------------------------
# joint eigenvectors


def joint_eigenspace(operators: Sequence[ExactMatrix], signs: Sequence[int]) -> Subspace:
    """∩ E_{sign_i}(O_i) for commuting involutions, via the product of projectors."""
    if not operators:
        raise ValueError("need at least one operator")
    n = operators[0].rows
    ident = ExactMatrix.identity(n)
    for o in operators:
        if o @ o != ident:
            raise GeometryError("operator is not an involution")
    for a, b in itertools.combinations(operators, 2):
        if a @ b != b @ a:
            raise GeometryError("operators do not commute")
    proj = ident
    for o, sg in zip(operators, signs):
        proj = proj @ (ident + o * sg)
    return Subspace.column_space(proj)


def special_eigenvector(operators: Sequence[ExactMatrix], signs: Sequence[int] | None = None,
                        search: bool = True, pinned: Sequence[int] = ()
                        ) -> tuple[np.ndarray, tuple[int, ...], Subspace]:
    """Nonzero exact common eigenvector of commuting involutions.

    If the requested joint eigenspace is zero and ``search`` is set, the other
    sign patterns are tried in lexicographic order, keeping the signs at the
    ``pinned`` positions fixed.
    """
    signs = tuple(signs) if signs is not None else (1,) * len(operators)
    if len(signs) != len(operators):
        raise ValueError("one sign per operator")
    patterns = [signs]
    if search:
        free = [i for i in range(len(operators)) if i not in set(pinned)]
        for choice in itertools.product((1, -1), repeat=len(free)):
            pat = list(signs)
            for i, c in zip(free, choice):
                pat[i] = c
            if tuple(pat) != signs:
                patterns.append(tuple(pat))
    for pat in patterns:
        space = joint_eigenspace(operators, pat)
        if space.dim:
            return exact_vector(space.basis[0]), tuple(pat), space
    raise GeometryError("the joint eigenspace is zero for every allowed sign pattern")


# ---------------------------------------------------------------------------
# minimal hypersurface


def mean_curvature(m1: int, m2: int, t: float) -> float:
    return (m1 / math.tan(t) + m2 / math.tan(t + math.pi / 4)
            + m1 / math.tan(t + math.pi / 2) + m2 / math.tan(t + 3 * math.pi / 4))


def minimal_level(s: CliffordSystem) -> tuple[float, float]:
    """(t*, cos 4t*) where the mean curvature of the level vanishes, by bisection on (0, π/4)."""
    if s.m2 <= 0:
        raise DegenerateSystemError(f"minimal level needs m2 > 0, got m2 = {s.m2}")
    lo, hi = 1e-12, math.pi / 4 - 1e-12
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mean_curvature(s.m1, s.m2, mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    t = 0.5 * (lo + hi)
    return t, math.cos(4 * t)
