"""The FKM quartic F(x) = ⟨x,x⟩² − 2 Σ ⟨P_i x, x⟩² and its derivatives.

Every evaluation has an exact path (object arrays of rationals, used for
identity checks) and a float64 path (used for sampling and spectra); the
path is chosen from the dtype of the argument.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import ExactMatrix, Subspace, dot, exact_vector
from .system import CliffordSystem, random_rational


def _is_exact(x) -> bool:
    return isinstance(x, np.ndarray) and x.dtype == object or (
        not isinstance(x, np.ndarray) and any(isinstance(v, (int, Fraction)) for v in x)
        and not any(isinstance(v, float) for v in x))


@dataclass(frozen=True)
class FkmPolynomial:
    system: CliffordSystem
    g: int = 4

    @property
    def c(self) -> int:
        """Constant of the Laplace equation, 8(m2 − m1)."""
        return 8 * (self.system.m2 - self.system.m1)

    def _check(self, x) -> None:
        if len(x) != self.system.dim:
            raise ValueError(f"point of dimension {len(x)} for a polynomial on R^{self.system.dim}")

    # exact path -------------------------------------------------------
    def _exact_parts(self, x):
        x = exact_vector(x)
        px = [p @ x for p in self.system.matrices]
        gi = [dot(v, x) for v in px]
        return x, px, gi

    def value(self, x):
        self._check(x)
        if _is_exact(x):
            x, _, gi = self._exact_parts(x)
            r2 = dot(x, x)
            return r2 * r2 - 2 * sum((g * g for g in gi), Fraction(0))
        x = np.asarray(x, dtype=float)
        px = self.system.float_stack() @ x
        return float(x @ x) ** 2 - 2.0 * float(np.sum((px @ x) ** 2))

    def gradient(self, x):
        """4⟨x,x⟩x − 8 Σ ⟨P_i x, x⟩ P_i x."""
        self._check(x)
        if _is_exact(x):
            x, px, gi = self._exact_parts(x)
            out = 4 * dot(x, x) * x
            for g, v in zip(gi, px):
                if g:
                    out = out - 8 * g * v
            return out
        x = np.asarray(x, dtype=float)
        px = self.system.float_stack() @ x
        return 4.0 * (x @ x) * x - 8.0 * (px @ x) @ px

    def hessian(self, x):
        """4|x|² Id + 8xxᵀ − 16 Σ (P_i x)(P_i x)ᵀ − 8 Σ ⟨P_i x, x⟩ P_i.

        Valid for any family of symmetric matrices, Clifford or not.
        """
        self._check(x)
        n = self.system.dim
        if _is_exact(x):
            x, px, gi = self._exact_parts(x)
            acc = 8 * np.outer(x, x)
            r2 = dot(x, x)
            for d in range(n):
                acc[d, d] += 4 * r2
            for v in px:
                acc = acc - 16 * np.outer(v, v)
            out = ExactMatrix(acc)
            for g, p in zip(gi, self.system.matrices):
                if g:
                    out = out - p * (8 * g)
            return out
        x = np.asarray(x, dtype=float)
        stack = self.system.float_stack()
        px = stack @ x
        gi = px @ x
        return (4.0 * (x @ x) * np.eye(n) + 8.0 * np.outer(x, x)
                - 16.0 * px.T @ px - 8.0 * np.tensordot(gi, stack, axes=1))

    def laplacian(self, x):
        h = self.hessian(x)
        return h.trace() if isinstance(h, ExactMatrix) else float(np.trace(h))

    def level(self, x) -> float:
        """f(x) = F(x/|x|)."""
        x = np.asarray([float(v) for v in x])
        return self.value(x) / float(x @ x) ** 2


def verify_cartan_muenzner(p: FkmPolynomial, n_samples: int = 10, tol: float = 1e-9,
                           seed: int = 0, exact: bool = True) -> dict:
    """Residuals of |grad F|² = 16 r⁶ and ΔF = 8(m2−m1) r² at random points."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    res_grad = 0.0
    res_lap = 0.0
    exact_zero = True
    for _ in range(n_samples):
        if exact:
            x = random_rational(rng, p.system.dim)
            r2 = dot(x, x)
            if r2 == 0:
                continue
            gr = p.gradient(x)
            dg = dot(gr, gr) - 16 * r2 ** 3
            dl = p.laplacian(x) - p.c * r2
            exact_zero &= dg == 0 and dl == 0
            res_grad = max(res_grad, abs(float(dg / (16 * r2 ** 3))))
            res_lap = max(res_lap, abs(float(dl / (r2 * max(1, abs(p.c))))))
        else:
            x = rng.standard_normal(p.system.dim)
            r2 = float(x @ x)
            gr = p.gradient(x)
            res_grad = max(res_grad, abs(float(gr @ gr) - 16 * r2 ** 3) / (16 * r2 ** 3))
            res_lap = max(res_lap, abs(p.laplacian(x) - p.c * r2) / (r2 * max(1, abs(p.c))))
    passed = (exact_zero if exact else max(res_grad, res_lap) < tol)
    return {
        "residual_grad": res_grad,
        "residual_laplace": res_lap,
        "exact": exact,
        "exact_zero": bool(exact_zero) if exact else None,
        "seed": seed,
        "samples": n_samples,
        "tol": tol,
        "passed": bool(passed),
    }


def killing_tangency(p: FkmPolynomial, i: int, j: int, n_samples: int = 10, seed: int = 0) -> dict:
    """Max |⟨grad F(x), P_i P_j x⟩| over random rational x."""
    if i == j:
        raise ValueError("killing_tangency needs i != j")
    rng = np.random.default_rng(seed)
    pij = p.system.matrices[i] @ p.system.matrices[j]
    worst = Fraction(0)
    for _ in range(n_samples):
        x = random_rational(rng, p.system.dim)
        worst = max(worst, abs(dot(p.gradient(x), pij @ x)))
    return {"i": i, "j": j, "max_abs": worst, "seed": seed, "samples": n_samples,
            "tangent": worst == 0}


def _component_112(p: FkmPolynomial, n, k, b) -> Fraction:
    """Coefficient of α β γ² in F(αN + βk + γb) by exact polarization.

    h(γ) = ¼ Σ_{sα,sβ=±1} sα sβ F(sα N + sβ k + γ b) keeps only monomials odd
    in α and in β; with total degree 4 these are αβγ², αβ³ and α³β, so
    c = (h(2) + h(−2) − h(1) − h(−1)) / 6.
    """
    n, k, b = exact_vector(n), exact_vector(k), exact_vector(b)

    def h(gamma):
        acc = Fraction(0)
        for sa, sb in itertools.product((1, -1), repeat=2):
            acc += sa * sb * p.value(sa * n + sb * k + gamma * b)
        return acc / 4

    return (h(2) + h(-2) - h(1) - h(-1)) / 6


def condition_b_component(p: FkmPolynomial, x: Sequence, normal: Sequence, k: Sequence, b: Sequence,
                          kernel: Subspace | None = None, image: Subspace | None = None
                          ) -> tuple[Fraction, Fraction]:
    """Closed form −8 Σ ⟨P_i N, k⟩⟨P_i b, b⟩ and the polarization-extracted component.

    ``kernel``/``image`` are the common kernel K and common image B of the
    second fundamental tensors at ``x``; they are computed when omitted.
    Refuses points where condition (A) fails (dim K < m1) and vectors outside
    their stated subspaces.
    """
    from .focal import common_kernel_plus

    s = p.system
    x = exact_vector(x)
    normals = Subspace.span([q @ x for q in s.matrices], s.dim)
    if kernel is None:
        kernel, _ = common_kernel_plus(s, x)
    if kernel.dim != s.m1:
        raise ValueError(f"condition (A) fails at x: common kernel has dimension {kernel.dim} < m1 = {s.m1}")
    if image is None:
        image = (Subspace.span([x], s.dim) + normals + kernel).orthogonal_complement()
    if not normals.contains(normal):
        raise ValueError("N is not normal to M_+ at x")
    if not kernel.contains(k):
        raise ValueError("k is not in the common kernel")
    if not image.contains(b):
        raise ValueError("b is not in the common image")
    closed = -8 * sum((dot(q @ normal, k) * dot(q @ b, b) for q in s.matrices), Fraction(0))
    return closed, _component_112(p, normal, k, b)
