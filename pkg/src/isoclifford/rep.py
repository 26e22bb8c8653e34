"""Irreducible real representations of the Clifford algebras C_{m-1}.

Conventions (fixed, every downstream construction depends on them):

* m = 2..8: ``E_i`` is left multiplication by the imaginary unit ``e_i`` of
  C (m=2), H (m=3, 4) or O (m=5..8), in the standard basis ``1, e_1, ...``.
  The algebras are produced by the Cayley-Dickson doubling
  ``(a, b)(c, d) = (ac - d*b, da + bc*)``.
* A representation of C_8 on R^16 is obtained by doubling the octonion one:
  ``G_0 = J ⊗ Id_8`` and ``G_i = σ_x ⊗ L_{e_i}`` for i = 1..7.
* m > 8: from the representation for m-8 on R^d the generators are
  ``G_a ⊗ Id_d`` (a = 0..7) followed by ``ω ⊗ E_j`` with ``ω = G_0 ⋯ G_7``.
* For m ≡ 0 mod 4 the last generator is negated if needed so that the
  associated irreducible Clifford system has ``Trace(P_0 ⋯ P_m) = +2δ(m)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exact import ExactMatrix, kron

_BASE_DELTA = {1: 1, 2: 2, 3: 4, 4: 4, 5: 8, 6: 8, 7: 8, 8: 8}


def delta(m: int) -> int:
    """Dimension δ(m) of the irreducible representation space of C_{m-1}."""
    if m < 1:
        raise ValueError(f"delta(m) needs m >= 1, got {m}")
    factor = 1
    while m > 8:
        m -= 8
        factor *= 16
    return factor * _BASE_DELTA[m]


@dataclass(frozen=True)
class CliffordRep:
    m: int
    delta: int
    generators: tuple[ExactMatrix, ...]

    def __post_init__(self) -> None:
        if len(self.generators) != self.m - 1:
            raise ValueError(f"C_{self.m - 1} needs {self.m - 1} generators, "
                             f"got {len(self.generators)}")
        for g in self.generators:
            if g.shape != (self.delta, self.delta):
                raise ValueError(f"generator of shape {g.shape} on R^{self.delta}")

    def to_json(self) -> dict:
        return {"m": self.m, "delta": self.delta,
                "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> "CliffordRep":
        gens = tuple(ExactMatrix.from_json(g) for g in data["generators"])
        return cls(int(data["m"]), int(data["delta"]), gens)


def _cd_conj(x: np.ndarray) -> np.ndarray:
    out = -x
    out[0] = x[0]
    return out


def _cd_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = len(x)
    if n == 1:
        return x * y
    h = n // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    return np.concatenate([
        _cd_mul(a, c) - _cd_mul(_cd_conj(d), b),
        _cd_mul(d, a) + _cd_mul(b, _cd_conj(c)),
    ])


def left_multiplications(n: int) -> list[np.ndarray]:
    """Integer matrices of ``y ↦ e_i y`` for i = 1..n-1 in the Cayley-Dickson algebra of dimension n."""
    eye = np.eye(n, dtype=np.int64)
    return [np.column_stack([_cd_mul(eye[i], eye[j]) for j in range(n)]) for i in range(1, n)]


@lru_cache(maxsize=None)
def _c8_on_r16() -> tuple[ExactMatrix, ...]:
    octo = left_multiplications(8)
    j = ExactMatrix.from_int([[0, -1], [1, 0]])
    sx = ExactMatrix.from_int([[0, 1], [1, 0]])
    gens = [kron(j, ExactMatrix.identity(8))]
    gens += [kron(sx, ExactMatrix.from_int(l)) for l in octo]
    return tuple(gens)


@lru_cache(maxsize=None)
def _raw_generators(m: int) -> tuple[ExactMatrix, ...]:
    if m == 1:
        return ()
    if m <= 8:
        algebra_dim = _BASE_DELTA[m]
        return tuple(ExactMatrix.from_int(l) for l in left_multiplications(algebra_dim)[:m - 1])
    base = _raw_generators(m - 8)
    d = delta(m - 8)
    g = _c8_on_r16()
    omega = g[0]
    for x in g[1:]:
        omega = omega @ x
    ident = ExactMatrix.identity(d)
    return tuple(kron(x, ident) for x in g) + tuple(kron(omega, e) for e in base)


@lru_cache(maxsize=None)
def irreducible_generators(m: int) -> CliffordRep:
    """Deterministic irreducible representation of C_{m-1} on R^{δ(m)}."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    gens = list(_raw_generators(m))
    if m % 4 == 0:
        from .system import build_system

        trial = build_system(CliffordRep(m, delta(m), tuple(gens)))
        if trial.product_trace() < 0:
            gens[-1] = -gens[-1]
    return CliffordRep(m, delta(m), tuple(gens))


def verify_rep(rep: CliffordRep) -> list[str]:
    """Every violated defining identity of the representation (empty when valid)."""
    problems = []
    ident = ExactMatrix.identity(rep.delta)
    gens = rep.generators
    for i, e in enumerate(gens, start=1):
        if not e.is_skew():
            problems.append(f"E_{i} is not skew-symmetric")
        if not (e.T @ e).is_identity():
            problems.append(f"E_{i} is not orthogonal")
        if e @ e != -ident:
            problems.append(f"E_{i}^2 != -Id")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not (gens[i] @ gens[j] + gens[j] @ gens[i]).is_zero():
                problems.append(f"E_{i + 1}E_{j + 1} + E_{j + 1}E_{i + 1} != 0")
    return problems
