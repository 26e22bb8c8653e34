"""Symmetric Clifford systems (P_0, ..., P_m) on R^{2l}."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import ExactMatrix, block_diag, blocks, dot, exact_vector
from .rep import CliffordRep, delta, irreducible_generators, verify_rep


@dataclass(frozen=True)
class CliffordSystem:
    """Symmetric Clifford system.

    ``summand_signs`` records the P_0 orientation of each irreducible summand
    (+1 canonical, -1 flipped); it is empty for systems that were not
    assembled from irreducible summands.
    """

    m: int
    l: int
    matrices: tuple[ExactMatrix, ...]
    summand_signs: tuple[int, ...] = ()
    _float: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.matrices) != self.m + 1:
            raise ValueError(f"m={self.m} needs {self.m + 1} matrices, got {len(self.matrices)}")
        for p in self.matrices:
            if p.shape != (2 * self.l, 2 * self.l):
                raise ValueError(f"matrix of shape {p.shape} for a system on R^{2 * self.l}")

    @property
    def m1(self) -> int:
        return self.m

    @property
    def m2(self) -> int:
        return self.l - self.m - 1

    @property
    def dim(self) -> int:
        return 2 * self.l

    def __getitem__(self, i: int) -> ExactMatrix:
        return self.matrices[i]

    def float_stack(self) -> np.ndarray:
        """All P_i as one float array of shape (m+1, 2l, 2l); cached."""
        if not self._float:
            self._float.append(np.stack([p.to_float() for p in self.matrices]))
        return self._float[0]

    def product(self, indices: Sequence[int]) -> ExactMatrix:
        out = ExactMatrix.identity(self.dim)
        for i in indices:
            out = out @ self.matrices[i]
        return out

    def product_trace(self) -> int:
        return product_trace(self)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "l": self.l,
            "m1": self.m1,
            "m2": self.m2,
            "summand_signs": list(self.summand_signs),
            "product_trace": self.product_trace(),
            "matrices": [p.to_json() for p in self.matrices],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CliffordSystem":
        try:
            mats = tuple(ExactMatrix.from_json(p) for p in data["matrices"])
            m = int(data.get("m", len(mats) - 1))
            l = int(data.get("l", mats[0].rows // 2))
            signs = tuple(int(s) for s in data.get("summand_signs", []))
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed system object: {exc}") from None
        return cls(m, l, mats, signs)


@dataclass(frozen=True)
class SphereElement:
    """Element ``Σ c_i P_i`` of the span of a Clifford system."""

    system: CliffordSystem
    coefficients: tuple

    @property
    def matrix(self) -> ExactMatrix:
        out = ExactMatrix.zeros(self.system.dim, self.system.dim)
        for c, p in zip(self.coefficients, self.system.matrices):
            if c:
                out = out + p * c
        return out

    @property
    def norm2(self):
        return sum(c * c for c in self.coefficients)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coefficients)

    def float_matrix(self) -> np.ndarray:
        c = np.array([float(v) for v in self.coefficients])
        return np.tensordot(c, self.system.float_stack(), axes=1)

    def orthogonal_complement(self) -> list["SphereElement"]:
        """A basis of Σ_P, the span of system elements orthogonal to this one."""
        c = [Fraction(v) for v in self.coefficients]
        k = next(i for i, v in enumerate(c) if v != 0)
        out = []
        for j in range(len(c)):
            if j == k:
                continue
            coeffs = [Fraction(0)] * len(c)
            # c_k e_j - c_j e_k is orthogonal to c
            coeffs[j] = c[k]
            coeffs[k] = -c[j]
            out.append(SphereElement(self.system, tuple(coeffs)))
        return out


def sphere_element(s: CliffordSystem, c: Sequence) -> SphereElement:
    if len(c) != s.m + 1:
        raise ValueError(f"expected {s.m + 1} coefficients, got {len(c)}")
    coeffs = tuple(v if isinstance(v, float) else Fraction(v) for v in c)
    return SphereElement(s, coeffs)


def basis_element(s: CliffordSystem, i: int) -> SphereElement:
    return sphere_element(s, [1 if j == i else 0 for j in range(s.m + 1)])


def build_system(rep: CliffordRep) -> CliffordSystem:
    """P_0(u,v)=(u,-v), P_1(u,v)=(v,u), P_{1+i}(u,v)=(E_i v, -E_i u) on R^{2δ}."""
    problems = verify_rep(rep)
    if problems:
        raise ValueError("invalid representation: " + "; ".join(problems))
    d = rep.delta
    ident = ExactMatrix.identity(d)
    zero = ExactMatrix.zeros(d, d)
    mats = [blocks([[ident, zero], [zero, -ident]]), blocks([[zero, ident], [ident, zero]])]
    mats += [blocks([[zero, e], [-e, zero]]) for e in rep.generators]
    return CliffordSystem(rep.m, d, tuple(mats), (1,))


def direct_sum(a: CliffordSystem, b: CliffordSystem) -> CliffordSystem:
    if a.m != b.m:
        raise ValueError(f"direct sum needs equal m, got {a.m} and {b.m}")
    mats = tuple(block_diag(p, q) for p, q in zip(a.matrices, b.matrices))
    return CliffordSystem(a.m, a.l + b.l, mats, a.summand_signs + b.summand_signs)


def flip_p0(s: CliffordSystem) -> CliffordSystem:
    mats = (-s.matrices[0],) + s.matrices[1:]
    return CliffordSystem(s.m, s.l, mats, tuple(-x for x in s.summand_signs))


def make_system(m: int, k: int = 1, signs: Sequence[int] | None = None) -> CliffordSystem:
    """Direct sum of ``k`` irreducible systems with the given P_0 orientations."""
    if k < 1:
        raise ValueError("k must be >= 1")
    signs = list(signs) if signs is not None else [1] * k
    if len(signs) != k or any(x not in (1, -1) for x in signs):
        raise ValueError(f"need {k} signs in {{+1,-1}}, got {signs}")
    irreducible = build_system(irreducible_generators(m))
    flipped = flip_p0(irreducible)
    out = None
    for x in signs:
        piece = irreducible if x == 1 else flipped
        out = piece if out is None else direct_sum(out, piece)
    return out


def verify_system(s: CliffordSystem) -> list[str]:
    problems = []
    ident = ExactMatrix.identity(s.dim)
    for i, p in enumerate(s.matrices):
        if not p.is_symmetric():
            problems.append(f"P_{i} is not symmetric")
        if p @ p != ident:
            problems.append(f"P_{i}^2 != Id")
    for i, j in itertools.combinations(range(s.m + 1), 2):
        p, q = s.matrices[i], s.matrices[j]
        if not (p @ q + q @ p).is_zero():
            problems.append(f"P_{i}P_{j} + P_{j}P_{i} != 0")
    return problems


def product_trace(s: CliffordSystem) -> int:
    t = s.product(range(s.m + 1)).trace()
    return int(t) if t.denominator == 1 else t


def enumerate_classes(m: int, k: int) -> list[tuple[CliffordSystem, int]]:
    """One representative per geometric equivalence class on R^{2kδ(m)}.

    For m ≡ 0 mod 4 the classes are the direct sums with j = 0..[k/2] flipped
    summands, distinguished by |Trace(P_0⋯P_m)| = 2δ(m)(k-2j).
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be >= 1")
    if m % 4 != 0:
        s = make_system(m, k)
        return [(s, abs(s.product_trace()))]
    out = []
    for j in range(k // 2 + 1):
        s = make_system(m, k, [1] * (k - j) + [-1] * j)
        out.append((s, abs(s.product_trace())))
    return out


def truncated_extension(m: int) -> tuple[CliffordSystem, ExactMatrix]:
    """An extendable m-system: the irreducible (m+1)-system minus its last matrix.

    Returns the system together with the dropped matrix P_{m+1}.
    """
    big = build_system(irreducible_generators(m + 1))
    system = CliffordSystem(m, big.l, big.matrices[:-1])
    return system, big.matrices[-1]


def definite_from_extension(m: int) -> tuple[CliffordSystem, ExactMatrix, ExactMatrix]:
    """System (Q_1⋯Q_m, Q_1, ..., Q_m) built from an irreducible (m+1)-system Q.

    For m ≡ 0 mod 4 this satisfies P_0 P_1 ⋯ P_m = Id.  Returns the system and
    the two matrices Q_0, Q_{m+1} that complete Q_1..Q_m to a larger system.
    """
    if m % 4 != 0:
        raise ValueError("the product Q_1⋯Q_m is a symmetric involution only for m ≡ 0 mod 4")
    big = build_system(irreducible_generators(m + 1))
    head = ExactMatrix.identity(big.dim)
    for q in big.matrices[1:m + 1]:
        head = head @ q
    system = CliffordSystem(m, big.l, (head,) + big.matrices[1:m + 1])
    return system, big.matrices[0], big.matrices[m + 1]


# ---------------------------------------------------------------------------
# random exact data


def random_rational(rng: np.random.Generator, size: int, span: int = 9) -> np.ndarray:
    nums = rng.integers(-span, span + 1, size=size)
    dens = rng.integers(1, span + 1, size=size)
    return exact_vector(Fraction(int(a), int(b)) for a, b in zip(nums, dens))


def random_unit_rational(rng: np.random.Generator, n: int, span: int = 6) -> list[Fraction]:
    """Rational point on S^{n-1} via inverse stereographic projection."""
    if n == 1:
        return [Fraction(1) if rng.integers(2) else Fraction(-1)]
    t = [Fraction(int(a), int(b)) for a, b in
         zip(rng.integers(-span, span + 1, size=n - 1), rng.integers(1, span + 1, size=n - 1))]
    r2 = sum(x * x for x in t)
    return [2 * x / (r2 + 1) for x in t] + [(r2 - 1) / (r2 + 1)]


def random_orthogonal(n: int, rng: np.random.Generator, rotations: int | None = None) -> ExactMatrix:
    """Exact orthogonal matrix: a product of Givens rotations with rational angles."""
    out = ExactMatrix.identity(n)
    for _ in range(rotations if rotations is not None else 2 * n):
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
        u = Fraction(int(rng.integers(1, 8)), int(rng.integers(1, 8)))
        c, s = (1 - u * u) / (1 + u * u), 2 * u / (1 + u * u)
        g = np.empty((n, n), dtype=object)
        g[:] = Fraction(0)
        for d in range(n):
            g[d, d] = Fraction(1)
        g[i, i], g[j, j], g[i, j], g[j, i] = c, c, -s, s
        out = ExactMatrix(g) @ out
    return out


def conjugate(s: CliffordSystem, a: ExactMatrix) -> CliffordSystem:
    """The system (A P_i A^T)."""
    return CliffordSystem(s.m, s.l, tuple(a @ p @ a.T for p in s.matrices), s.summand_signs)


# ---------------------------------------------------------------------------
# identities of the Clifford sphere


def inner(p: ExactMatrix, q: ExactMatrix) -> Fraction:
    """⟨P, Q⟩ = Trace(PQ) / dim."""
    return (p @ q).trace() / p.rows


def quadratic_sum(s: CliffordSystem, x: Sequence) -> Fraction:
    """H(x) = Σ ⟨P_i x, x⟩²."""
    return sum((dot(p @ x, x) ** 2 for p in s.matrices), Fraction(0))


def sphere_identity_checks(s: CliffordSystem, rng: np.random.Generator, samples: int = 3) -> list[dict]:
    """Exact checks of the Clifford sphere properties (i), (iii), (iv), (v)."""
    checks = []
    n = s.dim
    ident = ExactMatrix.identity(n)

    ok = True
    for _ in range(samples):
        c = random_rational(rng, s.m + 1)
        el = sphere_element(s, c)
        ok &= el.matrix @ el.matrix == ident * el.norm2
    checks.append({"name": "sphere (i): P^2 = |c|^2 Id", "expected": True, "computed": bool(ok)})

    ok = True
    for _ in range(samples):
        p = sphere_element(s, random_unit_rational(rng, s.m + 1)).matrix
        x = random_rational(rng, n)
        ok &= quadratic_sum(s, p @ x) == quadratic_sum(s, x)
    checks.append({"name": "sphere (iii): H(Px) = H(x)", "expected": True, "computed": bool(ok)})

    ok = True
    for r in range(1, min(5, s.m + 1) + 1):
        for idx in itertools.islice(itertools.combinations(range(s.m + 1), r), 6):
            q = s.product(idx)
            ok &= q.is_symmetric() if r % 4 in (0, 1) else q.is_skew()
    checks.append({"name": "sphere (iv): symmetry of orthonormal products", "expected": True,
                   "computed": bool(ok)})

    ok = True
    for _ in range(samples):
        p = sphere_element(s, random_rational(rng, s.m + 1)).matrix
        q = sphere_element(s, random_rational(rng, s.m + 1)).matrix
        x = random_rational(rng, n)
        ok &= dot(p @ x, q @ x) == inner(p, q) * dot(x, x)
    checks.append({"name": "sphere (v): <Px,Qx> = <P,Q><x,x>", "expected": True, "computed": bool(ok)})
    return checks
