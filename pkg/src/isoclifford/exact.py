"""Exact rational linear algebra.

Matrices are stored as an integer numerator array plus one positive common
denominator.  Numerators live in ``int64`` arrays whenever the operands are
small enough that no intermediate value can overflow, and fall back to numpy
object arrays of Python ints otherwise, so arithmetic is always exact.

Rank and row reduction are fraction-free (Bareiss style); subspaces are kept
in a canonical primitive-integer reduced row echelon form so that equality of
subspaces is plain equality of their bases.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

_SAFE = 1 << 62


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return int(max(abs(int(v)) for v in a.flat))
    return int(np.abs(a).max())


def _to_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    return a.astype(object)


def _shrink(a: np.ndarray) -> np.ndarray:
    """Downcast an object integer array to int64 when every entry fits."""
    if a.dtype != object:
        return a
    if _absmax(a) < _SAFE:
        return a.astype(np.int64)
    return a


def _int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    inner = a.shape[-1] if a.ndim else 1
    if (a.dtype != object and b.dtype != object
            and _absmax(a) * _absmax(b) * max(inner, 1) < _SAFE):
        return a @ b
    return _shrink(_to_object(a) @ _to_object(b))


def _int_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and _absmax(a) + _absmax(b) < _SAFE:
        return a + b
    return _shrink(_to_object(a) + _to_object(b))


def _int_scale(a: np.ndarray, k: int) -> np.ndarray:
    if k == 1:
        return a
    if a.dtype != object and _absmax(a) * abs(k) < _SAFE:
        return a * k
    return _shrink(_to_object(a) * k)


def _content(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype != object:
        return int(np.gcd.reduce(a.ravel()))
    return reduce(math.gcd, (int(v) for v in a.flat), 0)


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda x, y: x * y // math.gcd(x, y), values, 1)


def exact_vector(values: Iterable) -> np.ndarray:
    """Return a 1-D object array of Fractions."""
    vals = [Fraction(v) for v in values]
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def integer_scaled(v: Sequence) -> tuple[np.ndarray, int]:
    """Split a rational vector as ``num / den`` with ``num`` an integer array."""
    fr = [Fraction(x) for x in v]
    den = _lcm(f.denominator for f in fr)
    num = np.empty(len(fr), dtype=object)
    num[:] = [f.numerator * (den // f.denominator) for f in fr]
    return _shrink(num), den


def primitive(v: Sequence) -> np.ndarray:
    """Integer vector on the same ray as ``v`` with coprime entries."""
    num, _ = integer_scaled(v)
    g = _content(num)
    num = _to_object(num)
    if g > 1:
        num = num // g
    return num


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def norm2(v: Sequence):
    return dot(v, v)


def is_rational_square(q) -> bool:
    q = Fraction(q)
    if q < 0:
        return False
    return math.isqrt(q.numerator) ** 2 == q.numerator and \
        math.isqrt(q.denominator) ** 2 == q.denominator


def rational_sqrt(q) -> Fraction:
    q = Fraction(q)
    if not is_rational_square(q):
        raise ValueError(f"{q} is not the square of a rational")
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


class ExactMatrix:
    """Dense matrix with exact rational entries (immutable)."""

    __slots__ = ("_num", "_den")

    def __init__(self, entries) -> None:
        if isinstance(entries, ExactMatrix):
            self._num, self._den = entries._num, entries._den
            return
        arr = np.asarray(entries, dtype=object)
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise ValueError("ExactMatrix needs a 2-D array of entries")
        fr = [Fraction(v) for v in arr.flat]
        den = _lcm(f.denominator for f in fr)
        num = np.empty(arr.shape, dtype=object)
        num.flat[:] = [f.numerator * (den // f.denominator) for f in fr]
        self._num, self._den = self._normalize(_shrink(num), den)
        self._num.setflags(write=False)

    @staticmethod
    def _normalize(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
        if den == 1:
            return num, 1
        g = math.gcd(_content(num), den)
        if g > 1:
            num = num // g
            den //= g
        return num, den

    @classmethod
    def _raw(cls, num: np.ndarray, den: int = 1) -> "ExactMatrix":
        obj = cls.__new__(cls)
        if den < 0:
            num, den = -num, -den
        num, den = cls._normalize(num, den)
        num = np.array(num, copy=True)
        num.setflags(write=False)
        obj._num, obj._den = num, den
        return obj

    # construction helpers
    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._raw(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls._raw(np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_int(cls, a) -> "ExactMatrix":
        """Wrap an integer array without going through Fractions."""
        arr = np.asarray(a)
        if arr.dtype == object:
            return cls._raw(_shrink(arr))
        return cls._raw(arr.astype(np.int64))

    @classmethod
    def from_columns(cls, vectors: Sequence[Sequence], rows: int | None = None) -> "ExactMatrix":
        if not vectors:
            return cls.zeros(rows or 0, 0)
        return cls([list(r) for r in zip(*vectors)])

    # shape and entries
    @property
    def shape(self) -> tuple[int, int]:
        return self._num.shape

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def numerator(self) -> np.ndarray:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def is_integral(self) -> bool:
        return self._den == 1

    @property
    def entries(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        out.flat[:] = [Fraction(int(v), self._den) for v in self._num.flat]
        return out

    def __getitem__(self, idx) -> Fraction:
        i, j = idx
        return Fraction(int(self._num[i, j]), self._den)

    def row(self, i: int) -> np.ndarray:
        return exact_vector(Fraction(int(v), self._den) for v in self._num[i])

    def column(self, j: int) -> np.ndarray:
        return exact_vector(Fraction(int(v), self._den) for v in self._num[:, j])

    def tolist(self) -> list[list[Fraction]]:
        return self.entries.tolist()

    # arithmetic
    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._raw(self._num.T, self._den)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._raw(_int_scale(self._num, -1), self._den)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        den = self._den * other._den // math.gcd(self._den, other._den)
        a = _int_scale(self._num, den // self._den)
        b = _int_scale(other._num, den // other._den)
        return ExactMatrix._raw(_int_add(a, b), den)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def __mul__(self, scalar) -> "ExactMatrix":
        if isinstance(scalar, ExactMatrix):
            return NotImplemented
        q = Fraction(scalar)
        return ExactMatrix._raw(_int_scale(self._num, q.numerator), self._den * q.denominator)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            return ExactMatrix._raw(_int_matmul(self._num, other._num), self._den * other._den)
        v = np.asarray(other, dtype=object)
        if v.ndim != 1 or v.shape[0] != self.cols:
            raise ValueError("matrix-vector dimension mismatch")
        num, den = integer_scaled(v)
        prod = _to_object(_int_matmul(self._num, num))
        scale = den * self._den
        return exact_vector(Fraction(int(p), scale) for p in prod)

    def __pow__(self, k: int) -> "ExactMatrix":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = ExactMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.shape == other.shape and self._den == other._den
                and bool(np.all(_to_object(self._num) == _to_object(other._num))))

    def __hash__(self) -> int:
        return hash((self.shape, self._den, tuple(int(v) for v in self._num.flat)))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, den={self._den})"

    # predicates
    def trace(self) -> Fraction:
        return Fraction(int(sum(int(v) for v in np.diagonal(self._num))), self._den)

    def is_zero(self) -> bool:
        return not bool(np.any(self._num != 0))

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == ExactMatrix.identity(self.rows)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.T

    def is_skew(self) -> bool:
        return self.rows == self.cols and self == -self.T

    def rank(self) -> int:
        return rank(self)

    def to_float(self) -> np.ndarray:
        if self._num.dtype != object:
            return self._num.astype(np.float64) / self._den
        return np.array([[float(Fraction(int(v), self._den)) for v in r] for r in self._num])

    # serialization
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[int(v) // math.gcd(int(v), self._den) if v else 0,
                         self._den // math.gcd(int(v), self._den) if v else 1]
                        for v in self._num.flat],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExactMatrix":
        try:
            rows, cols = int(data["rows"]), int(data["cols"])
            raw = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed matrix object: {exc}") from None
        flat = []
        for item in raw:
            # nested row lists are accepted as well as the flat pair list
            if isinstance(item, list) and item and isinstance(item[0], list):
                flat.extend(item)
            else:
                flat.append(item)
        if len(flat) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
        vals = []
        for pair in flat:
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ValueError(f"entry {pair!r} is not a [num, den] pair")
            num, den = pair
            if not isinstance(num, int) or not isinstance(den, int) or den == 0:
                raise ValueError(f"entry {pair!r} is not a valid rational")
            vals.append(Fraction(num, den))
        if rows == 0 or cols == 0:
            return cls.zeros(rows, cols)
        return cls(np.array(vals, dtype=object).reshape(rows, cols))


def block_diag(*mats: ExactMatrix) -> ExactMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    den = _lcm(m.denominator for m in mats)
    big = any(m.numerator.dtype == object for m in mats)
    out = np.zeros((rows, cols), dtype=object if big else np.int64)
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = _int_scale(m.numerator, den // m.denominator)
        r += m.rows
        c += m.cols
    return ExactMatrix._raw(_shrink(out) if big else out, den)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.numerator.dtype != object and b.numerator.dtype != object \
            and _absmax(a.numerator) * _absmax(b.numerator) < _SAFE:
        num = np.kron(a.numerator, b.numerator)
    else:
        num = _shrink(np.kron(_to_object(a.numerator), _to_object(b.numerator)))
    return ExactMatrix._raw(num, a.denominator * b.denominator)


def blocks(grid: Sequence[Sequence[ExactMatrix]]) -> ExactMatrix:
    """Assemble a block matrix from a grid of equally sized blocks."""
    den = _lcm(m.denominator for row in grid for m in row)
    rows = [np.hstack([_to_object(_int_scale(m.numerator, den // m.denominator)) for m in row])
            for row in grid]
    return ExactMatrix._raw(_shrink(np.vstack(rows)), den)


# ---------------------------------------------------------------------------
# fraction-free elimination


def _integer_rows(vectors: Iterable[Sequence]) -> list[np.ndarray]:
    rows = []
    for v in vectors:
        num, _ = integer_scaled(v)
        rows.append(_to_object(num))
    return rows


def _matrix_rows(m: ExactMatrix) -> list[np.ndarray]:
    num = _to_object(m.numerator)
    return [num[i].copy() for i in range(m.rows)]


def bareiss_rank(rows: list[np.ndarray]) -> int:
    """Rank of an integer matrix given as row arrays (Bareiss elimination)."""
    a = [r.copy() for r in rows if np.any(r != 0)]
    if not a:
        return 0
    n = len(a[0])
    prev = 1
    r = 0
    for c in range(n):
        if r == len(a):
            break
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, len(a)):
            a[i] = (p * a[i] - a[i][c] * a[r]) // prev
        prev = p
        r += 1
    return r


def ff_rref(rows: list[np.ndarray]) -> tuple[list[np.ndarray], list[int]]:
    """Fraction-free Gauss-Jordan reduction of an integer matrix.

    Returns the nonzero rows of the reduced form and the pivot columns.  Every
    intermediate entry is a minor of the input, so each division is exact.
    """
    a = [r.copy() for r in rows]
    if not a:
        return [], []
    n = len(a[0])
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == len(a):
            break
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(len(a)):
            if i != r:
                a[i] = (p * a[i] - a[i][c] * a[r]) // prev
        prev = p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _canonical_rows(rows: list[np.ndarray]) -> tuple[tuple[int, ...], ...]:
    red, pivots = ff_rref(rows)
    out = []
    for row, c in zip(red, pivots):
        g = _content(row)
        if row[c] < 0:
            g = -g
        out.append(tuple(int(v) // g for v in row))
    return tuple(out)


def rank(m: ExactMatrix | Sequence[Sequence]) -> int:
    """Exact rank over the rationals."""
    if isinstance(m, ExactMatrix):
        if m.rows == 0 or m.cols == 0:
            return 0
        rows = _matrix_rows(m)
    else:
        rows = _integer_rows(m)
    if not rows:
        return 0
    return bareiss_rank(rows)


def nullspace(m: ExactMatrix) -> list[np.ndarray]:
    """Basis (primitive integer vectors) of ``{v : m v = 0}``."""
    n = m.cols
    if m.rows == 0:
        return [_unit(n, i) for i in range(n)]
    red, pivots = ff_rref(_matrix_rows(m))
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = Fraction(-int(row[f]), int(row[c]))
        basis.append(primitive(v))
    return basis


def _unit(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=object)
    v[:] = 0
    v[i] = 1
    return v


class Subspace:
    """Linear subspace of Q^n with a canonical basis.

    The basis is the primitive-integer form of the reduced row echelon basis,
    which is unique, so ``==`` compares subspaces exactly.
    """

    __slots__ = ("ambient_dim", "_rows")

    def __init__(self, ambient_dim: int, rows: tuple[tuple[int, ...], ...] = ()) -> None:
        self.ambient_dim = ambient_dim
        self._rows = rows

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = [r for r in _integer_rows(vectors) if np.any(r != 0)]
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError(f"vector of length {len(r)} in ambient dimension {ambient_dim}")
        if not rows:
            return cls(ambient_dim)
        return cls(ambient_dim, _canonical_rows(rows))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls.span([_unit(ambient_dim, i) for i in range(ambient_dim)], ambient_dim)

    @classmethod
    def column_space(cls, m: ExactMatrix) -> "Subspace":
        return cls.span([m.column(j) for j in range(m.cols)], m.rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def basis(self) -> list[np.ndarray]:
        """Basis vectors as integer object arrays."""
        out = []
        for r in self._rows:
            v = np.empty(len(r), dtype=object)
            v[:] = r
            out.append(v)
        return out

    def matrix(self) -> ExactMatrix:
        """Basis vectors as the rows of a matrix."""
        if not self._rows:
            return ExactMatrix.zeros(0, self.ambient_dim)
        return ExactMatrix._raw(_shrink(np.array(self._rows, dtype=object)))

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def orthogonal_complement(self) -> "Subspace":
        if not self._rows:
            return Subspace.full(self.ambient_dim)
        return Subspace.span(nullspace(self.matrix()), self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        if not any(Fraction(x) != 0 for x in v):
            return True
        return rank(self.basis + [list(v)]) == self.dim if self._rows else False

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return (self + other).dim == other.dim

    def is_orthogonal_to(self, other: "Subspace") -> bool:
        self._check(other)
        return all(dot(u, v) == 0 for u in self.basis for v in other.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self._rows))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Exact basis of ``u ∩ v``.

    Solves ``Σ a_i u_i = Σ b_j v_j`` via the nullspace of ``[U^T | -V^T]``.
    """
    u._check(v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient_dim)
    n = u.ambient_dim
    cols = u.basis + [-b for b in v.basis]
    stacked = ExactMatrix._raw(_shrink(np.array(cols, dtype=object).T))
    out = []
    for sol in nullspace(stacked):
        vec = np.zeros(n, dtype=object)
        vec[:] = 0
        for coeff, b in zip(sol[:u.dim], u.basis):
            if coeff:
                vec = vec + coeff * b
        out.append(vec)
    return Subspace.span(out, n)


def involution_eigenspace(p: ExactMatrix, sign: int) -> Subspace:
    """Basis of the ``sign``-eigenspace of an involution, as the column space of ``Id + sign·P``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if p.rows != p.cols:
        raise ValueError("involution must be square")
    ident = ExactMatrix.identity(p.rows)
    if not (p @ p).is_identity():
        raise ValueError("matrix is not an involution (P^2 != Id)")
    return Subspace.column_space(ident + p * sign)
