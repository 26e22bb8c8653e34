"""Independent reference implementations used only by the tests.

Nothing here imports the package's linear algebra: elimination is textbook
Gauss-Jordan over Fractions, derivatives are central differences.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

# irreducible representation dimensions for m = 1..8, from the published table
DELTA_TABLE = {1: 1, 2: 2, 3: 4, 4: 4, 5: 8, 6: 8, 7: 8, 8: 8}


def delta_oracle(m: int) -> int:
    q, r = divmod(m - 1, 8)
    return 16 ** q * DELTA_TABLE[r + 1]


def fraction_rref(rows):
    """Plain Gauss-Jordan over Fractions; returns (reduced rows, pivot columns)."""
    a = [[Fraction(v) for v in r] for r in rows]
    if not a:
        return [], []
    n = len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        a[r] = [v / lead for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * w for u, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def fraction_rank(rows) -> int:
    return len(fraction_rref(rows)[1])


def fraction_nullspace(rows, n):
    red, pivots = fraction_rref(rows)
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        out.append(v)
    return out


def same_span(a, b) -> bool:
    """Whether two lists of vectors span the same space (Fraction elimination)."""
    ra, rb = fraction_rank(a) if a else 0, fraction_rank(b) if b else 0
    both = fraction_rank(list(a) + list(b)) if (a or b) else 0
    return ra == rb == both


def fd_gradient(f, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    g = np.empty_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def fd_jacobian(grad, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    cols = []
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((grad(x + e) - grad(x - e)) / (2 * h))
    return np.column_stack(cols)


def minimal_t_closed_form(m1: int, m2: int) -> float:
    """Zero of m1 cot t + m2 cot(t+π/4) + m1 cot(t+π/2) + m2 cot(t+3π/4) on (0, π/4).

    The sum reduces to 2 m1 cot 2t − 2 m2 tan 2t.
    """
    return 0.5 * math.atan(math.sqrt(m1 / m2))
