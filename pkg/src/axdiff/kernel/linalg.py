"""Exact Gaussian elimination over any field whose elements support
``+ - * /`` and truthiness as the zero test (``Fraction``, ``RatFunc``,
sympy domain elements)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def _lift(x):
    return Fraction(x) if isinstance(x, int) else x


def rref(rows: Sequence[Sequence]):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    m = [[_lift(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def _zero_like(x):
    return x - x


def _one_like(x):
    return _zero_like(x) + 1


def nullspace(rows: Sequence[Sequence], ncols: int | None = None, *, sample=None):
    """Basis of the right kernel from the reduced echelon form: one vector per
    free column, with a 1 in that column."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if sample is None:
        sample = _lift(next((x for r in rows for x in r), Fraction(0)))
    zero, one = _zero_like(sample), _one_like(sample)
    red, pivots = rref(rows) if rows else ([], [])
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [zero] * ncols
        v[free] = one
        for row, p in zip(red, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def linear_kernel(matrix: Sequence[Sequence], ncols: int | None = None, *, sample=None):
    """Right kernel over the fraction field, each vector scaled so its first
    nonzero entry is 1.

    ``ncols`` and ``sample`` (an element of the field) are only needed for a
    matrix with no rows.
    """
    basis = nullspace(matrix, ncols, sample=sample)
    out = []
    for v in basis:
        lead = next(x for x in v if x)
        inv = 1 / lead
        out.append([x * inv for x in v])
    return out


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers with a positive first
    nonzero entry."""
    v = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def integer_kernel(matrix: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of the rational kernel as primitive integer vectors."""
    rows = [[Fraction(x) for x in r] for r in matrix]
    return [primitive_integer_vector(v) for v in nullspace(rows, ncols, sample=Fraction(0))]
