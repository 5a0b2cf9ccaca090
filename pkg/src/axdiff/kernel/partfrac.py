"""Univariate partial fractions over QQ for denominators that split into
rational linear factors.

Dense coefficient lists (``Fraction``, lowest degree first) are used for the
univariate work; they are small and keep the root and series manipulations
readable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from sympy import divisors

from axdiff.kernel.ratfunc import MPoly, RatFunc, to_fraction

UPoly = list  # list[Fraction], lowest degree first, no trailing zeros


class UnsupportedPlaceError(ValueError):
    """The denominator has an irreducible factor of degree > 1 over QQ."""


def trim(p: Sequence[Fraction]) -> UPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: UPoly) -> int:
    return len(p) - 1 if p else -1


def padd(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def pneg(p):
    return [-c for c in p]


def pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def pdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(p) >= len(q) and p:
        k = len(p) - len(q)
        c = p[-1] / lead
        quot[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        p = trim(p)
    return trim(quot), p


def pgcd(p, q):
    while q:
        p, q = q, pdivmod(p, q)[1]
    return [c / p[-1] for c in p] if p else p


def pderiv(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def taylor_shift(p, c):
    """Coefficients of p(s + c) in s."""
    out: UPoly = []
    for coeff in reversed(p):
        out = padd(pmul(out, [Fraction(c), Fraction(1)]), [coeff])
    return out


def valuation(p) -> int:
    return next(i for i, c in enumerate(p) if c)


def series_quotient(num, den, count: int) -> list[Fraction]:
    """First ``count`` power-series coefficients of num/den, den(0) != 0."""
    out = []
    for k in range(count):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


def laurent_at(num: UPoly, den: UPoly, c, count: int) -> tuple[int, list[Fraction]]:
    """Laurent expansion of num/den at t = c.

    Returns ``(v, coeffs)`` with num/den = sum(coeffs[k] * (t - c)**(v + k)).
    """
    if not num:
        raise ValueError("Laurent expansion of zero")
    n, d = taylor_shift(num, c), taylor_shift(den, c)
    vn, vd = valuation(n), valuation(d)
    return vn - vd, series_quotient(n[vn:], d[vd:], count)


def rational_roots(p: UPoly) -> tuple[list[Fraction], UPoly]:
    """Distinct rational roots of ``p`` and the cofactor left after dividing
    each of them out once."""
    p = trim(p)
    roots = []
    if p and p[0] == 0:
        roots.append(Fraction(0))
        p = p[valuation(p):]
    if degree(p) <= 0:
        return roots, p
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    cands = set()
    for a in divisors(abs(ints[0])):
        for b in divisors(abs(ints[-1])):
            cands.add(Fraction(a, b))
            cands.add(Fraction(-a, b))
    for r in sorted(cands):
        if degree(p) <= 0:
            break
        if peval(p, r) == 0:
            roots.append(r)
            p = pdivmod(p, [-r, Fraction(1)])[0]
    return sorted(roots), p


def univariate_variable(f: RatFunc, var: str | None = None) -> str:
    free = f.free_variables()
    if var is None:
        if len(free) > 1:
            raise ValueError(f"{f} is not univariate")
        if free:
            return free[0]
        return f.variables[0] if f.variables else "t"
    if any(v != var for v in free):
        raise ValueError(f"{f} involves variables other than {var}")
    return var


def to_upoly(p: MPoly, var: str) -> UPoly:
    names = [str(s) for s in p.ring.symbols]
    out: dict[int, Fraction] = {}
    idx = names.index(var) if var in names else None
    for monom, c in p.iterterms():
        e = monom[idx] if idx is not None else 0
        if any(x for i, x in enumerate(monom) if i != idx):
            raise ValueError(f"polynomial is not univariate in {var}")
        out[e] = to_fraction(c)
    if not out:
        return []
    return trim([out.get(i, Fraction(0)) for i in range(max(out) + 1)])


def from_upoly(p: UPoly, variables: Sequence[str], var: str) -> RatFunc:
    t = RatFunc.var(variables, var) if var in variables else None
    acc = RatFunc.const(variables, 0)
    for c in reversed(p):
        acc = acc * t + c if t is not None else acc + c
    return acc


def split_ratfunc(f: RatFunc, var: str) -> tuple[UPoly, UPoly]:
    return to_upoly(f.num, var), to_upoly(f.den, var)


@dataclass(frozen=True)
class PartialFractions:
    """``f = poly_part + sum(coeff / (var - root)**order)``."""

    var: str
    variables: tuple[str, ...]
    poly_part: tuple[Fraction, ...]
    terms: tuple[tuple[Fraction, int, Fraction], ...]

    def to_ratfunc(self) -> RatFunc:
        out = from_upoly(list(self.poly_part), self.variables, self.var)
        t = RatFunc.var(self.variables, self.var)
        for root, order, coeff in self.terms:
            out = out + coeff / (t - root) ** order
        return out

    def coefficient(self, root, order: int = 1) -> Fraction:
        for r, m, c in self.terms:
            if r == root and m == order:
                return c
        return Fraction(0)


def pole_multiplicities(den: UPoly) -> list[tuple[Fraction, int]]:
    """Rational roots of ``den`` with multiplicity; raises if ``den`` has a
    nonlinear irreducible factor."""
    if degree(den) <= 0:
        return []
    squarefree = pdivmod(den, pgcd(den, pderiv(den)))[0]
    roots, rest = rational_roots(squarefree)
    if degree(rest) > 0:
        raise UnsupportedPlaceError(
            f"irreducible factor of degree {degree(rest)} (no rational root)")
    out = []
    for r in roots:
        m, q = 0, den
        while True:
            quo, rem = pdivmod(q, [-r, Fraction(1)])
            if rem:
                break
            m, q = m + 1, quo
        out.append((r, m))
    return out


def partial_fractions(f: RatFunc, var: str | None = None) -> PartialFractions:
    """Decompose a univariate rational function.

    >>> from axdiff.kernel.parse import parse_expr
    >>> pf = partial_fractions(parse_expr("(3*t+1)/(t*(t+1))", ["t"]))
    >>> [(str(r), m, str(c)) for r, m, c in pf.terms]
    [('-1', 1, '2'), ('0', 1, '1')]
    """
    var = univariate_variable(f, var)
    num, den = split_ratfunc(f, var)
    poly_part, _ = pdivmod(num, den) if num else ([], [])
    terms = []
    if num:
        for root, m in pole_multiplicities(den):
            v, coeffs = laurent_at(num, den, root, m)
            # v == -m because f is reduced
            for k, c in enumerate(coeffs):
                if c:
                    terms.append((root, m - k, c))
    return PartialFractions(var, f.variables, tuple(poly_part), tuple(terms))
