"""Fraction cancellation with FLINT's multivariate gcd.

``cancel(num, den)`` returns the same normal form as sympy's
``PolyElement.cancel`` over QQ: integer coefficients, numerator and
denominator coprime in ZZ[x] (content included), denominator with positive
leading coefficient.  Only the gcd is delegated; the result is converted
back to sympy polynomials in the original ring.
"""

from __future__ import annotations

from functools import lru_cache
from math import lcm

import flint
from sympy.polys.domains import QQ


@lru_cache(maxsize=None)
def _context(names: tuple[str, ...], order: str):
    return flint.fmpz_mpoly_ctx.get(names, order)


def _order_name(ring) -> str:
    return {"lex": "lex", "grlex": "deglex", "grevlex": "degrevlex"}[ring.order.alias]


def _to_flint(p, ctx, scale: int):
    return ctx.from_dict({m: int(c * scale) for m, c in p.items()})


def _from_flint(p, ring):
    # flint hands back fmpz exponents and coefficients
    return ring.from_dict({tuple(map(int, m)): QQ(int(c)) for m, c in p.to_dict().items()})


def _denominator(p) -> int:
    return lcm(*(int(c.denominator) for c in p.values()))


def cancel(num, den):
    ring = num.ring
    if not num:
        return ring.zero, ring.one
    if not ring.ngens:
        return num.cancel(den)
    ctx = _context(tuple(str(s) for s in ring.symbols), _order_name(ring))
    # num/den = (num * dn * dd) / (den * dn * dd) with both sides integral
    scale = _denominator(num) * _denominator(den)
    a = _to_flint(num, ctx, scale)
    b = _to_flint(den, ctx, scale)
    g = a.gcd(b)
    a, b = a / g, b / g
    if b.leading_coefficient() < 0:
        a, b = -a, -b
    return _from_flint(a, ring), _from_flint(b, ring)


def gcd(a, b):
    """A gcd of two polynomials over QQ, up to a rational factor."""
    ring = a.ring
    if not a or not b or not ring.ngens:
        return a.gcd(b)
    ctx = _context(tuple(str(s) for s in ring.symbols), _order_name(ring))
    g = _to_flint(a, ctx, _denominator(a)).gcd(_to_flint(b, ctx, _denominator(b)))
    return _from_flint(g, ring)
