"""Buchberger's algorithm and multivariate division.

Works for sparse polynomials over any field domain sympy provides (QQ, or
QQ(t, ...) as a coefficient field).  Two pair-elimination criteria are
used: coprime leading monomials, and the chain criterion.
"""

from __future__ import annotations

from typing import Sequence

from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm

from axdiff.kernel.ratfunc import MPoly, monomial_order


def _with_order(polys: Sequence[MPoly], order):
    ring = polys[0].ring
    target = ring.clone(order=monomial_order(order))
    return ring, target, [p.set_ring(target) for p in polys]


def _reduce(p: MPoly, basis: Sequence[MPoly]) -> MPoly:
    """Full reduction of ``p`` by ``basis`` (all in one ring/order)."""
    ring = p.ring
    domain = ring.domain
    leads = [(g.LM, g.LC, g) for g in basis if g]
    rem = ring.zero.copy()
    p = p.copy()
    while p:
        monom, coeff = p.LT
        for lm, lc, g in leads:
            if monomial_divides(lm, monom):
                factor = domain.quo(coeff, lc)
                p = p - g.mul_term((monomial_div(monom, lm), factor))
                break
        else:
            rem[monom] = coeff
            del p[monom]
    return rem


def _spoly(f: MPoly, g: MPoly) -> MPoly:
    domain = f.ring.domain
    lcm = monomial_lcm(f.LM, g.LM)
    a = f.mul_term((monomial_div(lcm, f.LM), domain.quo(domain.one, f.LC)))
    b = g.mul_term((monomial_div(lcm, g.LM), domain.quo(domain.one, g.LC)))
    return a - b


def _coprime(m1, m2) -> bool:
    return all(not (a and b) for a, b in zip(m1, m2))


def _buchberger(gens: list[MPoly]) -> list[MPoly]:
    ring = gens[0].ring
    order = ring.order
    basis = [g.monic() for g in gens if g]
    if not basis:
        return []
    pending = {(i, j) for j in range(len(basis)) for i in range(j)}

    def pair_key(pair):
        i, j = pair
        lcm = monomial_lcm(basis[i].LM, basis[j].LM)
        return (sum(lcm), order(lcm), i, j)

    while pending:
        i, j = min(pending, key=pair_key)
        pending.discard((i, j))
        fi, fj = basis[i], basis[j]
        if _coprime(fi.LM, fj.LM):
            continue
        lcm = monomial_lcm(fi.LM, fj.LM)
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if ((min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending):
                continue
            if monomial_divides(basis[k].LM, lcm):
                chain = True
                break
        if chain:
            continue
        h = _reduce(_spoly(fi, fj), basis)
        if h:
            h = h.monic()
            if h.is_ground:
                return [ring.one]
            n = len(basis)
            basis.append(h)
            pending.update((k, n) for k in range(n))
    return basis


def _interreduce(basis: list[MPoly]) -> list[MPoly]:
    minimal = []
    for i, g in enumerate(basis):
        if any(monomial_divides(h.LM, g.LM) and (h.LM != g.LM or j < i)
               for j, h in enumerate(basis) if j != i):
            continue
        minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        reduced.append(_reduce(g, others).monic())
    order = basis[0].ring.order if basis else None
    reduced.sort(key=lambda g: order(g.LM), reverse=True)
    return reduced


def groebner_basis(gens: Sequence[MPoly], order="grevlex") -> list[MPoly]:
    """Reduced Groebner basis, sorted by leading monomial (largest first).

    The polynomials are returned in the ring of the input, whatever the order
    used for the computation.

    >>> from axdiff.kernel.ratfunc import poly_ring
    >>> R = poly_ring(("x", "y"))
    >>> x, y = R.gens
    >>> groebner_basis([x*y - 1, x**2])
    [1]
    """
    if not gens:
        raise ValueError("groebner_basis needs at least one generator")
    ring, target, polys = _with_order(list(gens), order)
    basis = _interreduce(_buchberger(polys))
    return [g.set_ring(ring) for g in basis]


def normal_form(p: MPoly, basis: Sequence[MPoly], order="grevlex") -> MPoly:
    """Remainder of ``p`` on division by a Groebner basis; zero iff ``p`` is
    in the ideal."""
    if not p or not basis:
        return p
    ring, target, polys = _with_order([p, *basis], order)
    return _reduce(polys[0], polys[1:]).set_ring(ring)


def is_unit_ideal(basis: Sequence[MPoly]) -> bool:
    return any(g and g.is_ground for g in basis)
