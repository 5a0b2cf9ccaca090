"""Purely transcendental differential fields QQ(g1, ..., gk) with a derivation
given on the generators.

Field elements are plain :class:`RatFunc` values over the generator list;
membership in a presentation means having exactly its variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from axdiff.kernel.fastgcd import cancel
from axdiff.kernel.linalg import integer_kernel
from axdiff.kernel.ratfunc import RatFunc, rational_field, ratfuncs, to_fraction

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class DiffFieldPresentation:
    """QQ(generators) with ``derivation[i]`` the derivative of ``generators[i]``.

    The constant field is assumed to be QQ; nothing checks for further
    constants hiding among the generators.
    """

    generators: tuple[str, ...]
    derivation: tuple[RatFunc, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generators in {gens}")
        for g in gens:
            if not _IDENT.match(g):
                raise ValueError(f"invalid generator name {g!r}")
        if len(self.derivation) != len(gens):
            raise ValueError("derivation table must give one value per generator")
        table = tuple(ratfuncs(gens, self.derivation))
        object.__setattr__(self, "derivation", table)

    @classmethod
    def from_table(cls, table: Mapping[str, object]) -> "DiffFieldPresentation":
        """Build from ``{"t": "1", "u": "u"}``; values may be strings or numbers."""
        gens = tuple(table)
        return cls(gens, tuple(ratfuncs(gens, table.values())))

    @property
    def k(self) -> int:
        return len(self.generators)

    def __call__(self, value) -> RatFunc:
        """Coerce a number, expression string, or RatFunc into this field."""
        return ratfuncs(self.generators, [value])[0]

    def elements(self, values: Iterable) -> list[RatFunc]:
        return ratfuncs(self.generators, values)

    def gen(self, name: str) -> RatFunc:
        return RatFunc.var(self.generators, name)

    def derivation_of(self, name: str) -> RatFunc:
        return self.derivation[self.generators.index(name)]

    def check_member(self, f: RatFunc) -> None:
        if f.variables != self.generators:
            raise ValueError(
                f"{f} lives in QQ({', '.join(f.variables)}), "
                f"not QQ({', '.join(self.generators)})")

    def zero(self) -> RatFunc:
        return RatFunc.const(self.generators, 0)

    def one(self) -> RatFunc:
        return RatFunc.const(self.generators, 1)


def constants_presentation() -> DiffFieldPresentation:
    """QQ itself, with the zero derivation."""
    return DiffFieldPresentation((), ())


@lru_cache(maxsize=256)
def _weights(F: DiffFieldPresentation):
    """(L, w) with L the lcm of the derivation denominators and w_i = L * d(g_i)."""
    ring = rational_field(F.generators).ring
    L = ring.one
    for dg in F.derivation:
        if dg:
            L = L.lcm(dg.den)
    return L, tuple(dg.num * L.exquo(dg.den) if dg else ring.zero for dg in F.derivation)


def derive(F: DiffFieldPresentation, f: RatFunc) -> RatFunc:
    """Extend the derivation from the generators by the chain rule.

    Computed as one fraction (sum_i (n_i d - n d_i) w_i) / (d^2 L) so that
    only a single gcd is taken.

    >>> F = DiffFieldPresentation.from_table({"t": "1", "u": "u"})
    >>> str(derive(F, F("t^2*u")))
    't^2*u + 2*t*u'
    """
    F.check_member(f)
    L, weights = _weights(F)
    frac = f.frac
    n, d = frac.numer, frac.denom
    gens = frac.field.ring.gens
    acc = frac.field.ring.zero
    for x, w in zip(gens, weights):
        if w:
            term = n.diff(x) * d - n * d.diff(x)
            if term:
                acc += term * w
    if not acc:
        return f - f
    return RatFunc(frac.field.raw_new(*cancel(acc, d * d * L)))


def is_constant(F: DiffFieldPresentation, f: RatFunc) -> bool:
    return not derive(F, f)


def numerator_matrix(values: Sequence[RatFunc]) -> list[list]:
    """Write ``values`` over a common denominator; return the QQ matrix whose
    column j holds the numerator coefficients of ``values[j]``."""
    if not values:
        return []
    den = values[0].den
    for v in values[1:]:
        den = den.lcm(v.den)
    numerators = [v.num * den.exquo(v.den) for v in values]
    monoms = sorted({m for p in numerators for m in p.itermonoms()})
    return [[to_fraction(p.get(m, 0)) for p in numerators] for m in monoms]


def q_relations_mod_constants(F: DiffFieldPresentation, elems: Sequence) -> list[tuple[int, ...]]:
    """QQ-basis (primitive integer vectors) of {q : sum q_i * derive(a_i) = 0}.

    An empty result certifies that the elements are QQ-linearly independent
    modulo the constants.
    """
    elems = F.elements(elems)
    if not elems:
        return []
    rows = numerator_matrix([derive(F, a) for a in elems])
    return integer_kernel(rows, ncols=len(elems))


def prolong(F: DiffFieldPresentation, elems: Sequence, order: int) -> list[RatFunc]:
    """``[e for e in elems] + [derive(e) ...] + ...`` up to ``order`` derivatives."""
    if order < 0:
        raise ValueError("prolongation order must be nonnegative")
    row = F.elements(elems)
    out = list(row)
    for _ in range(order):
        row = [derive(F, e) for e in row]
        out.extend(row)
    return out
