"""Orders and residues on QQ(t) at rational places and at infinity.

A 1-form is f(t) dt.  Finite residues come from partial fractions.  At
infinity the residue is computed by substituting t = 1/s, and separately as
minus the sum of the finite residues; the two must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from axdiff.kernel.partfrac import (UnsupportedPlaceError, degree, laurent_at,
                                    partial_fractions, pole_multiplicities,
                                    series_quotient, split_ratfunc, trim,
                                    univariate_variable)
from axdiff.kernel.ratfunc import RatFunc

INFINITE_ORDER = math.inf


class ResidueIdentityError(ValueError):
    """sum c_i db_i/b_i is not d(nu)."""


@dataclass(frozen=True)
class Place:
    kind: str  # "finite" or "infinity"
    c: Fraction | None = None

    @classmethod
    def finite(cls, c) -> "Place":
        return cls("finite", Fraction(c))

    @classmethod
    def infinity(cls) -> "Place":
        return cls("infinity")

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinity"

    def sort_key(self):
        return (1, 0) if self.is_infinite else (0, self.c)

    def __str__(self):
        return "t=oo" if self.is_infinite else f"t={self.c}"


@dataclass(frozen=True)
class RatForm1:
    """The form f dt."""

    f: RatFunc
    var: str

    @classmethod
    def of(cls, f: RatFunc, var: str | None = None) -> "RatForm1":
        return cls(f, univariate_variable(f, var))

    @classmethod
    def exact(cls, e: RatFunc, var: str | None = None) -> "RatForm1":
        """de."""
        var = univariate_variable(e, var)
        return cls(e.partial(var) if var in e.variables else e - e, var)

    @classmethod
    def dlog(cls, e: RatFunc, var: str | None = None) -> "RatForm1":
        """de/e."""
        if not e:
            raise ZeroDivisionError("dlog of zero")
        form = cls.exact(e, var)
        return cls(form.f / e, form.var)

    def __add__(self, other: "RatForm1") -> "RatForm1":
        return RatForm1(self.f + other.f, self.var)

    def scale(self, c) -> "RatForm1":
        return RatForm1(self.f * c, self.var)

    def __str__(self):
        return f"({self.f})*d{self.var}"


def ord_place(e: RatFunc, p: Place, var: str | None = None):
    """Order of vanishing; ``INFINITE_ORDER`` for e = 0."""
    if not e:
        return INFINITE_ORDER
    var = univariate_variable(e, var)
    num, den = split_ratfunc(e, var)
    if p.is_infinite:
        return degree(den) - degree(num)
    v, _ = laurent_at(num, den, p.c, 1)
    return v


def finite_residues(omega: RatForm1) -> dict[Fraction, Fraction]:
    """Nonzero residues at all finite places (all poles must be rational)."""
    if not omega.f:
        return {}
    pf = partial_fractions(omega.f, omega.var)
    return {root: c for root, order, c in pf.terms if order == 1 and c}


def residue_at_infinity_substitution(omega: RatForm1) -> Fraction:
    """f(t) dt = -f(1/s) s^-2 ds; read off the s^-1 coefficient."""
    if not omega.f:
        return Fraction(0)
    num, den = split_ratfunc(omega.f, omega.var)
    dn, dd = degree(num), degree(den)
    k = dn - dd + 1
    if k < 0:
        return Fraction(0)
    rnum, rden = list(reversed(num)), list(reversed(den))
    return -series_quotient(trim(rnum) or [Fraction(0)], rden, k + 1)[k]


def residue_at_infinity_sum(omega: RatForm1) -> Fraction:
    return -sum(finite_residues(omega).values(), Fraction(0))


def residue_at(omega: RatForm1, p: Place) -> Fraction:
    if p.is_infinite:
        direct = residue_at_infinity_substitution(omega)
        total = residue_at_infinity_sum(omega)
        if direct != total:
            raise AssertionError(
                f"residue at infinity: substitution gives {direct}, sum rule gives {total}")
        return direct
    return finite_residues(omega).get(p.c, Fraction(0))


def dlog_residue_check(e: RatFunc, p: Place, var: str | None = None) -> bool:
    """res_p(de/e) = ord_p(e) and res_p(de) = 0."""
    var = univariate_variable(e, var)
    return (residue_at(RatForm1.dlog(e, var), p) == ord_place(e, p, var)
            and residue_at(RatForm1.exact(e, var), p) == 0)


def relevant_places(e: RatFunc, var: str | None = None) -> list[Place]:
    """Rational zeros and poles of e, plus infinity if ord there is nonzero."""
    var = univariate_variable(e, var)
    num, den = split_ratfunc(e, var)
    roots = {r for r, _ in pole_multiplicities(num)} | {r for r, _ in pole_multiplicities(den)}
    places = [Place.finite(r) for r in sorted(roots)]
    if degree(num) != degree(den):
        places.append(Place.infinity())
    return places


@dataclass(frozen=True)
class PlaceEntry:
    place: Place | None
    orders: tuple[int, ...]
    residues: tuple[Fraction, ...]
    weighted_order: Fraction
    status: str  # "ok", "fail" or "unsupported"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class Claim5Report:
    var: str
    entries: tuple[PlaceEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def common_variable(funcs: Sequence[RatFunc]) -> str:
    free = sorted({v for f in funcs for v in f.free_variables()})
    if len(free) > 1:
        raise ValueError(f"residue data must be univariate, found {', '.join(free)}")
    if free:
        return free[0]
    for f in funcs:
        if f.variables:
            return f.variables[0]
    return "t"


def claim5_local_check(bs: Sequence[RatFunc], c: Sequence, nu: RatFunc, *,
                       strict: bool = True) -> Claim5Report:
    """Check sum c_i db_i/b_i = d(nu), then sum c_i ord_p(b_i) = 0 at every
    place where some b_i has a zero or pole.

    With ``strict=False`` an irrational zero or pole becomes an
    "unsupported" entry instead of an exception.
    """
    bs = list(bs)
    c = [Fraction(x) for x in c]
    if len(c) != len(bs):
        raise ValueError(f"{len(bs)} functions but {len(c)} coefficients")
    var = common_variable(bs + [nu])
    for i, b in enumerate(bs, 1):
        if not b:
            raise ValueError(f"b{i} = 0")
    lhs = RatForm1.of(nu - nu, var)
    for ci, b in zip(c, bs):
        lhs = lhs + RatForm1.dlog(b, var).scale(ci)
    rhs = RatForm1.exact(nu, var)
    if lhs.f != rhs.f:
        raise ResidueIdentityError(
            f"sum c_i db_i/b_i = {lhs} differs from d(nu) = {rhs}")

    places: set[Place] = set()
    entries = []
    for i, b in enumerate(bs, 1):
        try:
            places.update(relevant_places(b, var))
        except UnsupportedPlaceError as exc:
            if strict:
                raise
            entries.append(PlaceEntry(None, (), (), Fraction(0), "unsupported",
                                      f"b{i}: {exc}"))
    for p in sorted(places, key=Place.sort_key):
        orders = tuple(ord_place(b, p, var) for b in bs)
        try:
            residues = tuple(residue_at(RatForm1.dlog(b, var), p) for b in bs)
            res_nu = residue_at(rhs, p)
        except UnsupportedPlaceError as exc:
            if strict:
                raise
            entries.append(PlaceEntry(p, orders, (), Fraction(0), "unsupported", str(exc)))
            continue
        weighted = sum((ci * o for ci, o in zip(c, orders)), Fraction(0))
        consistent = all(r == o for r, o in zip(residues, orders)) and res_nu == 0
        status = "ok" if weighted == 0 and consistent else "fail"
        entries.append(PlaceEntry(p, orders, residues, weighted, status))
    return Claim5Report(var, tuple(entries))
