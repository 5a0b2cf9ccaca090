"""Affine rational D-varieties over a differential field.

A variety X in affine n-space over K = QQ(g1..gk) is given by ideal
generators (polynomials in the coordinates with coefficients in K) and a
rational section s of the shifted tangent bundle, i.e. the values of the
lifted derivation on the coordinate functions.  Functions on X are kept as
fractions of polynomials in normal form modulo a reduced Groebner basis.

Irreducibility of X is the caller's responsibility; only the emptiness of
the presented ideal (basis = {1}) is checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from sympy.polys.domains import FractionField
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_mul
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from axdiff.difffield import DiffFieldPresentation, derive
from axdiff.kernel.fastgcd import cancel, gcd
from axdiff.kernel.groebner import groebner_basis, is_unit_ideal
from axdiff.kernel.linalg import linear_kernel, rank, rref
from axdiff.kernel.parse import format_poly, parse_expr
from axdiff.kernel.ratfunc import RatFunc, rational_field


class EmptyVarietyError(ValueError):
    """The ideal generators generate the unit ideal."""


class InvalidSectionError(ValueError):
    """The section fails the shifted-tangent-bundle equations."""

    def __init__(self, message, check: "SectionCheck | None" = None):
        super().__init__(message)
        self.check = check


class UndefinedError(ValueError):
    """A function (or the section) has a vanishing denominator."""


class NotSharpError(ValueError):
    pass


@dataclass(frozen=True)
class SectionCheck:
    ok: bool
    failing_generator: PolyElement | None = None
    remainder: PolyElement | None = None

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "section satisfies every shifted tangent equation"
        return (f"generator {format_poly_k(self.failing_generator)}: "
                f"residue {format_poly(self.remainder)} is not in the ideal")


def format_poly_k(p: PolyElement) -> str:
    """Print a polynomial whose coefficients live in QQ(g1..gk)."""
    if p is None:
        return "None"
    names = [str(s) for s in p.ring.symbols]
    if not p:
        return "0"
    parts = []
    for monom, c in p.terms():
        coeff = RatFunc(c)
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, monom) if e)
        text = str(coeff)
        if not mono:
            parts.append(text)
            continue
        if coeff == 1:
            parts.append(mono)
        elif coeff == -1:
            parts.append(f"-{mono}")
        else:
            if not (coeff.is_polynomial() and len(coeff.num) == 1):
                text = f"({text})"
            parts.append(f"{text}*{mono}")
    out = parts[0]
    for part in parts[1:]:
        out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return out


class AffineDVariety:
    """(X, s) with X = V(ideal) in affine space over the base field."""

    def __init__(self, base: DiffFieldPresentation, coords: Sequence[str],
                 ideal: Sequence = (), section: Sequence = (), *, check: bool = True):
        self.base = base
        self.coords = tuple(coords)
        if not self.coords:
            raise ValueError("ambient dimension must be at least 1")
        clash = set(self.coords) & set(base.generators)
        if clash:
            raise ValueError(f"coordinate names clash with generators: {sorted(clash)}")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("duplicate coordinate names")
        self.K = FractionField(rational_field(base.generators))
        self.ring = PolyRing(self.coords, self.K, grevlex)
        self.all_vars = self.coords + base.generators
        self.ideal_gens = tuple(self._to_poly(p) for p in ideal)
        self.gb = tuple(groebner_basis(self.ideal_gens)) if self.ideal_gens else ()
        if is_unit_ideal(self.gb):
            raise EmptyVarietyError("the ideal generators generate the unit ideal")
        if len(section) != self.n:
            raise ValueError(f"section needs {self.n} components, got {len(section)}")
        self.section = tuple(self.function(s) for s in section)
        if check:
            result = validate_section(self)
            if not result:
                raise InvalidSectionError(
                    f"not a section of the shifted tangent bundle: {result.describe()}",
                    result)

    @property
    def n(self) -> int:
        return len(self.coords)

    # -- conversions ---------------------------------------------------------

    def k_elem(self, value):
        """An element of K as a sympy domain element."""
        return self.base(value).frac

    def _split(self, f: RatFunc) -> tuple[PolyElement, PolyElement]:
        """Write f in QQ(coords + gens) as num/den with num, den in K[coords]."""
        f = f if f.variables == self.all_vars else f.to_vars(self.all_vars)
        return self._poly_from_qq(f.num), self._poly_from_qq(f.den)

    def _poly_from_qq(self, p) -> PolyElement:
        n = self.n
        kfield = self.K.field
        grouped: dict[tuple, dict] = {}
        for monom, c in p.iterterms():
            grouped.setdefault(monom[:n], {})[monom[n:]] = c
        terms = {}
        for xm, gterms in grouped.items():
            terms[xm] = kfield.new(kfield.ring.from_dict(gterms))
        return self.ring.from_dict(terms) if terms else self.ring.zero

    def _clear(self, p: PolyElement):
        """(q, L) with q in QQ[coords, gens] and p = q / L, L in QQ[gens]."""
        kring = self.K.field.ring
        L = kring.one
        for c in p.itercoeffs():
            L = L.lcm(c.denom)
        R = rational_field(self.all_vars).ring
        terms: dict[tuple, object] = {}
        for monom, c in p.iterterms():
            for gm, q in (c.numer * L.exquo(c.denom)).iterterms():
                key = monom + gm
                terms[key] = terms.get(key, 0) + q
        return R.from_dict({m: q for m, q in terms.items() if q}), L

    # -- fraction-free reduction in QQ[coords, gens] ---------------------------
    #
    # Functions on X are kept as num/den with num, den in R = QQ[coords, gens].
    # Reducing modulo the ideal over K only changes a polynomial by a factor
    # in QQ[gens], so it can be done by pseudo-division against the Groebner
    # basis with denominators cleared.  This avoids arithmetic in K, where
    # every coefficient operation costs a multivariate gcd.

    @cached_property
    def R(self):
        return rational_field(self.all_vars).ring

    @cached_property
    def _kring(self):
        return self.K.field.ring

    @cached_property
    def _cleared_gb(self):
        out = []
        for g in self.gb:
            parts = self._xsplit(self._clear(g)[0])
            lm = max(parts, key=self.ring.order)
            out.append((lm, parts[lm], parts))
        return out

    def _xsplit(self, p) -> dict:
        """R polynomial -> {x-monomial: coefficient in QQ[gens]}."""
        n = self.n
        grouped: dict[tuple, dict] = {}
        for monom, c in p.iterterms():
            grouped.setdefault(monom[:n], {})[monom[n:]] = c
        kring = self._kring
        return {xm: kring.from_dict(terms) for xm, terms in grouped.items()}

    def _xjoin(self, parts: dict):
        terms = {}
        for xm, c in parts.items():
            for gm, q in c.iterterms():
                terms[xm + gm] = q
        return self.R.from_dict(terms) if terms else self.R.zero

    def pseudo_reduce(self, p):
        """(r, lam) with lam in QQ[gens] nonzero and lam*p = r modulo the
        ideal, r having no monomial in the leading ideal."""
        kring = self._kring
        if not self.gb or not p:
            return p, kring.one
        order = self.ring.order
        basis = self._cleared_gb
        f = self._xsplit(p)
        rem: dict = {}
        lam = kring.one
        while f:
            m = max(f, key=order)
            c = f.pop(m)
            for lm, lc, parts in basis:
                if not monomial_divides(lm, m):
                    continue
                h = gcd(lc, c)
                a, b = lc.exquo(h), c.exquo(h)
                if a != 1:
                    f = {k: a * v for k, v in f.items()}
                    rem = {k: a * v for k, v in rem.items()}
                    lam = lam * a
                shift = monomial_div(m, lm)
                for gm, gc in parts.items():
                    if gm == lm:
                        continue
                    k = monomial_mul(gm, shift)
                    v = f.get(k, kring.zero) - b * gc
                    if v:
                        f[k] = v
                    else:
                        f.pop(k, None)
                break
            else:
                rem[m] = c
        return self._xjoin(rem), lam

    def is_reduced(self, p) -> bool:
        if not self.gb:
            return True
        leads = [lm for lm, _, _ in self._cleared_gb]
        n = self.n
        return not any(monomial_divides(lm, m[:n]) for m in p.itermonoms() for lm in leads)

    def in_ideal(self, p) -> bool:
        return not self.pseudo_reduce(p)[0]

    def _to_poly(self, p) -> PolyElement:
        if isinstance(p, PolyElement) and p.ring == self.ring:
            return p
        f = parse_expr(p, self.all_vars) if isinstance(p, str) else p
        num, den = self._split(f)
        if not den.is_ground:
            raise ValueError(f"ideal generator {f} has coordinates in its denominator")
        return num.quo_ground(den.LC)

    def function(self, value) -> "FunctionOnX":
        """Coerce a RatFunc over coords + gens, an expression string, a number,
        or a polynomial of K[coords] into K(X)."""
        if isinstance(value, FunctionOnX):
            return value
        if isinstance(value, PolyElement):
            if value.ring == self.ring:
                return FunctionOnX.make(self, self._clear(value)[0], self.R.one)
            return FunctionOnX.make(self, value.set_ring(self.R), self.R.one)
        if isinstance(value, str):
            value = parse_expr(value, self.all_vars)
        elif not isinstance(value, RatFunc):
            value = RatFunc.const(self.all_vars, value)
        if value.variables != self.all_vars:
            value = value.to_vars(self.all_vars)
        return FunctionOnX.make(self, value.num, value.den)

    def coordinate(self, i: int) -> "FunctionOnX":
        return FunctionOnX.make(self, self.R.gens[i], self.R.one)

    def point(self, coords: Sequence) -> "PointOnX":
        return PointOnX.make(self, coords)

    # -- derivations on coefficients and polynomials -------------------------

    def coefficient_derivative(self, p: PolyElement) -> PolyElement:
        """P^partial: the base derivation applied to every coefficient."""
        terms = {}
        for monom, c in p.iterterms():
            dc = derive(self.base, RatFunc(c))
            if dc:
                terms[monom] = dc.frac
        return self.ring.from_dict(terms) if terms else self.ring.zero

    def gradient(self, p: PolyElement) -> list[PolyElement]:
        return [p.diff(x) for x in self.ring.gens]

    def evaluate(self, p: PolyElement, alpha: Sequence) -> RatFunc:
        acc = self.K.zero
        powers = {}
        for monom, c in p.iterterms():
            term = c
            for i, e in enumerate(monom):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = alpha[i] ** e
                    term = term * powers[key]
            acc = acc + term
        return RatFunc(acc) if not isinstance(acc, int) else self.base(acc)

    def evaluate_r(self, p, alpha: Sequence) -> RatFunc:
        """Evaluate a polynomial of QQ[coords, gens] at coords = alpha.

        With alpha_i = P_i/Q over a common denominator Q, the value is
        sum c_m P^m Q^(D - |m|) / Q^D, so only the final division cancels.
        """
        kfield = self.K.field
        kring = self._kring
        parts = self._xsplit(p)
        if not parts:
            return RatFunc(kfield.zero)
        Q = kring.one
        for a in alpha:
            Q = Q.lcm(a.denom)
        P = [a.numer * Q.exquo(a.denom) for a in alpha]
        D = max(sum(m) for m in parts)
        qpow = [kring.one]
        for _ in range(D):
            qpow.append(qpow[-1] * Q)
        ppow: dict[tuple[int, int], object] = {}
        acc = kring.zero
        for xm, c in parts.items():
            term = c * qpow[D - sum(xm)]
            for i, e in enumerate(xm):
                if e:
                    if (i, e) not in ppow:
                        ppow[(i, e)] = P[i] ** e
                    term = term * ppow[(i, e)]
            acc = acc + term
        return RatFunc(kfield.raw_new(*cancel(acc, qpow[D])))

    @cached_property
    def _lift_data(self):
        """Common denominator L of the section and of the derivation table,
        and the numerators of each over L."""
        R = self.R
        fracs = [(sec.num, sec.den) for sec in self.section]
        for dg in self.base.derivation:
            dg = dg.to_vars(self.all_vars)
            fracs.append((dg.num.set_ring(R), dg.den.set_ring(R)))
        L = R.one
        for _, b in fracs:
            L = L.lcm(b)
        weights = [a * L.exquo(b) if a else R.zero for a, b in fracs]
        return L, weights

    def lift_fraction(self, num, den):
        """partial'(num/den) as a pair (N, D) of polynomials in QQ[coords, gens]."""
        L, weights = self._lift_data
        gens = self.R.gens
        N = self.R.zero
        for v, w in zip(gens, weights):
            if w:
                dn, dd = num.diff(v), den.diff(v)
                if dn or dd:
                    N = N + (dn * den - num * dd) * w
        return N, den * den * L

    def lift(self, f: RatFunc) -> RatFunc:
        """sum df/dx_i * s_i + sum df/dg_j * d(g_j), computed in QQ(coords, gens)."""
        f = f if f.variables == self.all_vars else f.to_vars(self.all_vars)
        return RatFunc.from_polys(*self.lift_fraction(f.num.set_ring(self.R),
                                                      f.den.set_ring(self.R)))

    def __repr__(self):
        ideal = ", ".join(format_poly_k(p) for p in self.ideal_gens)
        sec = ", ".join(str(s) for s in self.section)
        return f"AffineDVariety(coords={list(self.coords)}, ideal=[{ideal}], section=[{sec}])"


@dataclass(frozen=True, eq=False)
class FunctionOnX:
    """num/den with num, den in QQ[coords, gens], both reduced modulo the
    ideal (over K, up to factors in QQ[gens])."""

    home: AffineDVariety
    num: PolyElement
    den: PolyElement

    @classmethod
    def make(cls, X: AffineDVariety, num, den) -> "FunctionOnX":
        rn, ln = X.pseudo_reduce(num)
        rd, ld = X.pseudo_reduce(den)
        if not rd:
            raise UndefinedError("denominator vanishes identically on X")
        if not rn:
            return cls(X, X.R.zero, X.R.one)
        num = rn * ld.set_ring(X.R) if ld != 1 else rn
        den = rd * ln.set_ring(X.R) if ln != 1 else rd
        num, den = cancel(num, den)
        if not (X.is_reduced(num) and X.is_reduced(den)):
            rn, ln = X.pseudo_reduce(num)
            rd, ld = X.pseudo_reduce(den)
            num, den = rn * ld.set_ring(X.R), rd * ln.set_ring(X.R)
        lc = den.LC
        return cls(X, num.quo_ground(lc), den.quo_ground(lc))

    @property
    def ratfunc(self) -> RatFunc:
        """The representative as an element of QQ(coords, gens)."""
        return RatFunc.from_polys(self.num, self.den)

    def _other(self, other) -> "FunctionOnX":
        if isinstance(other, FunctionOnX):
            if other.home is not self.home:
                raise ValueError("functions on different varieties")
            return other
        return self.home.function(other)

    def __add__(self, other):
        o = self._other(other)
        return FunctionOnX.make(self.home, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FunctionOnX.make(self.home, self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return FunctionOnX(self.home, -self.num, self.den)

    def __mul__(self, other):
        o = self._other(other)
        return FunctionOnX.make(self.home, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if not o:
            raise ZeroDivisionError("division by a function vanishing on X")
        return FunctionOnX.make(self.home, self.num * o.den, self.den * o.num)

    def __pow__(self, e: int):
        out = self.home.function(1)
        for _ in range(e):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        try:
            o = self._other(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.home.in_ideal(self.num * o.den - o.num * self.den)

    __hash__ = None

    def defined_at(self, alpha: "PointOnX") -> bool:
        return bool(self.home.evaluate_r(self.den, alpha.values))

    def at(self, alpha: "PointOnX") -> RatFunc:
        den = self.home.evaluate_r(self.den, alpha.values)
        if not den:
            raise UndefinedError(f"{self} is not defined at {alpha}")
        return self.home.evaluate_r(self.num, alpha.values) / den

    def __str__(self):
        return str(self.ratfunc)

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class PointOnX:
    home: AffineDVariety
    coords: tuple[RatFunc, ...]

    @classmethod
    def make(cls, X: AffineDVariety, coords: Sequence) -> "PointOnX":
        coords = tuple(X.base.elements(coords))
        if len(coords) != X.n:
            raise ValueError(f"point needs {X.n} coordinates")
        pt = cls(X, coords)
        for P in X.ideal_gens:
            if X.evaluate(P, pt.values):
                raise ValueError(f"point {pt} is not on X: {format_poly_k(P)} does not vanish")
        return pt

    @cached_property
    def values(self):
        return [c.frac for c in self.coords]

    @cached_property
    def jacobian(self) -> list[list[RatFunc]]:
        X = self.home
        return [[X.evaluate(dp, self.values) for dp in X.gradient(P)] for P in X.ideal_gens]

    @cached_property
    def _echelon(self):
        return rref(self.jacobian) if self.jacobian else ([], [])

    def reduce_covector(self, rep: Sequence[RatFunc]) -> tuple[RatFunc, ...]:
        """Canonical representative of ``rep`` modulo the Jacobian row space."""
        rows, pivots = self._echelon
        v = list(rep)
        for row, p in zip(rows, pivots):
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return tuple(v)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True, eq=False)
class CotangentClass:
    """An element of the cotangent space at ``at``: the class of ``rep``
    modulo the row space of the Jacobian there."""

    at: PointOnX
    rep: tuple[RatFunc, ...]

    @cached_property
    def canonical(self) -> tuple[RatFunc, ...]:
        return self.at.reduce_covector(self.rep)

    def __eq__(self, other):
        if not isinstance(other, CotangentClass):
            return NotImplemented
        if other.at.home is not self.at.home or other.at.coords != self.at.coords:
            return False
        return self.canonical == other.canonical

    __hash__ = None

    def __add__(self, other: "CotangentClass"):
        return CotangentClass(self.at, tuple(a + b for a, b in zip(self.rep, other.rep)))

    def __sub__(self, other: "CotangentClass"):
        return CotangentClass(self.at, tuple(a - b for a, b in zip(self.rep, other.rep)))

    def scale(self, c) -> "CotangentClass":
        c = self.at.home.base(c)
        return CotangentClass(self.at, tuple(c * a for a in self.rep))

    def is_zero(self) -> bool:
        return not any(self.canonical)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.rep) + "]"


@dataclass(frozen=True, eq=False)
class CotangentFlow:
    """D_V on the cotangent space at a sharp point: row i of
    ``coordinate_images`` is the gradient of s_i there."""

    at: PointOnX
    coordinate_images: tuple[tuple[RatFunc, ...], ...] = field(repr=False)

    def apply(self, v: CotangentClass) -> CotangentClass:
        base = self.at.home.base
        out = [derive(base, c) for c in v.rep]
        for c, row in zip(v.rep, self.coordinate_images):
            if c:
                out = [o + c * r for o, r in zip(out, row)]
        return CotangentClass(self.at, tuple(out))


# -- operations ----------------------------------------------------------------

def shifted_tangent_ideal(X: AffineDVariety, u_names: Sequence[str] | None = None):
    """Generators of the shifted tangent bundle in K[x, u]."""
    if u_names is None:
        u_names = tuple(f"u_{x}" for x in X.coords)
    ring = PolyRing(X.coords + tuple(u_names), X.K, grevlex)
    us = ring.gens[X.n:]
    out = []
    for P in X.ideal_gens:
        lifted = P.set_ring(ring)
        out.append(lifted)
    for P in X.ideal_gens:
        eq = X.coefficient_derivative(P).set_ring(ring)
        for dP, u in zip(X.gradient(P), us):
            eq = eq + dP.set_ring(ring) * u
        out.append(eq)
    return out


def validate_section(X: AffineDVariety) -> SectionCheck:
    for P in X.ideal_gens:
        lifted = FunctionOnX.make(X, *X.lift_fraction(X._clear(P)[0], X.R.one))
        if lifted:
            return SectionCheck(False, P, lifted.num)
    return SectionCheck(True)


def induced_derivation(X: AffineDVariety, f) -> FunctionOnX:
    """The derivation of K(X) determined by the section."""
    f = X.function(f)
    return FunctionOnX.make(X, *X.lift_fraction(f.num, f.den))


def section_at(X: AffineDVariety, alpha: PointOnX) -> list[RatFunc]:
    out = []
    for i, s in enumerate(X.section):
        if not s.defined_at(alpha):
            raise UndefinedError(f"section component s_{X.coords[i]} is undefined at {alpha}")
        out.append(s.at(alpha))
    return out


def is_sharp_point(X: AffineDVariety, alpha) -> bool:
    alpha = alpha if isinstance(alpha, PointOnX) else X.point(alpha)
    values = section_at(X, alpha)
    return all(derive(X.base, a) == s for a, s in zip(alpha.coords, values))


def generic_sharp_point_check(X: AffineDVariety) -> bool:
    """Self-test: in K(X) the coordinate functions satisfy x_i' = s_i."""
    if not validate_section(X):
        raise InvalidSectionError("section does not satisfy the shifted tangent equations")
    return all(induced_derivation(X, X.coordinate(i)) == s for i, s in enumerate(X.section))


def section_from_derivation(X: AffineDVariety) -> list[FunctionOnX]:
    """Read the section back off the induced derivation."""
    return [induced_derivation(X, X.coordinate(i)) for i in range(X.n)]


def tangent_space(X: AffineDVariety, alpha) -> list[list[RatFunc]]:
    alpha = alpha if isinstance(alpha, PointOnX) else X.point(alpha)
    return linear_kernel(alpha.jacobian, ncols=X.n, sample=X.base.zero())


def cotangent_dimension(X: AffineDVariety, alpha) -> int:
    alpha = alpha if isinstance(alpha, PointOnX) else X.point(alpha)
    return X.n - (rank(alpha.jacobian) if alpha.jacobian else 0)


def cotangent_class(X: AffineDVariety, alpha, f) -> CotangentClass:
    """The differential of f at alpha, via the quotient rule on num/den."""
    alpha = alpha if isinstance(alpha, PointOnX) else X.point(alpha)
    f = X.function(f)
    vals = alpha.values
    den = X.evaluate_r(f.den, vals)
    if not den:
        raise UndefinedError(f"{f} is not defined at {alpha}")
    num = X.evaluate_r(f.num, vals)
    xs = X.R.gens[:X.n]
    gn = [X.evaluate_r(f.num.diff(x), vals) for x in xs]
    gd = [X.evaluate_r(f.den.diff(x), vals) for x in xs]
    rep = tuple((a * den - num * b) / (den * den) for a, b in zip(gn, gd))
    return CotangentClass(alpha, rep)


def cotangent_flow(X: AffineDVariety, alpha) -> CotangentFlow:
    alpha = alpha if isinstance(alpha, PointOnX) else X.point(alpha)
    if not is_sharp_point(X, alpha):
        raise NotSharpError(f"{alpha} is not a sharp point")
    rows = tuple(cotangent_class(X, alpha, s).rep for s in X.section)
    return CotangentFlow(alpha, rows)


def cotangent_flow_apply(X: AffineDVariety, alpha, v: CotangentClass) -> CotangentClass:
    return cotangent_flow(X, alpha).apply(v)
