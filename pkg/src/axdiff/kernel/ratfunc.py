"""Rational functions over QQ in an ordered list of variables.

Values are backed by sympy's sparse ``FracField`` elements.  The wrapper
fixes the canonical form (reduced fraction, denominator with leading
coefficient 1 under lex, which is also much faster than grevlex inside
sympy's gcd) and keeps the variable list attached to the
value so mismatched contexts fail loudly instead of silently coercing.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from axdiff.kernel.fastgcd import cancel

# Sparse multivariate polynomial over QQ (dict of exponent tuples -> mpq).
MPoly = PolyElement

ORDERS = {"grevlex": grevlex, "lex": lex}


def monomial_order(order):
    if isinstance(order, str):
        try:
            return ORDERS[order]
        except KeyError:
            raise ValueError(f"unknown monomial order {order!r}") from None
    return order


@lru_cache(maxsize=None)
def rational_field(variables: tuple[str, ...]) -> FracField:
    return FracField(tuple(variables), QQ, lex)


@lru_cache(maxsize=None)
def poly_ring(variables: tuple[str, ...], order: str = "grevlex") -> PolyRing:
    return PolyRing(tuple(variables), QQ, monomial_order(order))


def to_fraction(q) -> Fraction:
    """Convert a QQ/ZZ domain element (gmpy2 or python) to ``Fraction``."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    return Fraction(int(q.numerator), int(q.denominator))


def to_qq(q):
    if isinstance(q, Fraction):
        return QQ(q.numerator, q.denominator)
    if isinstance(q, int):
        return QQ(q)
    return QQ.convert(q)


class RatFunc:
    """An element of QQ(v1, ..., vk), immutable and canonical.

    Two ``RatFunc`` values over the same variables are equal exactly when
    they are equal as functions.
    """

    __slots__ = ("_f",)

    def __init__(self, frac: FracElement):
        self._f = frac

    # -- construction -------------------------------------------------------

    @classmethod
    def const(cls, variables: Sequence[str], value=0) -> "RatFunc":
        field = rational_field(tuple(variables))
        return cls(field.ground_new(to_qq(value)))

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "RatFunc":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        field = rational_field(variables)
        return cls(field.gens[variables.index(name)])

    @classmethod
    def from_polys(cls, num: MPoly, den: MPoly | None = None) -> "RatFunc":
        field = rational_field(tuple(str(s) for s in num.ring.symbols))
        num = num.set_ring(field.ring)
        if den is None:
            return _make(field, num, field.ring.one)
        den = den.set_ring(field.ring)
        if not den:
            raise ZeroDivisionError("denominator is the zero polynomial")
        return _make(field, num, den)

    # -- structure ----------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(str(s) for s in self._f.field.symbols)

    @property
    def frac(self) -> FracElement:
        return self._f

    @property
    def field(self) -> FracField:
        return self._f.field

    @property
    def num(self) -> MPoly:
        return self._normalized()[0]

    @property
    def den(self) -> MPoly:
        return self._normalized()[1]

    def _normalized(self):
        num, den = self._f.numer, self._f.denom
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.quo_ground(lc)
        return num, den

    def is_polynomial(self) -> bool:
        return self._f.denom.is_ground

    def is_number(self) -> bool:
        return self._f.numer.is_ground and self._f.denom.is_ground

    def as_fraction(self) -> Fraction:
        if not self.is_number():
            raise ValueError(f"{self} is not a rational number")
        return to_fraction(self._f.numer.LC) / to_fraction(self._f.denom.LC)

    def free_variables(self) -> tuple[str, ...]:
        used = set()
        for poly in (self._f.numer, self._f.denom):
            for monom in poly.itermonoms():
                used.update(i for i, e in enumerate(monom) if e)
        names = self.variables
        return tuple(names[i] for i in sorted(used))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other._f.field != self._f.field:
                raise ValueError(
                    f"variable mismatch: {self.variables} vs {other.variables}")
            return other._f
        if isinstance(other, (int, Rational)):
            return self._f.field.ground_new(to_qq(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else _add(self._f, o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else _add(self._f, o, -1)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else _add(o, self._f, -1)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return _make(self._f.field, self._f.numer * o.numer, self._f.denom * o.denom)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by the zero function")
        return _make(self._f.field, self._f.numer * o.denom, self._f.denom * o.numer)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self._f:
            raise ZeroDivisionError("division by the zero function")
        return _make(self._f.field, o.numer * self._f.denom, o.denom * self._f.numer)

    def __neg__(self):
        return RatFunc(-self._f)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            if not self._f:
                raise ZeroDivisionError("zero to a negative power")
            return RatFunc(self._f.field.one / self._f ** (-n))
        # a power of a reduced fraction is reduced
        return RatFunc(self._f ** n)

    def inverse(self) -> "RatFunc":
        return self ** -1

    def __bool__(self):
        return bool(self._f)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self._f.field == other._f.field and self._f == other._f
        if isinstance(other, (int, Rational)):
            return self._f == self._f.field.ground_new(to_qq(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, self._f.numer, self._f.denom))

    # -- calculus & evaluation ----------------------------------------------

    def partial(self, v: str) -> "RatFunc":
        """Formal partial derivative by the quotient rule."""
        names = self.variables
        if v not in names:
            raise KeyError(f"unknown variable {v!r}")
        i = names.index(v)
        n, d = self._f.numer, self._f.denom
        field = self._f.field
        dn, dd = n.diff(field.ring.gens[i]), d.diff(field.ring.gens[i])
        return _make(field, dn * d - n * dd, d * d)

    def gradient(self) -> list["RatFunc"]:
        return [self.partial(v) for v in self.variables]

    def subs(self, values: dict[str, "RatFunc"]) -> "RatFunc":
        """Substitute ``RatFunc`` values (sharing one variable list) for variables.

        Variables not in ``values`` must also exist in the target variables.
        """
        target = None
        for val in values.values():
            target = val.variables
            break
        if target is None:
            return self
        images = []
        for name in self.variables:
            if name in values:
                images.append(values[name])
            else:
                images.append(RatFunc.var(target, name))
        field = rational_field(tuple(target))
        return RatFunc(_eval_poly(self._f.numer, images, field)) / RatFunc(
            _eval_poly(self._f.denom, images, field))

    def to_vars(self, variables: Sequence[str]) -> "RatFunc":
        """Embed into QQ(variables); every free variable must be present."""
        variables = tuple(variables)
        missing = set(self.free_variables()) - set(variables)
        if missing:
            raise ValueError(f"variables {sorted(missing)} not in {variables}")
        field = rational_field(variables)
        return _make(field, _reorder(self._f.numer, field.ring),
                     _reorder(self._f.denom, field.ring))

    def __str__(self):
        from axdiff.kernel.parse import format_ratfunc
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({str(self)!r}, vars={list(self.variables)})"


def _make(field: FracField, num: MPoly, den: MPoly) -> RatFunc:
    """Cancel num/den to the field's normal form."""
    return RatFunc(field.raw_new(*cancel(num, den)))


def _add(f: FracElement, g: FracElement, sign: int) -> RatFunc:
    if f.denom == g.denom:
        num = f.numer + g.numer if sign > 0 else f.numer - g.numer
        return _make(f.field, num, f.denom)
    a, b = f.numer * g.denom, g.numer * f.denom
    return _make(f.field, a + b if sign > 0 else a - b, f.denom * g.denom)


def _reorder(p: MPoly, ring: PolyRing) -> MPoly:
    src = [str(s) for s in p.ring.symbols]
    dst = [str(s) for s in ring.symbols]
    pos = [dst.index(s) if s in dst else None for s in src]
    terms = {}
    for monom, c in p.iterterms():
        new = [0] * len(dst)
        for i, e in enumerate(monom):
            if e:
                new[pos[i]] = e
        terms[tuple(new)] = c
    return ring.from_dict(terms) if terms else ring.zero


def _eval_poly(p: MPoly, images: Sequence[RatFunc], field: FracField):
    acc = field.zero
    powers: dict[tuple[int, int], FracElement] = {}
    for monom, c in p.iterterms():
        term = field.ground_new(c)
        for i, e in enumerate(monom):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = images[i].frac ** e
                term = term * powers[key]
        acc = acc + term
    return acc


def ratfuncs(variables: Sequence[str], values: Iterable) -> list[RatFunc]:
    """Coerce numbers and expression strings into ``RatFunc`` over ``variables``."""
    from axdiff.kernel.parse import parse_expr
    out = []
    for v in values:
        if isinstance(v, RatFunc):
            out.append(v.to_vars(variables) if v.variables != tuple(variables) else v)
        elif isinstance(v, str):
            out.append(parse_expr(v, variables))
        else:
            out.append(RatFunc.const(variables, v))
    return out
