"""Kaehler differentials of a presentation QQ(g1..gk) over QQ.

A form is stored in the free basis dg1, ..., dgk.  ``lie_D1`` is the Lie
derivative along the presentation's derivation, ``pair_partial`` evaluates a
form on that derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from axdiff.difffield import DiffFieldPresentation, _weights, derive, is_constant
from axdiff.kernel.fastgcd import cancel
from axdiff.kernel.linalg import linear_kernel, primitive_integer_vector, rank
from axdiff.kernel.parse import evaluate, format_ratfunc, parse_ast
from axdiff.kernel.ratfunc import RatFunc, rational_field


class NotFlatError(ValueError):
    """A form handed to ``constant_dependence`` is not killed by D1."""


class NonConstantDependencyError(AssertionError):
    """A minimal dependency among flat forms had a non-constant coefficient.

    Raising this means the kernel is wrong; it is never a valid outcome.
    """


@dataclass(frozen=True, eq=False)
class DiffForm:
    home: DiffFieldPresentation
    coeffs: tuple[RatFunc, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.home.k:
            raise ValueError(
                f"expected {self.home.k} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, F: DiffFieldPresentation) -> "DiffForm":
        return cls(F, tuple(F.zero() for _ in F.generators))

    @classmethod
    def basis(cls, F: DiffFieldPresentation, name: str) -> "DiffForm":
        i = F.generators.index(name)
        return cls(F, tuple(F.one() if j == i else F.zero() for j in range(F.k)))

    def _check(self, other: "DiffForm"):
        if not isinstance(other, DiffForm):
            return NotImplemented
        if other.home != self.home:
            raise ValueError("forms over different presentations")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DiffForm(self.home, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DiffForm(self.home, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DiffForm(self.home, tuple(-a for a in self.coeffs))

    def __mul__(self, scalar):
        if isinstance(scalar, DiffForm):
            return NotImplemented
        scalar = self.home(scalar)
        return DiffForm(self.home, tuple(scalar * a for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = self.home(scalar)
        return DiffForm(self.home, tuple(a / scalar for a in self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.home == other.home and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.home.generators, self.coeffs))

    def __str__(self):
        terms = []
        for g, c in zip(self.home.generators, self.coeffs):
            if not c:
                continue
            negative = c.num.LC < 0
            a = -c if negative else c
            if a == 1:
                body = f"d({g})"
            else:
                text = format_ratfunc(a)
                if not (a.is_polynomial() and len(a.num) == 1):
                    text = f"({text})"
                body = f"{text}*d({g})"
            terms.append((negative, body))
        if not terms:
            return "0"
        negative, body = terms[0]
        out = f"-{body}" if negative else body
        for negative, body in terms[1:]:
            out += f" - {body}" if negative else f" + {body}"
        return out

    def __repr__(self):
        return f"DiffForm({str(self)!r})"


def d(F: DiffFieldPresentation, f) -> DiffForm:
    """Universal derivation: coefficients are the formal partials."""
    f = F(f)
    return DiffForm(F, tuple(f.partial(g) for g in F.generators))


def dlog(F: DiffFieldPresentation, f) -> DiffForm:
    f = F(f)
    if not f:
        raise ZeroDivisionError("dlog of zero")
    return d(F, f) / f


def parse_form(F: DiffFieldPresentation, text: str) -> DiffForm:
    """Parse ``c1*d(g1) + ...``; ``d(expr)`` is allowed for any expression."""
    try:
        value = evaluate(parse_ast(text, allow_diff=True), F.generators,
                         diff=lambda f: d(F, f))
    except TypeError:
        raise ValueError(f"{text!r} mixes functions and forms in a sum") from None
    if isinstance(value, RatFunc):
        if value:
            raise ValueError(f"{text!r} is a function, not a differential form")
        return DiffForm.zero(F)
    return value


@lru_cache(maxsize=256)
def _table_jacobian(F: DiffFieldPresentation):
    """(M, p) with p[i][j] / M the partial of derive(g_i) in g_j."""
    ring = rational_field(F.generators).ring
    parts = [[dg.partial(g) for g in F.generators] for dg in F.derivation]
    M = ring.one
    for row in parts:
        for q in row:
            if q:
                M = M.lcm(q.den)
    return M, tuple(tuple(q.num * M.exquo(q.den) if q else ring.zero for q in row)
                    for row in parts)


def lie_D1(F: DiffFieldPresentation, omega: DiffForm) -> DiffForm:
    """D1(sum c_i dg_i) = sum (derive(c_i) dg_i + c_i d(derive(g_i))).

    Each output coefficient is assembled over one denominator e_j^2 L E M
    (e_j the denominator of c_j, L and M those of the derivation table and its
    Jacobian, E the lcm of the e_i) and cancelled once.
    """
    if omega.home != F:
        raise ValueError("form over a different presentation")
    L, weights = _weights(F)
    M, p = _table_jacobian(F)
    field = rational_field(F.generators)
    ring = field.ring
    gens = ring.gens
    live = [i for i, c in enumerate(omega.coeffs) if c]
    E = ring.one
    for i in live:
        E = E.lcm(omega.coeffs[i].frac.denom)
    scaled = {i: omega.coeffs[i].frac.numer * E.exquo(omega.coeffs[i].frac.denom)
              for i in live}
    out = []
    for j, c in enumerate(omega.coeffs):
        cross = ring.zero
        for i in live:
            if p[i][j]:
                cross += scaled[i] * p[i][j]
        n, e = c.frac.numer, c.frac.denom
        own = ring.zero
        if c:
            for x, w in zip(gens, weights):
                if w:
                    term = n.diff(x) * e - n * e.diff(x)
                    if term:
                        own += term * w
        if not own and not cross:
            out.append(F.zero())
            continue
        den = e * e * L
        out.append(RatFunc(field.raw_new(*cancel(own * E * M + cross * den, den * E * M))))
    return DiffForm(F, tuple(out))


def pair_partial(F: DiffFieldPresentation, omega: DiffForm) -> RatFunc:
    """Evaluate a form on the derivation: sum c_i * derive(g_i)."""
    acc = F.zero()
    for c, dg in zip(omega.coeffs, F.derivation):
        acc = acc + c * dg
    return acc


def form_matrix(forms: Sequence[DiffForm]) -> list[list[RatFunc]]:
    return [list(w.coeffs) for w in forms]


def rank_forms(F: DiffFieldPresentation, forms: Sequence[DiffForm]) -> int:
    """Rank over F of the coefficient matrix."""
    if not forms:
        return 0
    return rank(form_matrix(forms))


def trdeg(F: DiffFieldPresentation, elems: Sequence) -> int:
    """Transcendence degree over QQ, as the rank of the differentials."""
    return rank_forms(F, [d(F, e) for e in elems])


def flat_check(F: DiffFieldPresentation, omega: DiffForm) -> bool:
    return not lie_D1(F, omega)


def _dependent(forms: Sequence[DiffForm]) -> bool:
    return rank(form_matrix(forms)) < len(forms)


def constant_dependence(F: DiffFieldPresentation, flats: Sequence[DiffForm]):
    """A rational relation among flat forms, or ``None`` if they are
    F-linearly independent.

    Shrinks the family to a minimal F-dependent subset, solves for the
    relation with its first coefficient 1, and checks each coefficient is a
    constant.  The result is returned as a primitive integer vector over the
    full family (zeros outside the minimal subset).
    """
    flats = list(flats)
    for i, w in enumerate(flats):
        if not flat_check(F, w):
            raise NotFlatError(f"form #{i + 1} ({w}) is not flat: D1 = {lie_D1(F, w)}")
    if not flats or not _dependent(flats):
        return None
    support = list(range(len(flats)))
    for i in list(support):
        trial = [j for j in support if j != i]
        if trial and _dependent([flats[j] for j in trial]):
            support = trial
    sub = [flats[j] for j in support]
    # kernel of the transpose: relations sum c_j * w_j = 0
    cols = [[w.coeffs[r] for w in sub] for r in range(F.k)]
    kernel = linear_kernel(cols, ncols=len(sub), sample=F.zero())
    if len(kernel) != 1:
        raise NonConstantDependencyError(
            f"minimal dependent subset has a {len(kernel)}-dimensional relation space")
    relation = kernel[0]
    values = []
    for c in relation:
        if not is_constant(F, c):
            raise NonConstantDependencyError(
                f"minimal dependency has non-constant coefficient {c}")
        if not c.is_number():
            raise NonConstantDependencyError(
                f"coefficient {c} is constant but not rational: "
                "the presentation has constants beyond QQ")
        values.append(c.as_fraction())
    full = [Fraction(0)] * len(flats)
    for j, c in zip(support, values):
        full[j] = c
    return tuple(Fraction(x) for x in primitive_integer_vector(full))


def combine(F: DiffFieldPresentation, coeffs: Sequence, forms: Sequence[DiffForm]) -> DiffForm:
    acc = DiffForm.zero(F)
    for c, w in zip(coeffs, forms):
        acc = acc + F(c) * w
    return acc
