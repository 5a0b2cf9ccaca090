"""The exponential Ax-Schanuel bound, checked step by step on a concrete
scenario.

Given a_i, b_i in a presented differential field F with da_i = db_i/b_i, the
forms w_i = da_i - db_i/b_i are killed by the pairing with the derivation
and are flat for the Lie derivative.  If trdeg(a, b) were at most n the
forms would be F-dependent, hence QQ-dependent, which produces a monomial
relation among the b_i and a QQ-relation among the a_i modulo constants.
``verify_claims`` runs each of these steps and records what it finds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from axdiff.difffield import (DiffFieldPresentation, derive, is_constant,
                              numerator_matrix, q_relations_mod_constants)
from axdiff.forms import (DiffForm, combine, constant_dependence, d, dlog,
                          flat_check, pair_partial, rank_forms, trdeg)
from axdiff.kernel.linalg import integer_kernel, primitive_integer_vector
from axdiff.kernel.ratfunc import RatFunc


class TheoremViolation(AssertionError):
    """The hypotheses hold but a step of the argument failed.

    This can only come from a bug in the kernel.
    """


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class AxScenario:
    field: DiffFieldPresentation
    a: tuple[RatFunc, ...]
    b: tuple[RatFunc, ...]

    def __post_init__(self):
        a = tuple(self.field.elements(self.a))
        b = tuple(self.field.elements(self.b))
        if not a:
            raise ValueError("a scenario needs n >= 1")
        if len(a) != len(b):
            raise ValueError(f"a has {len(a)} entries but b has {len(b)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class HypothesisReport:
    logderiv_ok: tuple[bool, ...]
    b_nonzero: tuple[bool, ...]
    q_indep_mod_C: bool
    q_relations: tuple[tuple[int, ...], ...] = ()

    @property
    def all_hold(self) -> bool:
        return all(self.logderiv_ok) and all(self.b_nonzero) and self.q_indep_mod_C

    def failures(self) -> list[str]:
        out = []
        for i, ok in enumerate(self.b_nonzero, 1):
            if not ok:
                out.append(f"b{i} = 0")
        for i, ok in enumerate(self.logderiv_ok, 1):
            if not ok:
                out.append(f"d(a{i}) != d(b{i})/b{i}")
        if not self.q_indep_mod_C:
            rels = "; ".join(str(r) for r in self.q_relations)
            out.append(f"a is QQ-dependent modulo constants: {rels}")
        return out


@dataclass(frozen=True)
class AxVerdict:
    hypotheses: HypothesisReport
    forms: tuple[DiffForm, ...]
    trdeg_value: int
    bound: int
    satisfied: bool
    forms_flat: bool
    pairing_zero: bool
    onto_witness: int | None = None  # 0-based index with d(a_i) != 0
    forms_rank: int | None = None
    dependency: tuple[Fraction, ...] | None = None
    nu: RatFunc | None = None
    monomial_relation: tuple[int, ...] | None = None
    a_relation: tuple[int, ...] | None = None


def check_hypotheses(sc: AxScenario) -> HypothesisReport:
    F = sc.field
    nonzero = tuple(bool(b) for b in sc.b)
    logderiv = []
    for a, b in zip(sc.a, sc.b):
        logderiv.append(bool(b) and derive(F, a) == derive(F, b) / b)
    rels = q_relations_mod_constants(F, sc.a)
    return HypothesisReport(tuple(logderiv), nonzero, not rels, tuple(rels))


def build_forms(sc: AxScenario) -> list[DiffForm]:
    """w_i = d(a_i) - dlog(b_i)."""
    for i, b in enumerate(sc.b, 1):
        if not b:
            raise PreconditionError(f"b{i} = 0 has no logarithmic differential")
    F = sc.field
    return [d(F, a) - dlog(F, b) for a, b in zip(sc.a, sc.b)]


def verify_claims(sc: AxScenario, hyp: HypothesisReport | None = None) -> AxVerdict:
    F = sc.field
    hyp = hyp or check_hypotheses(sc)
    forms = build_forms(sc)
    n = sc.n
    pairing_zero = all(not pair_partial(F, w) for w in forms)
    witness = next((i for i, a in enumerate(sc.a) if derive(F, a)), None)
    flat = all(flat_check(F, w) for w in forms)
    value = trdeg(F, list(sc.a) + list(sc.b))
    satisfied = value >= n + 1
    logderiv = all(hyp.logderiv_ok)

    rank = dependency = nu = mono = a_rel = None
    if value <= n:
        rank = rank_forms(F, forms)
        if logderiv and witness is not None and rank >= n:
            raise TheoremViolation(
                f"trdeg {value} <= {n} but the {n} forms are F-independent")
        if flat and rank < n:
            dependency = constant_dependence(F, forms)
            if dependency is None or combine(F, dependency, forms):
                raise TheoremViolation("constant dependency does not kill the forms")
            nu = sum((F(c) * a for c, a in zip(dependency, sc.a)), F.zero())
            mono = monomial_relation(sc, dependency)
            if mono is not None:
                acc = F.zero()
                for k, a in zip(mono, sc.a):
                    acc = acc + k * derive(F, a)
                if not acc:
                    a_rel = mono
    if hyp.all_hold and not satisfied:
        raise TheoremViolation(
            f"hypotheses hold but trdeg = {value} < {n + 1}")
    return AxVerdict(hyp, tuple(forms), value, n + 1, satisfied, flat, pairing_zero,
                     witness, rank, dependency, nu, mono, a_rel)


def _power(b: RatFunc, e: int) -> RatFunc:
    return b ** e


def monomial_relation(sc: AxScenario, c: Sequence) -> tuple[int, ...] | None:
    """An integer vector d with prod b_i^d_i a constant, or ``None``.

    The candidates are the QQ-relations among the logarithmic derivatives
    db_i/b_i.  If ``c`` itself is one of them it is preferred.
    """
    F = sc.field
    forms = build_forms(sc)
    c = [Fraction(x) for x in c]
    if len(c) != sc.n:
        raise PreconditionError(f"need {sc.n} coefficients, got {len(c)}")
    if combine(F, c, forms):
        raise PreconditionError("sum c_i w_i is not zero")
    logs = [derive(F, b) / b for b in sc.b]
    kernel = integer_kernel(numerator_matrix(logs), ncols=sc.n)
    if not kernel:
        return None
    candidates = list(kernel)
    if any(c):
        cint = tuple(primitive_integer_vector(c))
        acc = F.zero()
        for k, lg in zip(cint, logs):
            acc = acc + k * lg
        if not acc:
            candidates.insert(0, cint)
    for dvec in candidates:
        prod = F.one()
        for k, b in zip(dvec, sc.b):
            if k:
                prod = prod * _power(b, k)
        if is_constant(F, prod) and any(dvec):
            return tuple(int(k) for k in dvec)
    raise TheoremViolation("a relation among the db_i/b_i gave a non-constant monomial")


# -- the group G_a^n x G_m^n ------------------------------------------------

@dataclass(frozen=True)
class GroupPoint:
    x: tuple[RatFunc, ...]
    y: tuple[RatFunc, ...]

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise ValueError("additive and multiplicative parts differ in length")
        for i, y in enumerate(self.y, 1):
            if not y:
                raise ValueError(f"y{i} = 0 is not in the multiplicative group")

    @classmethod
    def make(cls, F: DiffFieldPresentation, x: Sequence, y: Sequence) -> "GroupPoint":
        return cls(tuple(F.elements(x)), tuple(F.elements(y)))

    @classmethod
    def identity(cls, F: DiffFieldPresentation, n: int) -> "GroupPoint":
        return cls.make(F, [0] * n, [1] * n)


def group_mul(beta: GroupPoint, gamma: GroupPoint) -> GroupPoint:
    return GroupPoint(tuple(a + b for a, b in zip(beta.x, gamma.x)),
                      tuple(a * b for a, b in zip(beta.y, gamma.y)))


def log_derivative_hom(F: DiffFieldPresentation, c: Sequence, beta: GroupPoint) -> RatFunc:
    """l(beta) = sum c_i (dx_i - dy_i/y_i); its kernel is the subgroup where
    the form vanishes."""
    if len(c) != len(beta.x):
        raise ValueError("coefficient vector and point differ in length")
    acc = F.zero()
    for ci, x, y in zip(c, beta.x, beta.y):
        if not y:
            raise ValueError("y component is zero")
        acc = acc + F(ci) * (derive(F, x) - derive(F, y) / y)
    return acc


def jet_presentation(names: Sequence[str]) -> DiffFieldPresentation:
    """QQ(g, g_1 : g in names) with dg = g_1 and d(g_1) = 0: the derivatives
    of the named elements are themselves free."""
    gens = []
    table = []
    for g in names:
        gens += [g, f"{g}_1"]
        table += [f"{g}_1", "0"]
    return DiffFieldPresentation(tuple(gens), tuple(table))


def homomorphism_check(n: int, c: Sequence) -> bool:
    """l(beta * gamma) = l(beta) + l(gamma) with beta, gamma generic."""
    names = [f"{s}{i}" for s in ("x", "y", "X", "Y") for i in range(1, n + 1)]
    F = jet_presentation(names)
    beta = GroupPoint.make(F, names[:n], names[n:2 * n])
    gamma = GroupPoint.make(F, names[2 * n:3 * n], names[3 * n:])
    lhs = log_derivative_hom(F, c, group_mul(beta, gamma))
    return lhs == log_derivative_hom(F, c, beta) + log_derivative_hom(F, c, gamma)


def invariance_check(n: int, c: Sequence) -> bool:
    """Pull back w = sum c_i (dx_i - dy_i/y_i) along (x, y) -> (x + p, q*y)
    and compare the dx, dy parts with w (p, q are the translating point,
    held fixed)."""
    if len(c) != n:
        raise ValueError("need one coefficient per coordinate")
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    ps = [f"p{i}" for i in range(1, n + 1)]
    qs = [f"q{i}" for i in range(1, n + 1)]
    gens = tuple(xs + ys + ps + qs)
    F = DiffFieldPresentation(gens, tuple("0" for _ in gens))
    w = DiffForm.zero(F)
    pulled = DiffForm.zero(F)
    for ci, x, y, p, q in zip(c, xs, ys, ps, qs):
        ci = F(ci)
        w = w + ci * (d(F, x) - dlog(F, y))
        pulled = pulled + ci * (d(F, f"{x} + {p}") - dlog(F, f"{q}*{y}"))
    moving = set(xs + ys)
    return all(a == b for g, a, b in zip(gens, pulled.coeffs, w.coeffs) if g in moving)
