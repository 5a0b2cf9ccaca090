"""Random exact objects for the property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from axdiff.difffield import DiffFieldPresentation, derive
from axdiff.dvariety import AffineDVariety
from axdiff.kernel.ratfunc import RatFunc, rational_field, to_qq


def rand_q(rng: random.Random, size: int = 5, zero_ok: bool = True) -> Fraction:
    while True:
        q = Fraction(rng.randint(-size, size), rng.randint(1, 3))
        if q or zero_ok:
            return q


def rand_poly(rng: random.Random, variables, degree: int = 4, terms: int = 4) -> RatFunc:
    """Random polynomial in ``variables`` of total degree <= ``degree``."""
    variables = tuple(variables)
    ring = rational_field(variables).ring
    acc = {}
    for _ in range(terms):
        q = rand_q(rng)
        exps = [0] * len(variables)
        for _ in range(rng.randint(0, degree)):
            if variables:
                exps[rng.randrange(len(variables))] += 1
        key = tuple(exps)
        acc[key] = acc.get(key, 0) + q
    terms_qq = {m: to_qq(c) for m, c in acc.items() if c}
    return RatFunc.from_polys(ring.from_dict(terms_qq) if terms_qq else ring.zero)


def rand_nonzero_poly(rng, variables, degree=2, terms=3) -> RatFunc:
    while True:
        p = rand_poly(rng, variables, degree, terms)
        if p:
            return p


def rand_ratfunc(rng, variables, degree=4, den_degree=2) -> RatFunc:
    num = rand_poly(rng, variables, degree)
    den = rand_nonzero_poly(rng, variables, den_degree)
    return num / den


NAMES = ("t", "u", "v")


def rand_presentation(rng, k: int | None = None, degree: int = 3) -> DiffFieldPresentation:
    k = k or rng.randint(1, 3)
    gens = NAMES[:k]
    table = [rand_poly(rng, gens, degree, terms=3) for _ in gens]
    return DiffFieldPresentation(gens, tuple(table))


def exp_field(k_exps: int = 1) -> DiffFieldPresentation:
    """QQ(t, u1..uk) with dt = 1 and du_j = j * t^(j-1) * u_j, i.e. u_j = exp(t^j)."""
    gens = ("t",) + tuple(f"u{j}" for j in range(1, k_exps + 1))
    table = ["1"] + [f"{j}*t^{j - 1}*u{j}" for j in range(1, k_exps + 1)]
    return DiffFieldPresentation.from_table(dict(zip(gens, table)))


# -- D-varieties with a designated sharp point -----------------------------------

def hypersurface_with_sharp_point(rng, F: DiffFieldPresentation, n: int, degree: int = 2):
    """X = V(Q(x) - Q(alpha)) for Q over QQ, with a section making alpha sharp.

    With G = grad Q and c = d(Q(alpha)), any s = c G/|G|^2 + M G with M a
    skew matrix over K solves G.s = c on X; M is chosen so that s(alpha) =
    d(alpha).
    """
    coords = tuple(f"x{i}" for i in range(1, n + 1))
    allvars = coords + F.generators
    while True:
        q = rand_poly(rng, coords, degree, terms=n + 2)
        alpha = [rand_poly(rng, F.generators, 1, terms=2) for _ in coords]
        alpha_all = [a.to_vars(allvars) for a in alpha]
        qa = q.to_vars(allvars)
        grad = [qa.partial(x) for x in coords]
        subs = dict(zip(coords, alpha_all))
        g_alpha = [g.subs(subs).to_vars(F.generators) for g in grad]
        norm_alpha = sum((g * g for g in g_alpha), F.zero())
        if norm_alpha:
            break
    q_alpha = qa.subs(subs).to_vars(F.generators)
    c = derive(F, q_alpha)
    dalpha = [derive(F, a) for a in alpha]
    w = [da - c / norm_alpha * g for da, g in zip(dalpha, g_alpha)]
    M = [[(w[i] * g_alpha[j] - g_alpha[i] * w[j]) / norm_alpha for j in range(n)]
         for i in range(n)]
    norm = sum((g * g for g in grad), RatFunc.const(allvars, 0))
    section = []
    for i in range(n):
        s = c.to_vars(allvars) * grad[i] / norm
        for j in range(n):
            if M[i][j]:
                s = s + M[i][j].to_vars(allvars) * grad[j]
        section.append(s)
    P = qa - q_alpha.to_vars(allvars)
    X = AffineDVariety(F, coords, [P], section)
    return X, X.point(alpha)


def rand_local_function(rng, X: AffineDVariety, alpha, degree: int = 2):
    """A random element of K(X) defined at alpha."""
    allvars = X.all_vars
    while True:
        num = rand_poly(rng, X.coords, degree, terms=3).to_vars(allvars)
        num = num * rand_poly(rng, X.base.generators, 1, terms=2).to_vars(allvars) + num
        den = rand_nonzero_poly(rng, X.coords, 1, terms=2).to_vars(allvars)
        try:
            f = X.function(num / den)
        except (ValueError, ZeroDivisionError):
            continue
        if f.defined_at(alpha):
            return f


def product(it):
    acc = 1
    for x in it:
        acc *= x
    return acc


def linear_factor_function(rng, variables=("t",), max_factors: int = 4) -> RatFunc:
    """lambda * prod (t - r_i)^m_i with rational r_i and nonzero integer m_i."""
    t = RatFunc.var(variables, variables[0])
    roots = set()
    acc = RatFunc.const(variables, rand_q(rng, zero_ok=False))
    for _ in range(rng.randint(0, max_factors)):
        r = rand_q(rng, 4)
        if r in roots:
            continue
        roots.add(r)
        m = rng.choice([-3, -2, -1, 1, 2, 3])
        acc = acc * (t - r) ** m
    return acc


def supported_form(rng, variables=("t",)) -> RatFunc:
    """poly + sum c/(t - r)^k with rational r: every pole is a rational place."""
    t = RatFunc.var(variables, variables[0])
    acc = rand_poly(rng, variables, 3, terms=3)
    for _ in range(rng.randint(1, 4)):
        r = rand_q(rng, 4)
        k = rng.randint(1, 3)
        acc = acc + rand_q(rng, zero_ok=False) / (t - r) ** k
    return acc
