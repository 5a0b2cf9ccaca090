import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from axdiff.difffield import DiffFieldPresentation, derive
from axdiff.forms import (DiffForm, NotFlatError, combine, constant_dependence, d, dlog,
                          flat_check, lie_D1, pair_partial, parse_form, rank_forms, trdeg)
from helpers import exp_field, rand_poly, rand_presentation, rand_q, rand_ratfunc

seeds = st.integers(0, 100_000)


def rand_form(rng, F):
    return DiffForm(F, tuple(rand_ratfunc(rng, F.generators, 2, 1) for _ in F.generators))


def test_d_and_printing():
    F = exp_field(1)
    assert str(d(F, "t^2*u1")) == "2*t*u1*d(t) + t^2*d(u1)"
    assert str(d(F, "-t")) == "-d(t)"
    assert str(DiffForm.zero(F)) == "0"
    assert str(dlog(F, "u1")) == "(1/u1)*d(u1)"
    with pytest.raises(ZeroDivisionError):
        dlog(F, 0)


def test_parse_form():
    F = exp_field(1)
    assert parse_form(F, "d(t^2) - 2*t*d(t)") == 0
    assert parse_form(F, "u1*d(t) + d(u1)") == d(F, "t*u1") - d(F, "t*u1") + DiffForm(
        F, (F("u1"), F(1)))
    with pytest.raises(ValueError):
        parse_form(F, "t + d(t)")
    with pytest.raises(ValueError):
        parse_form(F, "t")


def test_lie_examples():
    F = exp_field(1)
    w = dlog(F, "u1") - d(F, "t")
    assert flat_check(F, w)
    assert pair_partial(F, w) == 0
    assert lie_D1(F, d(F, "t^2")) == d(F, "2*t")
    assert pair_partial(F, d(F, "t^2")) == F("2*t")


@given(seeds)
def test_D1_commutes_with_d(seed):
    rng = random.Random(seed)
    F = rand_presentation(rng)
    f = rand_ratfunc(rng, F.generators, 2)
    assert lie_D1(F, d(F, f)) == d(F, derive(F, f))
    assert pair_partial(F, d(F, f)) == derive(F, f)


@given(seeds)
def test_D1_module_law(seed):
    rng = random.Random(seed)
    F = rand_presentation(rng)
    f = rand_ratfunc(rng, F.generators, 2, 1)
    w = rand_form(rng, F)
    assert lie_D1(F, f * w) == derive(F, f) * w + f * lie_D1(F, w)
    assert lie_D1(F, w + w) == lie_D1(F, w) * 2


@given(seeds)
def test_trdeg_of_polynomial_images(seed):
    rng = random.Random(seed)
    F = exp_field(2)
    a = rand_poly(rng, F.generators, 2)
    # t, a(t, u1, u2), and anything algebraic over them
    elems = [F("t"), a, a * a + F("t")]
    expected = 1 if not (a.partial("u1") or a.partial("u2")) else 2
    assert trdeg(F, elems) == expected


def test_rank_forms():
    F = exp_field(2)
    assert rank_forms(F, []) == 0
    assert rank_forms(F, [d(F, "t"), d(F, "2*t"), d(F, "u1")]) == 2
    assert trdeg(F, ["t", "u1", "u2", "u1*u2"]) == 3


@given(seeds)
def test_constant_dependence_planted(seed):
    rng = random.Random(seed)
    F = exp_field(2)
    etas = [d(F, "t"), dlog(F, "u1") - d(F, "t"), dlog(F, "u2") - d(F, "t^2")]
    assert all(flat_check(F, e) for e in etas)
    q = [rand_q(rng) for _ in etas]
    if not any(q):
        q[0] = 1
    family = etas + [combine(F, q, etas)]
    rel = constant_dependence(F, family)
    assert rel is not None
    assert combine(F, rel, family) == 0
    assert constant_dependence(F, etas) is None


def test_constant_dependence_rejects_non_flat():
    F = exp_field(1)
    with pytest.raises(NotFlatError):
        constant_dependence(F, [d(F, "t^2")])


def test_constant_dependence_minimal_subset():
    F = DiffFieldPresentation.from_table({"t": "0", "s": "0"})
    rel = constant_dependence(F, [d(F, "t"), d(F, "s"), d(F, "2*t")])
    assert rel == (2, 0, -1)
