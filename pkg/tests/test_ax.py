import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from axdiff.ax import (AxScenario, GroupPoint, PreconditionError, TheoremViolation,
                       build_forms, check_hypotheses, group_mul, homomorphism_check,
                       invariance_check, log_derivative_hom, monomial_relation,
                       verify_claims)
from axdiff.difffield import DiffFieldPresentation, derive
from axdiff.forms import combine, flat_check
from helpers import exp_field, rand_q

TU = DiffFieldPresentation.from_table({"t": "1", "u": "u"})


def test_exp_scenario():
    v = verify_claims(AxScenario(TU, ["t"], ["u"]))
    assert v.hypotheses.all_hold
    assert v.trdeg_value == 2 and v.bound == 2 and v.satisfied
    assert v.forms_flat and v.pairing_zero
    assert v.onto_witness == 0
    assert v.dependency is None


def test_two_exponentials():
    F = DiffFieldPresentation.from_table({"t": "1", "u1": "u1", "u2": "2*t*u2"})
    v = verify_claims(AxScenario(F, ["t", "t^2"], ["u1", "u2"]))
    assert v.hypotheses.all_hold
    # t, u1 = exp(t), u2 = exp(t^2) are algebraically independent
    assert v.trdeg_value == 3
    assert v.satisfied


def test_dependent_scenario():
    sc = AxScenario(TU, ["t", "2*t"], ["u", "u^2"])
    hyp = check_hypotheses(sc)
    assert hyp.logderiv_ok == (True, True)
    assert not hyp.q_indep_mod_C and hyp.q_relations == ((2, -1),)
    v = verify_claims(sc, hyp)
    assert not v.satisfied and v.trdeg_value == 2
    assert v.forms_rank == 1
    assert v.dependency == (2, -1)
    assert v.nu == 0
    assert v.monomial_relation == (2, -1)
    assert v.a_relation == (2, -1)


def test_monomial_relation_cases():
    assert monomial_relation(AxScenario(TU, ["t", "t"], ["u", "3*u"]), [1, -1]) == (1, -1)
    assert monomial_relation(AxScenario(TU, ["0"], ["u"]), [0]) is None
    with pytest.raises(PreconditionError):
        monomial_relation(AxScenario(TU, ["t"], ["u"]), [1, 2])


def test_zero_b_is_a_precondition_failure():
    sc = AxScenario(TU, ["t"], ["0"])
    assert check_hypotheses(sc).b_nonzero == (False,)
    with pytest.raises(PreconditionError):
        build_forms(sc)


def test_failed_logderiv_is_reported():
    hyp = check_hypotheses(AxScenario(TU, ["t^2"], ["u"]))
    assert hyp.logderiv_ok == (False,)
    assert hyp.failures()


def test_scenario_validation():
    with pytest.raises(ValueError):
        AxScenario(TU, ["t"], [])
    with pytest.raises(ValueError):
        AxScenario(TU, [], [])


def test_theorem_violation_is_an_assertion():
    assert issubclass(TheoremViolation, AssertionError)


@given(st.integers(0, 100_000))
def test_adjoined_logarithms_give_flat_forms(seed):
    # with d(a) := d(b)/b adjoined, the form da - db/b is flat
    rng = random.Random(seed)
    F = exp_field(2)
    b = rand_q(rng, zero_ok=False) * F("u1") ** rng.randint(1, 3) * F("u2") ** rng.randint(-2, 2)
    G = DiffFieldPresentation(F.generators + ("a",),
                              F.derivation + (derive(F, b) / b,))
    sc = AxScenario(G, ["a"], [b.to_vars(G.generators)])
    assert all(check_hypotheses(sc).logderiv_ok)
    assert all(flat_check(G, w) for w in build_forms(sc))


def test_group_law_and_hom():
    F = exp_field(1)
    beta = GroupPoint.make(F, ["t", "1"], ["u1", "t"])
    e = GroupPoint.identity(F, 2)
    assert group_mul(beta, e) == beta
    assert log_derivative_hom(F, [1, 1], beta) == F("1 - 1 - 1/t")
    with pytest.raises(ValueError):
        GroupPoint.make(F, ["t"], ["0"])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_homomorphism(n):
    assert homomorphism_check(n, list(range(1, n + 1)))


@given(st.lists(st.fractions(max_denominator=5), min_size=1, max_size=3))
def test_invariance(c):
    assert invariance_check(len(c), c)
