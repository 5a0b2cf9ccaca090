import random
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from axdiff.scenario import (ScenarioError, build_objects, load_scenario, read_scenario,
                             render_scenario, split_list)
from helpers import rand_ratfunc

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

EXP = """\
[field]
generators: t u
d t = 1
d u = u

[ax]
a: t
b: u
"""


def test_load_exp():
    doc = load_scenario(EXP)
    assert doc.generators == ("t", "u")
    assert [i.text for i in doc.derivation] == ["1", "u"]
    assert [i.text for i in doc.ax.a] == ["t"]
    assert doc.dvariety is None and doc.residue is None


@pytest.mark.parametrize("name", ["exp", "dependent", "two_exp"])
def test_fixture_round_trip(name):
    doc = read_scenario(SCENARIOS / f"{name}.scn")
    text = render_scenario(doc)
    assert load_scenario(text) == doc
    assert render_scenario(load_scenario(text)) == text
    built = build_objects(doc)
    assert built.ax is not None


def test_split_list():
    assert split_list("t (t + 1)  u") == [("t", 1), ("(t + 1)", 3), ("u", 12)]
    with pytest.raises(ScenarioError):
        split_list("(t")
    with pytest.raises(ScenarioError):
        split_list("t)")


@pytest.mark.parametrize("text, line, col, fragment", [
    ("", None, None, "empty scenario"),
    ("# only a comment\n", None, None, "empty scenario"),
    ("[ax]\na: t\nb: u\n", 1, 1, "missing [field]"),
    ("[field]\ngenerators: t\nd t = 1\n[ax]\na: v\nb: t\n", 5, 4, "undeclared symbol v"),
    ("[field]\ngenerators: t u\nd t = 1\n[ax]\na: t\nb: u\n", 1, 1, "no derivative given for generator u"),
    ("[field]\ngenerators: t\nd t = 1 +\n[ax]\na: t\nb: t\n", 3, None, "found end of input"),
    ("[field]\ngenerators: t\nd t = 1\n[bogus]\n", 4, 1, "unknown section [bogus]"),
    ("[field]\ngenerators: t\nd t = 1\n[ax]\na: t t\nb: t\n", 6, 1, "a has 2 entries, b has 1"),
])
def test_errors_carry_locations(text, line, col, fragment):
    with pytest.raises(ScenarioError) as info:
        load_scenario(text)
    err = info.value
    assert fragment in str(err)
    assert err.line == line
    if col is not None:
        assert err.col == col


def test_field_only_scenarios():
    text = "[field]\ngenerators: t\nd t = 1\n"
    with pytest.raises(ScenarioError):
        load_scenario(text)
    assert not load_scenario(text, require_checks=False).has_checks


def test_build_errors_have_lines():
    text = EXP + "\n[dvariety]\nambient: x\nideal: (x - t)\nsection x = t\n"
    with pytest.raises(ScenarioError) as info:
        build_objects(load_scenario(text))
    assert info.value.line == 10
    assert "not a section" in str(info.value)


@given(st.integers(0, 100_000))
def test_render_load_round_trip_random(seed):
    rng = random.Random(seed)
    gens = ("t", "u")
    table = [rand_ratfunc(rng, gens, 2, 1) for _ in gens]
    a = [rand_ratfunc(rng, gens, 2, 1) for _ in range(2)]
    b = [rand_ratfunc(rng, gens, 2, 1) for _ in range(2)]
    text = "[field]\ngenerators: t u\n" + "".join(
        f"d {g} = {v}\n" for g, v in zip(gens, table))
    text += "[ax]\na: " + " ".join(f"({x})" for x in a) + "\n"
    text += "b: " + " ".join(f"({x})" for x in b) + "\n"
    doc = load_scenario(text)
    assert load_scenario(render_scenario(doc)) == doc
