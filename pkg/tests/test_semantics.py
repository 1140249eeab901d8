import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings

from pdl import syntax as s
from pdl.errors import CapExceeded, UnknownVariable
from pdl.reductions import SimpleGraph, reduce_3col
from pdl.semantics import (BOTTOM_NEVER, Evaluator, SplitMode, check_dep, classical_value, evaluate,
                           is_2coherent_atom, is_flat, submasks)
from pdl.syntax import Dep, parse, subformulas
from pdl.team import Team, encode_table, full_team, read_table_csv, rewrite_dep_over_columns

from strategies import formulas, teams

FULL_XY = full_team(("x", "y"))


@pytest.mark.parametrize("mode", list(SplitMode))
def test_full_xy_split_example(mode):
    assert not evaluate(FULL_XY, parse("dep(x;y)"), mode)
    assert evaluate(FULL_XY, parse("dep(x;y) | dep(x;y)"), mode)


@pytest.mark.parametrize("text", ["x", "!x & dep(x;y)", "x | y", "dep(;x)", "T", "!dep(x;y)"])
def test_empty_team_satisfies_everything(text):
    assert evaluate(Team(("x", "y")), parse(text))


def test_bottom_conventions():
    empty = Team(("x",))
    one = Team(("x",), [[0]])
    assert evaluate(empty, parse("F"))
    assert not evaluate(one, parse("F"))
    assert not evaluate(empty, parse("F"), bottom=BOTTOM_NEVER)
    # with F false everywhere a split cannot send nothing to the F side
    assert evaluate(one, parse("x | F")) is False
    assert evaluate(one, parse("!x | F"))
    assert not evaluate(one, parse("!x | F"), bottom=BOTTOM_NEVER)
    assert not evaluate(one, parse("T | F"), bottom=BOTTOM_NEVER)


def test_literals():
    t = Team(("x", "y"), [[1, 0], [1, 1]])
    assert evaluate(t, parse("x"))
    assert not evaluate(t, parse("y"))
    assert not evaluate(t, parse("!y"))
    assert evaluate(t, parse("y | !y"))


def test_negated_dep_only_on_empty_team():
    assert not evaluate(Team(("x", "y"), [[0, 0]]), parse("!dep(x;y)"))


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        evaluate(Team(("x",), [[0]]), parse("y"))


def test_cap():
    t = full_team(("a", "b", "c", "d"))
    with pytest.raises(CapExceeded):
        evaluate(t, parse("a"), max_team=15)


def test_schedule():
    enc = encode_table(read_table_csv((Path(__file__).parent / "data" / "schedule.csv").read_text()))
    good = rewrite_dep_over_columns(enc, ["Room", "Time"], ["Course"]) & \
        rewrite_dep_over_columns(enc, ["Instructor", "Time"], ["Room", "Course"])
    assert evaluate(enc.team, good)
    assert not evaluate(enc.team, rewrite_dep_over_columns(enc, ["Room", "Time"], ["Instructor"]))


def test_check_dep_witness():
    t = Team(("x", "y"), [[0, 0], [0, 1], [1, 1]])
    res = check_dep(t, ["x"], ["y"])
    assert not res and res.witness == ((0, 0), (0, 1))
    assert check_dep(t.subteam(0b100), ["x"], ["y"])


def test_constancy_atom():
    assert check_dep(Team(("x", "y"), [[1, 0], [1, 1]]), [], ["x"])
    assert not check_dep(Team(("x", "y"), [[0, 0], [1, 0]]), [], ["x"])


def test_is_flat():
    assert is_flat(parse("x | !y & z"))
    assert not is_flat(parse("dep(x;y)"), probes=[FULL_XY])
    assert is_flat(parse("T"))


def test_2coherence_examples():
    assert is_2coherent_atom(["x"], ["y"], FULL_XY)
    assert is_2coherent_atom(["x"], ["y"], Team(("x", "y"), [[0, 1]]))
    g = SimpleGraph(3, ((0, 1), (0, 2)))  # path v2 - v1 - v3
    inst = reduce_3col(g)
    for atom in (n for n in subformulas(inst.formula) if isinstance(n, Dep)):
        assert is_2coherent_atom(atom.premise, atom.conclusion, inst.team)


def test_classical_value():
    f = parse("x & !y | T & F")
    for x, y in itertools.product((0, 1), repeat=2):
        assert classical_value(f, {"x": x, "y": y}) == (x == 1 and y == 0)
    with pytest.raises(ValueError):
        classical_value(parse("dep(;x)"), {"x": 0})


def test_submasks():
    assert list(submasks(0b101)) == [0b101, 0b100, 0b001, 0]
    assert list(submasks(0)) == [0]


def _literal_split(team, f, mode):
    """Unmemoised recursion straight from the clauses (tiny teams only)."""
    rows = list(team.rows)

    def sat(node, members):
        if isinstance(node, s.Top):
            return True
        if isinstance(node, s.Bot):
            return not members
        if isinstance(node, s.Var):
            return all(r[team.position(node.name)] == 1 for r in members)
        if isinstance(node, s.NegVar):
            return all(r[team.position(node.name)] == 0 for r in members)
        if isinstance(node, s.NegDep):
            return not members
        if isinstance(node, s.Dep):
            return bool(check_dep(Team(team.variables, members), node.premise, node.conclusion))
        if isinstance(node, s.And):
            return sat(node.left, members) and sat(node.right, members)
        for a in itertools.product((0, 1, 2), repeat=len(members)):
            # 0: left only, 1: right only, 2: both (lax only)
            if mode is SplitMode.STRICT and 2 in a:
                continue
            left = [m for m, k in zip(members, a) if k in (0, 2)]
            right = [m for m, k in zip(members, a) if k in (1, 2)]
            if sat(node.left, left) and sat(node.right, right):
                return True
        return False

    return sat(f, rows)


@given(teams(max_size=4), formulas(max_leaves=5))
@settings(max_examples=300, deadline=None)
def test_tabulated_evaluator_matches_plain_recursion(t, f):
    for mode in SplitMode:
        assert evaluate(t, f, mode) == _literal_split(t, f, mode)


@given(teams(max_size=5), formulas(max_leaves=6))
@settings(max_examples=200, deadline=None)
def test_downward_closure(t, f):
    ev = Evaluator(t, f)
    for mask in range(1 << len(t)):
        if ev.holds(mask):
            assert all(ev.holds(sub) for sub in submasks(mask))


@given(teams(max_size=5), formulas(max_leaves=6))
@settings(max_examples=200, deadline=None)
def test_overlapping_splits_add_nothing(t, f):
    assert evaluate(t, f) == evaluate(t, f, exhaustive_splits=True)


@given(teams(max_size=6), formulas(max_leaves=6, allow_dep=False))
@settings(max_examples=200, deadline=None)
def test_dep_free_formulas_are_flat(t, f):
    ev = Evaluator(t, f)
    assert ev.holds() == all(ev.holds(1 << i) for i in range(len(t)))


@given(teams(max_size=6), formulas(max_leaves=3), formulas(max_leaves=3))
@settings(max_examples=200, deadline=None)
def test_monotone_split_soundness(t, a, b):
    ea, eb, ev = Evaluator(t, a), Evaluator(t, b), Evaluator(t, a | b)
    full = range(1 << len(t))
    for p in (p for p in full if ea.holds(p)):
        for q in (q for q in full if eb.holds(q)):
            assert ev.holds(p | q)
