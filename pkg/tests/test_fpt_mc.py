import pytest
from hypothesis import given, settings

from pdl.errors import CapExceeded, UnknownVariable
from pdl.fpt_mc import label_table, mc_teamsize
from pdl.reductions import CnfInstance, reduce_3sat
from pdl.semantics import BOTTOM_NEVER, Evaluator, SplitMode, evaluate
from pdl.syntax import index_tree, parse
from pdl.team import Team, full_team

from strategies import formulas, teams

FULL_XY = full_team(("x", "y"))


def test_full_xy_certificate():
    f = parse("dep(x;y) | dep(x;y)")
    res = mc_teamsize(FULL_XY, f, certificate=True)
    assert res.holds
    p, q = res.certificate[0]
    assert p | q == FULL_XY.full_mask
    # each half must satisfy its disjunct
    atom = parse("dep(x;y)")
    assert evaluate(FULL_XY.subteam(p), atom) and evaluate(FULL_XY.subteam(q), atom)
    # the lowest-numbered valid split
    assert [FULL_XY.subteam(m).rows for m in (p, q)] == [((0, 0), (1, 0)), ((0, 1), (1, 1))]


@pytest.mark.parametrize("mode", list(SplitMode))
def test_full_xy(mode):
    assert not mc_teamsize(FULL_XY, parse("dep(x;y)"), mode).holds
    assert mc_teamsize(FULL_XY, parse("dep(x;y) | dep(x;y)"), mode).holds


def test_strict_certificate_is_partition():
    res = mc_teamsize(FULL_XY, parse("dep(x;y) | T"), SplitMode.STRICT, certificate=True)
    p, q = res.certificate[0]
    assert p & q == 0 and p | q == FULL_XY.full_mask


def test_3sat_instance():
    inst = reduce_3sat(CnfInstance(3, ((1, 2, 3), (-1, -2, 3))))
    assert mc_teamsize(inst.team, inst.formula).holds
    assert evaluate(inst.team, inst.formula)


def test_top_label_is_everything():
    t = Team(("x", "y"), [[0, 0], [1, 1], [0, 1]])
    res = mc_teamsize(t, parse("T"))
    assert res.holds and res.labels[0] == frozenset(range(8))


def test_leaf_labels():
    t = full_team(("x",))
    assert label_table(t, parse("x"))[0] == frozenset({0, 0b10})
    t2 = Team(("p", "q"), [[0, 0], [0, 1], [1, 1]])
    constant = label_table(t2, parse("dep(;p)"))[0]
    assert constant == frozenset({0, 0b001, 0b010, 0b011, 0b100})
    assert label_table(t2, parse("p & !p"))[0] == frozenset({0})


def test_bottom_labels():
    t = full_team(("x",))
    assert label_table(t, parse("F"))[0] == frozenset({0})
    assert label_table(t, parse("F"), bottom=BOTTOM_NEVER)[0] == frozenset()
    assert label_table(t, parse("!dep(;x)"))[0] == frozenset({0})


def test_errors():
    with pytest.raises(UnknownVariable):
        mc_teamsize(FULL_XY, parse("z"))
    with pytest.raises(CapExceeded):
        mc_teamsize(FULL_XY, parse("x"), max_team=3)


def test_certificate_assigns_every_occurrence():
    f = parse("(x | !x) & (dep(x;y) | dep(x;y))")
    res = mc_teamsize(FULL_XY, f, certificate=True)
    tree = index_tree(f)
    assert set(res.assigned) == set(range(len(tree.nodes)))
    for occ, mask in res.assigned.items():
        assert mask in res.labels[occ]


@given(teams(max_size=4), formulas(max_leaves=6))
@settings(max_examples=300, deadline=None)
def test_labels_sound_and_complete(t, f):
    for mode in SplitMode:
        table = label_table(t, f, mode)
        tree = index_tree(f)
        for occ, node in enumerate(tree.nodes):
            ev = Evaluator(t, node, mode)
            expected = {p for p in range(1 << len(t)) if ev.holds(p)}
            assert table[occ] == expected
            assert len(table[occ]) <= 2 ** len(t)


@given(teams(max_size=5), formulas(max_leaves=6))
@settings(max_examples=200, deadline=None)
def test_certificate_valid(t, f):
    res = mc_teamsize(t, f, certificate=True)
    if not res.holds:
        assert res.certificate is None
        return
    tree = index_tree(f)
    for occ, (p, q) in res.certificate.items():
        left, right = tree.children[occ]
        assert p | q == res.assigned[occ]
        assert evaluate(t.subteam(p), tree.nodes[left]) and evaluate(t.subteam(q), tree.nodes[right])
