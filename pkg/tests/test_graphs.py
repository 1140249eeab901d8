import itertools
import random

import pytest
from hypothesis import given, settings

from pdl.errors import CapExceeded, InputError
from pdl.graphs import (Graph, TreeDecomposition, circuit_graph, decomposition_from_order,
                        exact_order, exact_treewidth, format_decomposition, format_graph, gaifman_graph,
                        parameter_relations, parse_decomposition, parse_graph_text, tree_decompose, validate)
from pdl.syntax import parse
from pdl.team import Team, full_team

from strategies import formulas

CIRCUIT_EXAMPLE = "(x3 | !x1) & (dep(x3;x4) | (x1 & x2))"


def graph(n, edges):
    g = Graph([str(i) for i in range(n)])
    for u, v in edges:
        g.add_edge(u, v)
    return g


def random_graph(rng, n, p):
    return graph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def test_circuit_example_circuit_graph():
    g = circuit_graph(parse(CIRCUIT_EXAMPLE))
    assert len(g) == 10 and len(g.edges) == 11
    lab = {label: i for i, label in enumerate(g.labels)}
    expected = {("x1", "x1 & x2"), ("x2", "x1 & x2"), ("x3", "dep(x3;x4)"), ("x4", "dep(x3;x4)"),
                ("x1 & x2", "dep(x3;x4) | x1 & x2"), ("dep(x3;x4)", "dep(x3;x4) | x1 & x2"),
                ("x1", "!x1"), ("!x1", "x3 | !x1"), ("x3", "x3 | !x1"),
                ("x3 | !x1", "(x3 | !x1) & (dep(x3;x4) | x1 & x2)"),
                ("dep(x3;x4) | x1 & x2", "(x3 | !x1) & (dep(x3;x4) | x1 & x2)")}
    assert g.edges == {tuple(sorted((lab[a], lab[b]))) for a, b in expected}


def test_circuit_example_drawn_decomposition_is_valid():
    g = circuit_graph(parse(CIRCUIT_EXAMPLE))
    v = {label: i for i, label in enumerate(g.labels)}
    and_r, or1, or2 = v["(x3 | !x1) & (dep(x3;x4) | x1 & x2)"], v["dep(x3;x4) | x1 & x2"], v["x3 | !x1"]
    dep, and1, neg = v["dep(x3;x4)"], v["x1 & x2"], v["!x1"]
    bags = [{and_r, or1, or2}, {or1, or2, dep}, {or2, dep, v["x4"]}, {or2, dep, v["x3"]},
            {or1, or2, and1}, {or2, and1, v["x2"]}, {or2, and1, v["x1"]}, {or2, v["x1"], neg}]
    d = TreeDecomposition([frozenset(b) for b in bags], [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 6), (6, 7)])
    assert validate(d, g) and d.width == 2


def test_circuit_example_treewidth():
    g = circuit_graph(parse(CIRCUIT_EXAMPLE))
    assert exact_treewidth(g) == 2
    assert tree_decompose(g, "min-fill").width == 2


@pytest.mark.parametrize("text,n,m", [("x", 1, 0), ("x & y", 3, 2)])
def test_small_circuit_graphs(text, n, m):
    g = circuit_graph(parse(text))
    assert (len(g), len(g.edges)) == (n, m)


def test_triangles_variant():
    g = circuit_graph(parse("x & y"), triangles=True)
    assert len(g.edges) == 3


def test_gaifman_counts():
    g = gaifman_graph(Team(("x",), [[1]]), parse("x"))
    assert (len(g), len(g.edges)) == (2, 1)
    f = parse(CIRCUIT_EXAMPLE)
    t = Team(("x1", "x2", "x3", "x4"), [[0, 0, 0, 0], [1, 1, 1, 1]])
    g = gaifman_graph(t, f)
    assert len(g) == 12
    assert len(g.edges) == 11 + 8
    members = [i for i, label in enumerate(g.labels) if label.startswith("c")]
    assert not any(u in members and v in members for u, v in g.edges)


@pytest.mark.parametrize("m,n", [(1, 1), (3, 2), (2, 3), (4, 3)])
def test_gaifman_edge_count(m, n):
    names = [f"v{i}" for i in range(n)]
    f = parse(" & ".join(names))
    t = Team(tuple(names), list(itertools.product((0, 1), repeat=n))[:m])
    g = gaifman_graph(t, f)
    assert len(g.edges) == len(circuit_graph(f).edges) + m * n


def test_known_treewidths():
    path = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert exact_treewidth(path) == 1
    assert tree_decompose(path).width == 1
    assert exact_treewidth(graph(1, [])) == 0
    assert exact_treewidth(graph(0, [])) == -1
    c5 = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert exact_treewidth(c5) == 2
    k4 = graph(4, list(itertools.combinations(range(4), 2)))
    assert exact_treewidth(k4) == 3
    for method in ("min-fill", "min-degree"):
        assert tree_decompose(k4, method).width == 3


def test_exact_cap():
    with pytest.raises(CapExceeded):
        exact_treewidth(graph(13, []))


def test_validate_conditions():
    g = graph(3, [(0, 1), (1, 2)])
    good = TreeDecomposition([frozenset({0, 1}), frozenset({1, 2})], [(0, 1)])
    assert validate(good, g)
    assert validate(TreeDecomposition([frozenset({0, 1})], []), g).condition == "(i)"
    missing_edge = TreeDecomposition([frozenset({0, 1}), frozenset({2})], [(0, 1)])
    assert validate(missing_edge, g).condition == "(ii)"
    split = TreeDecomposition([frozenset({0, 1}), frozenset({2, 1, 0}), frozenset({0})], [(0, 1), (1, 2)])
    assert validate(split, g)
    broken = TreeDecomposition([frozenset({0, 1}), frozenset({1, 2}), frozenset({0})], [(0, 1), (1, 2)])
    assert validate(broken, g).condition == "(iii)"
    assert validate(TreeDecomposition([frozenset({0, 1}), frozenset({1, 2})], []), g).condition == "tree"


def test_loop_rejected():
    with pytest.raises(InputError):
        graph(2, [(1, 1)])


def test_order_must_be_permutation():
    with pytest.raises(InputError):
        decomposition_from_order(graph(2, []), [0, 0])


@pytest.mark.parametrize("method", ["min-fill", "min-degree"])
def test_heuristics_valid_on_random_graphs(method):
    rng = random.Random(7)
    for _ in range(200):
        g = random_graph(rng, rng.randint(0, 14), rng.random())
        d = tree_decompose(g, method)
        assert validate(d, g), method


def test_exact_matches_best_elimination_order():
    rng = random.Random(11)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 8), rng.random())
        tw = exact_treewidth(g)
        # minimum over every elimination order, by enumeration
        brute = min(decomposition_from_order(g, list(p)).width
                    for p in itertools.permutations(range(len(g))))
        assert tw == brute
        assert decomposition_from_order(g, exact_order(g)).width == tw
        assert tw <= tree_decompose(g).width and tw <= tree_decompose(g, "min-degree").width


@given(formulas(max_leaves=8))
@settings(max_examples=100, deadline=None)
def test_tree_shaped_circuits_have_width_one(f):
    g = circuit_graph(f)
    if len(g.edges) == len(g) - 1 and len(g) > 1:
        assert tree_decompose(g).width == 1


def test_parameter_relations_examples():
    f = parse("x")
    t = Team(("x",), [[0], [1]])
    rels = {r.name: r for r in parameter_relations(t, f)}
    assert all(r.holds for r in rels.values())
    assert rels["width-vs-team-or-variables"].lhs >= 1 and rels["width-vs-team-or-variables"].rhs == 1


def test_parameter_relations_skip_large():
    f = parse("a & b & c & d")
    t = full_team(("a", "b", "c", "d"))
    rels = {r.name: r for r in parameter_relations(t, f)}
    assert rels["width-vs-team-or-variables"].status == "skipped"
    assert rels["team-vs-variables"].status == "pass"


def test_text_formats_round_trip():
    g = circuit_graph(parse(CIRCUIT_EXAMPLE))
    h = parse_graph_text(format_graph(g))
    assert h.labels == g.labels and h.edges == g.edges
    d = tree_decompose(g)
    e = parse_decomposition(format_decomposition(d))
    assert e.bags == d.bags and [tuple(x) for x in e.tree_edges] == [tuple(x) for x in d.tree_edges]
