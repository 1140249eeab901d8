"""Instance generators for the two hardness reductions, with brute-force oracles.

* 3SAT -> model checking: one team member per clause and the formula
  ``(r1 & dep(;p1)) | ... | (rn & dep(;pn))``.  Every dep atom has arity 0
  and the syntax circuit is a tree.
* 3-colouring -> model checking: one team member per vertex and three
  copies of ``&_{edges} dep(y_k; x_i)`` joined by two splits.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import CapExceeded, InputError
from .syntax import And, Dep, Formula, Or, Top, Var, copy_tree, index_tree, parse, render
from .team import Team

Literal = int  # +j for x_j, -j for its negation


@dataclass(frozen=True)
class CnfInstance:
    n: int
    clauses: tuple[tuple[Literal, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise InputError(f"literal {lit} outside variables 1..{self.n}")


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: tuple[tuple[int, int], ...]  # 0-based, u < v, sorted, no duplicates

    def __post_init__(self):
        edges = []
        for u, v in self.edges:
            if u == v:
                raise InputError(f"loop at vertex {u + 1}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge {u + 1}-{v + 1} outside vertices 1..{self.n}")
            edges.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(set(edges))))


@dataclass(frozen=True)
class McInstance:
    team: Team
    formula: Formula

    def to_json(self) -> dict:
        return {"formula": render(self.formula), "team": self.team.to_json()}

    @classmethod
    def from_json(cls, data) -> McInstance:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(Team.from_json(data["team"]), parse(data["formula"]))


def _disjunction(parts: list[Formula]) -> Formula:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def _conjunction(parts: list[Formula]) -> Formula:
    if not parts:
        return Top()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def reduce_3sat(cnf: CnfInstance) -> McInstance:
    """Model-checking instance that holds iff ``cnf`` is satisfiable.

    Member ``s_i`` for clause ``C_i`` sets ``p_j = r_j = 1`` if ``x_j`` is in
    ``C_i``, ``p_j = 0, r_j = 1`` if ``!x_j`` is, and both 0 otherwise.
    Tautological clauses are dropped first (they cannot constrain anything
    and would need both values of ``p_j``); repeated literals are merged.
    """
    if cnf.n < 1:
        raise InputError("CNF needs at least one variable")
    if not cnf.clauses:
        raise InputError("CNF has no clauses")
    universe = tuple(f"p{j}" for j in range(1, cnf.n + 1)) + tuple(f"r{j}" for j in range(1, cnf.n + 1))
    rows = []
    for clause in cnf.clauses:
        lits = set(clause)
        if len({abs(x) for x in lits}) > 3:
            raise InputError(f"clause {clause} has more than 3 variables")
        if any(-x in lits for x in lits):
            continue
        p = [0] * cnf.n
        r = [0] * cnf.n
        for lit in lits:
            j = abs(lit) - 1
            r[j] = 1
            p[j] = 1 if lit > 0 else 0
        rows.append(tuple(p + r))
    formula = _disjunction([And(Var(f"r{j}"), Dep((), (f"p{j}",))) for j in range(1, cnf.n + 1)])
    return McInstance(Team(universe, rows), formula)


def _y(edge: int, vertex: int) -> str:
    return f"y{edge + 1}_{vertex + 1}"


def reduce_3col(g: SimpleGraph) -> McInstance:
    """Model-checking instance that holds iff ``g`` is 3-colourable.

    Member ``s_i`` for vertex ``v_i``: ``x_j = 1`` iff ``v_i v_j`` is an
    edge (so ``x_i = 0``); for each edge ``e_l`` the tuple ``y_l`` is all
    ones if ``v_i`` is an endpoint, otherwise all ones except ``y_{l,i} = 0``.
    Two members agree on ``y_l`` exactly when they are the endpoints of
    ``e_l``, and they then differ on the ``x`` of the lower endpoint, which
    is what ``dep(y_l; x_i)`` forbids inside one colour class.
    """
    n, edges = g.n, g.edges
    universe = tuple(f"x{i + 1}" for i in range(n)) + tuple(
        _y(l, k) for l in range(len(edges)) for k in range(n))
    rows = [_vertex_row(g, i) for i in range(n)]
    phi = _conjunction([Dep(tuple(_y(l, k) for k in range(n)), (f"x{u + 1}",))
                        for l, (u, v) in enumerate(edges)])
    formula = Or(phi, Or(copy_tree(phi), copy_tree(phi)))
    return McInstance(Team(universe, rows), formula)


def coloring_from_certificate(g: SimpleGraph, instance: McInstance, assigned: dict[int, int]) -> list[int]:
    """Colour classes read off a positive model-checking certificate.

    ``assigned`` maps occurrence ids to the subteam each occurrence was
    evaluated on (as produced by ``mc_teamsize(..., certificate=True)``);
    the three copies of the edge conjunction sit at the root's left child
    and the two children of its right child.  A vertex takes the first
    class whose subteam contains its member.
    """
    tree = index_tree(instance.formula)
    left, right = tree.children[0]
    parts = [assigned[left]] + [assigned[c] for c in tree.children[right]]
    colours = []
    for i in range(g.n):
        row = instance.team.rows.index(_vertex_row(g, i))
        colours.append(next(c for c, mask in enumerate(parts) if mask >> row & 1))
    return colours


def _vertex_row(g: SimpleGraph, i: int) -> tuple[int, ...]:
    n = g.n
    x = [0] * n
    y: list[int] = []
    for u, v in g.edges:
        if i == u:
            x[v] = 1
        elif i == v:
            x[u] = 1
        y += [1] * n if i in (u, v) else [int(k != i) for k in range(n)]
    return tuple(x + y)


def is_proper_coloring(g: SimpleGraph, colours: list[int]) -> bool:
    return all(colours[u] != colours[v] for u, v in g.edges)


# --------------------------------------------------------------------------
# oracles


def cnf_brute(cnf: CnfInstance, *, max_vars: int = 20) -> bool:
    if cnf.n > max_vars:
        raise CapExceeded("number of variables", cnf.n, max_vars)
    for values in itertools.product((False, True), repeat=cnf.n):
        if all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in cnf.clauses):
            return True
    return False


def col_brute(g: SimpleGraph, *, max_vertices: int = 10) -> bool:
    """Exhaustive 3-colouring search (vertex 0 fixed to colour 0)."""
    if g.n > max_vertices:
        raise CapExceeded("number of vertices", g.n, max_vertices)
    if g.n == 0:
        return True
    for rest in itertools.product(range(3), repeat=g.n - 1):
        colours = (0,) + rest
        if is_proper_coloring(g, list(colours)):
            return True
    return False


# --------------------------------------------------------------------------
# input formats


def parse_dimacs(text: str) -> CnfInstance:
    n = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"bad problem line {line!r}")
            n = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if n is None:
        raise InputError("missing 'p cnf' line")
    return CnfInstance(n, tuple(clauses))


def format_dimacs(cnf: CnfInstance) -> str:
    lines = [f"p cnf {cnf.n} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> SimpleGraph:
    """First line ``n m``, then ``m`` lines ``u v`` with 1-based vertices."""
    lines = [l.split() for l in text.splitlines() if l.strip() and not l.startswith("#")]
    if not lines:
        raise InputError("empty graph file")
    try:
        n, m = map(int, lines[0])
        edges = [(int(u) - 1, int(v) - 1) for u, v in lines[1:]]
    except ValueError as exc:
        raise InputError(f"bad graph file: {exc}") from None
    if len(edges) != m:
        raise InputError(f"header says {m} edges, found {len(edges)}")
    return SimpleGraph(n, tuple(edges))


def format_graph(g: SimpleGraph) -> str:
    lines = [f"{g.n} {len(g.edges)}"] + [f"{u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
