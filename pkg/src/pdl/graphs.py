"""Syntax-circuit and Gaifman graphs, tree decompositions and treewidth."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapExceeded, InputError
from .syntax import Formula, hash_cons, parameters, variables
from .team import Team

MAX_EXACT_VERTICES = 12


@dataclass
class Graph:
    """Simple undirected graph on vertices ``0..n-1`` with string labels."""

    labels: list[str] = field(default_factory=list)
    edges: set[tuple[int, int]] = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.labels)

    def add_vertex(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise InputError(f"loop at vertex {u}")
        if not (0 <= u < len(self) and 0 <= v < len(self)):
            raise InputError(f"edge {u}-{v} references a missing vertex")
        self.edges.add((min(u, v), max(u, v)))

    def neighbors(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.labels]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def index(self, label: str) -> int:
        return self.labels.index(label)


def circuit_graph(f: Formula, *, triangles: bool = False) -> Graph:
    """Undirected graph of the syntax circuit of ``f``.

    Edges join each gate to its inputs.  With ``triangles`` the inputs of a
    gate are also joined to each other.
    """
    circuit = hash_cons(f)
    g = Graph(list(circuit.labels))
    for parent, kids in enumerate(circuit.children):
        for c in kids:
            g.add_edge(parent, c)
        if triangles:
            for a in kids:
                for b in kids:
                    if a < b:
                        g.add_edge(a, b)
    return g


def gaifman_graph(team: Team, f: Formula, *, triangles: bool = False) -> Graph:
    """Circuit graph of ``f`` plus one vertex ``c<i>`` per team member.

    Every member is adjacent to every variable vertex (it maps each variable
    to 0 or 1); members are not adjacent to each other.
    """
    team.require(variables(f))
    g = circuit_graph(f, triangles=triangles)
    var_nodes = hash_cons(f).variable_nodes()
    for i in range(len(team)):
        c = g.add_vertex(f"c{i + 1}")
        for v in var_nodes.values():
            g.add_edge(c, v)
    return g


# --------------------------------------------------------------------------
# decompositions


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    tree_edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1


@dataclass(frozen=True)
class Validity:
    ok: bool
    condition: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(d: TreeDecomposition, g: Graph) -> Validity:
    """Check the decomposition against ``g``.

    ``condition`` names the first failure: ``"tree"`` (bags do not form a
    tree), ``"(i)"`` (a vertex is in no bag), ``"(ii)"`` (an edge is in no
    bag) or ``"(iii)"`` (the bags holding some vertex are not connected).
    """
    k = len(d.bags)
    if k == 0:
        return Validity(False, "tree", "no bags")
    adj: list[set[int]] = [set() for _ in range(k)]
    for a, b in d.tree_edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            return Validity(False, "tree", f"bad tree edge {a}-{b}")
        adj[a].add(b)
        adj[b].add(a)
    if len(d.tree_edges) != k - 1 or len(_component(adj, {0}, set(range(k)))) != k:
        return Validity(False, "tree", "bags do not form a tree")
    covered = set().union(*d.bags)
    for v in range(len(g)):
        if v not in covered:
            return Validity(False, "(i)", f"vertex {v} ({g.labels[v]}) is in no bag")
    for u, v in sorted(g.edges):
        if not any(u in b and v in b for b in d.bags):
            return Validity(False, "(ii)", f"edge {u}-{v} is in no bag")
    for v in range(len(g)):
        holding = {i for i, b in enumerate(d.bags) if v in b}
        if len(_component(adj, {min(holding)}, holding)) != len(holding):
            return Validity(False, "(iii)", f"bags containing vertex {v} are disconnected")
    return Validity(True)


def _component(adj, start: set[int], allowed: set[int]) -> set[int]:
    seen = set(start)
    stack = list(start)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y in allowed and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Tree decomposition induced by eliminating the vertices in ``order``.

    Eliminating ``v`` creates the bag ``{v} + N(v)`` and turns ``N(v)`` into
    a clique.  That bag hangs below the bag of the first-eliminated vertex of
    ``N(v)``; bags with empty ``N(v)`` are chained to the next bag so the
    result is one tree.
    """
    if sorted(order) != list(range(len(g))):
        raise InputError("order must be a permutation of the vertices")
    if not order:
        return TreeDecomposition([frozenset()], [])
    adj = g.neighbors()
    pos = {v: k for k, v in enumerate(order)}
    bags: list[frozenset[int]] = []
    for v in order:
        nb = adj[v]
        bags.append(frozenset(nb | {v}))
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
    edges = []
    for k, v in enumerate(order):
        rest = bags[k] - {v}
        if rest:
            edges.append((k, min(pos[u] for u in rest)))
        elif k + 1 < len(order):
            edges.append((k, k + 1))
    return TreeDecomposition(bags, edges)


def elimination_order(g: Graph, method: str = "min-fill") -> list[int]:
    """Greedy min-fill or min-degree order; ties go to the lowest vertex id."""
    if method not in ("min-fill", "min-degree"):
        raise ValueError(f"unknown method {method!r}")
    adj = g.neighbors()
    alive = set(range(len(g)))
    order = []

    def fill(v):
        nb = sorted(adj[v])
        return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])

    score = fill if method == "min-fill" else (lambda v: len(adj[v]))
    while alive:
        v = min(alive, key=lambda u: (score(u), u))
        nb = adj[v]
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        alive.remove(v)
        order.append(v)
    return order


def tree_decompose(g: Graph, method: str = "min-fill") -> TreeDecomposition:
    return decomposition_from_order(g, elimination_order(g, method))


def exact_treewidth(g: Graph, *, max_vertices: int = MAX_EXACT_VERTICES) -> int:
    """Treewidth by dynamic programming over vertex subsets.

    ``best[S]`` is the least possible maximum degree-at-elimination when the
    vertices of ``S`` are eliminated first.  Eliminating ``v`` after ``S``
    gives it one neighbour for every vertex outside ``S + v`` reachable from
    ``v`` through ``S``.  ``O(2**n * n**2)``; the empty graph has width -1.
    """
    n = len(g)
    if n > max_vertices:
        raise CapExceeded("number of vertices", n, max_vertices)
    return _exact(g)[0]


def exact_order(g: Graph, *, max_vertices: int = MAX_EXACT_VERTICES) -> list[int]:
    """An elimination order whose decomposition has width ``exact_treewidth(g)``."""
    n = len(g)
    if n > max_vertices:
        raise CapExceeded("number of vertices", n, max_vertices)
    return _exact(g)[1]


def _exact(g: Graph) -> tuple[int, list[int]]:
    n = len(g)
    adj = [sum(1 << u for u in nb) for nb in g.neighbors()]

    def q(s: int, v: int) -> int:
        seen = adj[v]
        frontier = adj[v] & s
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & ~seen
            seen |= new
            frontier |= new & s
        return bin(seen & ~s & ~(1 << v)).count("1")

    full = (1 << n) - 1
    best = [0] * (1 << n)
    last = [-1] * (1 << n)
    best[0] = -1
    for s in range(1, 1 << n):
        value = n
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            cand = max(best[s ^ low], q(s ^ low, v))
            if cand < value:
                value, last[s] = cand, v
        best[s] = value
    order = []
    s = full
    while s:
        order.append(last[s])
        s ^= 1 << last[s]
    return best[full], order[::-1]


# --------------------------------------------------------------------------
# parameter relations


@dataclass(frozen=True)
class Relation:
    name: str
    statement: str
    lhs: int | None
    rhs: int | None
    holds: bool | None  # None when skipped

    @property
    def status(self) -> str:
        return "skipped" if self.holds is None else ("pass" if self.holds else "fail")


def parameter_relations(team: Team, f: Formula, *, triangles: bool = False,
                        max_vertices: int = MAX_EXACT_VERTICES) -> list[Relation]:
    """Check the known inequalities between the parameters of ``(team, f)``.

    The team is first restricted to the variables of ``f``, since only
    those take part in the instance.
    """
    names = variables(f)
    team = team.restrict(names)
    p = parameters(f, team)
    m, n = len(team), p.variable_count
    rels = [
        Relation("team-vs-variables", "team-size <= 2^#variables", m, 2 ** n, m <= 2 ** n),
        Relation("team-vs-size", "team-size <= 2^formula-size", m, 2 ** p.formula_size,
                 m <= 2 ** p.formula_size),
        Relation("size-vs-depth", "formula-size <= 2^(2*formula-depth)", p.formula_size,
                 2 ** (2 * p.formula_depth), p.formula_size <= 2 ** (2 * p.formula_depth)),
    ]
    g = gaifman_graph(team, f, triangles=triangles)
    if len(g) > max_vertices:
        rels.append(Relation("width-vs-team-or-variables", "fo-team-tw >= min(team-size, #variables)", None, min(m, n), None))
        rels.append(Relation("team-vs-width", "team-size <= 2^fo-team-tw", m, None, None))
    else:
        tw = exact_treewidth(g, max_vertices=max_vertices)
        rels.append(Relation("width-vs-team-or-variables", "fo-team-tw >= min(team-size, #variables)", tw, min(m, n),
                             tw >= min(m, n)))
        rels.append(Relation("team-vs-width", "team-size <= 2^fo-team-tw", m, 2 ** max(tw, 0),
                             m <= 2 ** max(tw, 0)))
    return rels


# --------------------------------------------------------------------------
# text formats


def format_graph(g: Graph) -> str:
    lines = [f"# vertex {i} {label}" for i, label in enumerate(g.labels)]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str) -> Graph:
    g = Graph()
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# vertex"):
            parts = line.split(maxsplit=3)
            if int(parts[2]) != len(g):
                raise InputError("vertex ids must be listed in order 0, 1, ...")
            g.add_vertex(parts[3] if len(parts) > 3 else parts[2])
        elif line.startswith("#"):
            continue
        else:
            u, v = line.split()
            edges.append((int(u), int(v)))
    for u, v in edges:
        g.add_edge(u, v)
    return g


def format_decomposition(d: TreeDecomposition) -> str:
    lines = [" ".join(str(v) for v in sorted(b)) for b in d.bags]
    lines.append("--")
    lines += [f"{a} {b}" for a, b in d.tree_edges]
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> TreeDecomposition:
    head, _, tail = text.partition("--\n")
    lines = head.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    bags = [frozenset(int(x) for x in line.split()) for line in lines]
    edges = [tuple(int(x) for x in line.split()) for line in tail.splitlines() if line.strip()]
    return TreeDecomposition(bags, edges)
