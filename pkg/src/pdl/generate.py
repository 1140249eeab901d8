"""Random and exhaustive instance generators used by the tests and the CLI."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .reductions import CnfInstance, SimpleGraph
from .syntax import And, Bot, Dep, Formula, NegDep, NegVar, Or, Top, Var, parse
from .team import Team, all_assignments

# Leaf alphabet of the exhaustive family over {x, y}.
LEAVES_2VARS: tuple[str, ...] = (
    "T", "F", "x", "!x", "y", "!y",
    "dep(;x)", "dep(;y)", "dep(;x,y)", "dep(x;y)", "dep(y;x)", "!dep(x;y)",
)


def _trees_by_leaves(leaves: Sequence[Formula], k_max: int) -> dict[int, list[Formula]]:
    out: dict[int, list[Formula]] = {1: list(leaves)}
    for k in range(2, k_max + 1):
        level = []
        for j in range(1, k):
            for a in out[j]:
                for b in out[k - j]:
                    level.append(And(a, b))
                    level.append(Or(a, b))
        out[k] = level
    return out


def count_formulas(max_size: int, n_leaves: int) -> int:
    """How many trees ``all_formulas`` yields (Catalan shapes x labels)."""
    total = 0
    for k in range(1, (max_size + 1) // 2 + 1):
        total += _catalan(k - 1) * 2 ** (k - 1) * n_leaves ** k
    return total


def _catalan(n: int) -> int:
    return 1 if n == 0 else _catalan(n - 1) * 2 * (2 * n - 1) // (n + 1)


def all_formulas(max_size: int, leaves: Sequence[str] = LEAVES_2VARS, *,
                 part: int = 0, parts: int = 1) -> Iterator[Formula]:
    """Every syntax tree with at most ``max_size`` nodes over ``leaves``.

    Trees with ``k`` leaves have ``2k - 1`` nodes; they are listed by
    increasing ``k``.  ``part``/``parts`` select every ``parts``-th tree
    (starting at ``part``) so the family can be split between processes.
    Subtrees are shared between the yielded trees, which is harmless since
    formulas are immutable and occurrences are numbered per tree.
    """
    k_max = (max_size + 1) // 2
    if k_max < 1:
        return
    atoms = [parse(s) for s in leaves]
    small = _trees_by_leaves(atoms, max(1, k_max - 1))
    index = 0
    for k in range(1, k_max + 1):
        if k < k_max or k == 1:
            for f in small[k]:
                if index % parts == part:
                    yield f
                index += 1
            continue
        for j in range(1, k):
            for a in small[j]:
                for b in small[k - j]:
                    for op in (And, Or):
                        if index % parts == part:
                            yield op(a, b)
                        index += 1


def random_leaf(rng: random.Random, names: Sequence[str], *, dep_prob: float = 0.3,
                max_arity: int = 2, constants: bool = True) -> Formula:
    r = rng.random()
    if r < dep_prob:
        premise = rng.sample(list(names), rng.randint(0, min(max_arity, len(names))))
        rest = [v for v in names if v not in premise] or list(names)
        conclusion = rng.sample(rest, rng.randint(1, min(2, len(rest))))
        if rng.random() < 0.1:
            return NegDep(tuple(premise), tuple(conclusion))
        return Dep(tuple(premise), tuple(conclusion))
    if constants and r > 0.95:
        return Top() if rng.random() < 0.5 else Bot()
    name = rng.choice(list(names))
    return Var(name) if rng.random() < 0.5 else NegVar(name)


def random_formula(rng: random.Random, n_leaves: int, names: Sequence[str], *,
                   splits: int | None = None, dep_prob: float = 0.3,
                   max_arity: int = 2, constants: bool = True) -> Formula:
    """Random tree with ``n_leaves`` leaves (so ``2 * n_leaves - 1`` nodes).

    Built by repeatedly joining two random members of a pool of subtrees.
    ``splits`` fixes how many of the ``n_leaves - 1`` connectives are ``|``;
    otherwise each one is ``|`` with probability 1/2.
    """
    if n_leaves < 1:
        raise ValueError("a formula needs at least one leaf")
    if splits is not None and not 0 <= splits < n_leaves:
        raise ValueError(f"{n_leaves} leaves allow 0..{n_leaves - 1} splits")
    pool = [random_leaf(rng, names, dep_prob=dep_prob, max_arity=max_arity, constants=constants)
            for _ in range(n_leaves)]
    n_ops = n_leaves - 1
    if splits is None:
        ops = [rng.random() < 0.5 for _ in range(n_ops)]
    else:
        ops = [True] * splits + [False] * (n_ops - splits)
        rng.shuffle(ops)
    for is_or in ops:
        i, j = rng.sample(range(len(pool)), 2)
        a, b = pool[i], pool[j]
        for k in sorted((i, j), reverse=True):
            pool[k] = pool[-1]
            pool.pop()
        pool.append(Or(a, b) if is_or else And(a, b))
    return pool[0]


def random_team(rng: random.Random, names: Sequence[str], size: int) -> Team:
    """``size`` distinct assignments over ``names``, drawn uniformly."""
    if size > 2 ** len(names):
        raise ValueError(f"only {2 ** len(names)} assignments over {len(names)} variables")
    if len(names) <= 16:
        rows = rng.sample(all_assignments(names), size)
    else:
        seen: set[tuple[int, ...]] = set()
        while len(seen) < size:
            seen.add(tuple(rng.randint(0, 1) for _ in names))
        rows = list(seen)
    return Team(tuple(names), rows)


def all_teams(names: Sequence[str]) -> Iterator[Team]:
    """All ``2 ** 2 ** n`` teams over ``names``, the empty team first."""
    rows = all_assignments(names)
    for mask in range(1 << len(rows)):
        yield Team(tuple(names), [r for i, r in enumerate(rows) if mask >> i & 1])


def random_cnf(rng: random.Random, n: int, m: int, width: int = 3) -> CnfInstance:
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), min(width, n))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfInstance(n, tuple(clauses))


def all_3cnfs(n: int, max_clauses: int) -> Iterator[CnfInstance]:
    """Every set of 1..``max_clauses`` distinct clauses over ``x1..xn``.

    A clause mentions each variable at most once and has 1 to 3 literals.
    """
    clauses = []
    for signs in itertools.product((0, 1, -1), repeat=n):
        lits = tuple(s * (j + 1) for j, s in enumerate(signs) if s)
        if 1 <= len(lits) <= 3:
            clauses.append(lits)
    for m in range(1, max_clauses + 1):
        for chosen in itertools.combinations(clauses, m):
            yield CnfInstance(n, chosen)


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> SimpleGraph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return SimpleGraph(n, tuple(edges))


def all_graphs(n: int) -> Iterator[SimpleGraph]:
    """All ``2 ** (n choose 2)`` labelled simple graphs on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph(n, tuple(e for i, e in enumerate(pairs) if mask >> i & 1))
