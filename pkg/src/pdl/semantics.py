"""Reference implementation of the team satisfaction relation.

This is the straightforward recursive definition with an existential search
over splits at every ``|`` node.  It is exponential in the team size and is
the oracle the faster algorithms in :mod:`pdl.fpt_mc` and :mod:`pdl.solvers` are
tested against.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded
from .syntax import (And, Bot, Dep, Formula, NegDep, NegVar, Or, Top, Var, _postorder,
                     index_tree, variables)
from .team import Assignment, Team, all_assignments

MAX_BRUTE_TEAM = 12

BOTTOM_EMPTY = "empty"
BOTTOM_NEVER = "never"


class SplitMode(str, enum.Enum):
    LAX = "lax"
    STRICT = "strict"


def submasks(mask: int):
    """All submasks of ``mask``, largest first, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _members(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _check_bottom(bottom: str) -> None:
    if bottom not in (BOTTOM_EMPTY, BOTTOM_NEVER):
        raise ValueError(f"bottom convention must be {BOTTOM_EMPTY!r} or {BOTTOM_NEVER!r}")


class Evaluator:
    """Decides ``P |= f`` for subteams ``P`` of a fixed team.

    The truth value of every occurrence is tabulated on every subteam mask,
    children first, straight from the satisfaction clauses: a ``|`` node
    holds on ``P`` iff some split of ``P`` satisfies both sides.  Tables are
    built on the first query, so asking about many subteams shares work.

    ``bottom`` picks the reading of ``F``: ``"empty"`` makes it true exactly
    on the empty team (like a negated dependence atom), ``"never"`` makes it
    false everywhere.  Splits are partitions ``(T1, P - T1)``; with
    ``exhaustive_splits`` a lax split instead tries every pair ``(T1, T2)``
    with ``T1 | T2 == P``.
    """

    def __init__(self, team: Team, f: Formula, mode: SplitMode = SplitMode.LAX, *,
                 bottom: str = BOTTOM_EMPTY, exhaustive_splits: bool = False,
                 max_team: int = MAX_BRUTE_TEAM):
        if len(team) > max_team:
            raise CapExceeded("team size", len(team), max_team)
        _check_bottom(bottom)
        team.require(variables(f))
        self.team = team
        self.mode = SplitMode(mode)
        self.bottom = bottom
        self.exhaustive = exhaustive_splits and self.mode is SplitMode.LAX
        self.tree = index_tree(f)
        self._root: list[bool] | None = None

    def holds(self, mask: int | None = None) -> bool:
        if self._root is None:
            self._root = self._tabulate()
        return self._root[self.team.full_mask if mask is None else mask]

    def _leaf(self, node: Formula, size: int) -> list[bool]:
        team = self.team
        if isinstance(node, Top):
            return [True] * size
        if isinstance(node, (Bot, NegDep)):
            empty_ok = isinstance(node, NegDep) or self.bottom == BOTTOM_EMPTY
            return [empty_ok] + [False] * (size - 1)
        if isinstance(node, Var):
            bad = team.full_mask & ~team.ones_mask(node.name)
            return [p & bad == 0 for p in range(size)]
        if isinstance(node, NegVar):
            bad = team.ones_mask(node.name)
            return [p & bad == 0 for p in range(size)]
        clash = _clash_rows(team, node)
        return [not any(clash[m] & p for m in _members(p)) for p in range(size)]

    def _tabulate(self) -> list[bool]:
        size = 1 << len(self.team)
        tree = self.tree
        tables: list[list[bool] | None] = [None] * len(tree.nodes)
        for i in reversed(range(len(tree.nodes))):
            kids = tree.children[i]
            if not kids:
                tables[i] = self._leaf(tree.nodes[i], size)
                continue
            a, b = tables[kids[0]], tables[kids[1]]
            tables[kids[0]] = tables[kids[1]] = None
            if isinstance(tree.nodes[i], And):
                tables[i] = [x and y for x, y in zip(a, b)]
            elif self.exhaustive:
                tables[i] = [any(a[t1] and b[t2] for t1 in submasks(p) for t2 in submasks(p)
                                 if t1 | t2 == p) for p in range(size)]
            else:
                tables[i] = [any(a[t1] and b[p ^ t1] for t1 in submasks(p)) for p in range(size)]
        return tables[0]


def _clash_rows(team: Team, node: Dep) -> list[int]:
    """``clash[i]`` has bit ``j`` set iff members i and j violate ``node``."""
    prem = [team.position(v) for v in node.premise]
    concl = [team.position(v) for v in node.conclusion]
    rows = team.rows
    keys = [tuple(r[p] for p in prem) for r in rows]
    vals = [tuple(r[q] for q in concl) for r in rows]
    clash = [0] * len(rows)
    for i in range(len(rows)):
        for j in range(len(rows)):
            if keys[i] == keys[j] and vals[i] != vals[j]:
                clash[i] |= 1 << j
    return clash


def evaluate(team: Team, f: Formula, mode: SplitMode = SplitMode.LAX, *,
             bottom: str = BOTTOM_EMPTY, exhaustive_splits: bool = False,
             max_team: int = MAX_BRUTE_TEAM) -> bool:
    """Whether ``team |= f``.

    Splits are searched as partitions ``T1, T \\ T1`` in both modes.  Because
    the logic is downward closed an overlapping lax split can always be made
    disjoint; ``exhaustive_splits=True`` searches all overlapping pairs
    instead so that claim can be checked.
    """
    return Evaluator(team, f, mode, bottom=bottom, exhaustive_splits=exhaustive_splits,
                     max_team=max_team).holds()


@dataclass(frozen=True)
class DepCheck:
    holds: bool
    witness: tuple[Assignment, Assignment] | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_dep(team: Team, premise: Sequence[str], conclusion: Sequence[str]) -> DepCheck:
    """Check ``dep(premise; conclusion)`` pairwise, returning a violating pair on failure."""
    team.require(list(premise) + list(conclusion))
    prem = [team.position(v) for v in premise]
    concl = [team.position(v) for v in conclusion]
    for s, t in itertools.combinations(team.rows, 2):
        if all(s[p] == t[p] for p in prem) and any(s[q] != t[q] for q in concl):
            return DepCheck(False, (s, t))
    return DepCheck(True)


def is_flat(f: Formula, universe: Sequence[str] | None = None,
            probes: Iterable[Team] | None = None, *, max_probe_members: int = 8) -> bool:
    """Test ``T |= f  <=>  {s} |= f for all s in T`` on the probe teams.

    Without explicit probes every team over ``universe`` is tried, which is
    only allowed while the full team has at most ``max_probe_members``
    members.  A tester, not a decision procedure.
    """
    universe = tuple(universe) if universe is not None else variables(f)
    if probes is None:
        rows = all_assignments(universe)
        if len(rows) > max_probe_members:
            raise CapExceeded("probe team size", len(rows), max_probe_members)
        full = Team(universe, rows)
        ev = Evaluator(full, f)
        singles = [ev.holds(1 << i) for i in range(len(full))]
        return all(ev.holds(mask) == all(singles[i] for i in _members(mask))
                   for mask in range(1 << len(full)))
    for team in probes:
        ev = Evaluator(team, f)
        if ev.holds() != all(ev.holds(1 << i) for i in range(len(team))):
            return False
    return True


def is_2coherent_atom(premise: Sequence[str], conclusion: Sequence[str], team: Team) -> bool:
    """Whether ``team |= dep`` agrees with the dep holding on all subteams of size <= 2."""
    atom = Dep(tuple(premise), tuple(conclusion))
    ev = Evaluator(team, atom, max_team=max(len(team), MAX_BRUTE_TEAM))
    pairs = all(ev.holds((1 << i) | (1 << j))
                for i in range(len(team)) for j in range(i, len(team)))
    return ev.holds() == pairs


def classical_value(f: Formula, assignment: Mapping[str, int]) -> bool:
    """Tarskian truth value of a dependence-free formula under one assignment."""
    value: dict[int, bool] = {}
    for node in _postorder(f):
        if isinstance(node, Top):
            v = True
        elif isinstance(node, Bot):
            v = False
        elif isinstance(node, Var):
            v = bool(assignment[node.name])
        elif isinstance(node, NegVar):
            v = not assignment[node.name]
        elif isinstance(node, Dep):
            raise ValueError("classical_value is only defined for dependence-free formulas")
        elif isinstance(node, And):
            v = value[id(node.left)] & value[id(node.right)]
        else:
            v = value[id(node.left)] | value[id(node.right)]
        value[id(node)] = v
    return value[id(f)]
