"""Satisfiability: brute force, the split-bounded label algorithm, and m-SAT.

By downward closure a formula is satisfiable iff some singleton team
satisfies it, so SAT is a search for one assignment.  Dependence atoms hold
on every singleton and ``|`` acts like classical disjunction there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import CapExceeded, InputError
from .fpt_mc import mc_teamsize
from .semantics import BOTTOM_EMPTY, Evaluator, SplitMode
from .syntax import (And, Bot, Dep, Formula, NegDep, NegVar, Or, Top, Var, _postorder,
                     index_tree, variables)
from .team import MAX_SUBTEAM_MEMBERS, MAX_VARIABLES, Team, all_assignments

CONFLICT = "c"


@dataclass(frozen=True)
class PartialAssignment:
    """Partial map from variables to 0, 1 or conflict.

    Stored as two bitmasks over a variable order fixed by the caller: a
    variable is 1 if only its ``ones`` bit is set, 0 if only its ``zeros``
    bit is set, and in conflict if both are.
    """

    ones: int = 0
    zeros: int = 0

    @property
    def conflicts(self) -> int:
        return self.ones & self.zeros

    def is_consistent(self) -> bool:
        return not self.conflicts

    def to_dict(self, order: Sequence[str]) -> dict[str, int | str]:
        out: dict[str, int | str] = {}
        for i, name in enumerate(order):
            one, zero = self.ones >> i & 1, self.zeros >> i & 1
            if one and zero:
                out[name] = CONFLICT
            elif one or zero:
                out[name] = one
        return out

    @classmethod
    def from_dict(cls, mapping: Mapping[str, int | str], order: Sequence[str]) -> PartialAssignment:
        pos = {n: i for i, n in enumerate(order)}
        ones = zeros = 0
        for name, value in mapping.items():
            bit = 1 << pos[name]
            if value in (1, CONFLICT):
                ones |= bit
            if value in (0, CONFLICT):
                zeros |= bit
        return cls(ones, zeros)


class _TriviallyTrue:
    """Label entry of subformulas true under every assignment (``T``, dep atoms)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TRIVIALLY_TRUE"


TRIVIALLY_TRUE = _TriviallyTrue()


def join_conflict(a: PartialAssignment, b: PartialAssignment) -> PartialAssignment:
    """Merge two partial assignments; disagreeing variables become conflicts."""
    return PartialAssignment(a.ones | b.ones, a.zeros | b.zeros)


@dataclass
class SatTrace:
    """Everything the split-bounded algorithm computed.

    ``order`` fixes the bit positions of the partial assignments; it is
    ``variables(f)``, or a single placeholder when ``f`` has no variables
    (``F`` still needs something to put in conflict).
    """

    order: tuple[str, ...]
    root_label: list
    witness: dict[str, int] | None
    max_label_size: int
    labels: list[list] | None = field(default=None, repr=False)

    def root_dicts(self) -> list:
        return [e if e is TRIVIALLY_TRUE else e.to_dict(self.order) for e in self.root_label]


def _dedupe(entries):
    return list(dict.fromkeys(entries))


def sat_splits_trace(f: Formula, *, prune: bool = False, keep_labels: bool = False) -> SatTrace:
    """Run the split-bounded SAT algorithm and keep its labels.

    Label of a leaf: ``{x->1}`` for ``x``, ``{x->0}`` for ``!x``, a conflicted
    assignment for ``F`` and ``!dep`` (no singleton satisfies either), and
    ``TRIVIALLY_TRUE`` for ``T`` and dep atoms.  At ``&`` a trivially true
    child passes the other label through, otherwise all pairwise joins are
    taken; at ``|`` a trivially true child makes the node trivially true,
    otherwise the labels are united.  Only ``|`` can grow a label, so no label
    has more than ``2**splits`` entries.  ``prune`` drops conflicted entries
    as soon as they appear (same answer, smaller labels).
    """
    names = variables(f)
    order = names or ("_",)
    bit = {n: 1 << i for i, n in enumerate(order)}
    conflicted = PartialAssignment(1, 1)
    tree = index_tree(f)
    labels: list[list] = [[] for _ in tree.nodes]
    largest = 0
    for i in reversed(range(len(tree.nodes))):
        node = tree.nodes[i]
        kids = tree.children[i]
        if isinstance(node, Var):
            label = [PartialAssignment(ones=bit[node.name])]
        elif isinstance(node, NegVar):
            label = [PartialAssignment(zeros=bit[node.name])]
        elif isinstance(node, (Bot, NegDep)):
            label = [conflicted]
        elif isinstance(node, (Top, Dep)):
            label = [TRIVIALLY_TRUE]
        else:
            s0, s1 = labels[kids[0]], labels[kids[1]]
            trivial = [TRIVIALLY_TRUE in s for s in (s0, s1)]
            if any(trivial):
                if isinstance(node, And):
                    label = s1 if trivial[0] else s0
                else:
                    label = [TRIVIALLY_TRUE]
            elif isinstance(node, And):
                label = _dedupe(join_conflict(a, b) for a in s0 for b in s1)
            else:
                label = _dedupe(s0 + s1)
            if prune and label != [TRIVIALLY_TRUE]:
                label = [e for e in label if e.is_consistent()]
            if not keep_labels:
                labels[kids[0]] = labels[kids[1]] = []
        labels[i] = label
        largest = max(largest, len(label))

    root = labels[0]
    witness = None
    for entry in root:
        if entry is TRIVIALLY_TRUE:
            witness = {n: 0 for n in names}
            break
        if entry.is_consistent():
            # undefined variables may take any value; use 0
            witness = {n: int(entry.ones & bit[n] != 0) for n in names}
            break
    return SatTrace(order, root, witness, largest, labels if keep_labels else None)


def sat_splits(f: Formula) -> dict[str, int] | None:
    """A satisfying assignment (singleton team) for ``f``, or None.

    Runs in ``O(2**splits * |f|**O(1))``.
    """
    return sat_splits_trace(f).witness


def sat_brute(f: Formula, *, max_vars: int = MAX_VARIABLES) -> dict[str, int] | None:
    """First assignment, in lexicographic order over ``variables(f)``, whose singleton team satisfies ``f``."""
    names = variables(f)
    for row in all_assignments(names, cap=max_vars):
        if Evaluator(Team(names, [row]), f).holds():
            return dict(zip(names, row))
    return None


def dep_eliminate(f: Formula) -> Formula:
    """Replace ``dep(..)`` by ``T`` and ``!dep(..)`` by ``F``."""
    built: dict[int, Formula] = {}
    for node in _postorder(f):
        if isinstance(node, NegDep):
            new = Bot()
        elif isinstance(node, Dep):
            new = Top()
        elif isinstance(node, (And, Or)):
            new = type(node)(built[id(node.left)], built[id(node.right)])
        elif isinstance(node, (Var, NegVar)):
            new = type(node)(node.name)
        else:
            new = type(node)()
        built[id(node)] = new
    return built[id(f)]


def msat(f: Formula, m: int, universe: Sequence[str] | None = None, *,
         mode: SplitMode = SplitMode.LAX, bottom: str = BOTTOM_EMPTY,
         max_vars: int = MAX_VARIABLES, max_team: int = MAX_SUBTEAM_MEMBERS) -> Team | None:
    """A team of exactly ``m`` members over ``universe`` satisfying ``f``, or None.

    ``universe`` defaults to ``variables(f)``.  Teams are built by adding
    assignments in lexicographic order; since satisfaction is downward closed
    a failing partial team is never extended, and the first hit is the
    lexicographically least satisfying team.  ``m = 0`` asks about the empty
    team and ``m = 1`` is plain SAT.  Candidate teams are model checked with
    the team-size algorithm, so ``m`` is capped by ``max_team``.
    """
    names = tuple(universe) if universe is not None else variables(f)
    missing = set(variables(f)) - set(names)
    if missing:
        raise InputError("formula variables missing from universe: " + ", ".join(sorted(missing)))
    if m < 0:
        raise InputError("team size must be non-negative")
    if len(names) > max_vars:
        raise CapExceeded("number of variables", len(names), max_vars)
    if m > max_team:
        raise CapExceeded("team size", m, max_team)
    rows = all_assignments(names, cap=max_vars)
    if m > len(rows):
        raise InputError(f"no team of size {m} exists over {len(names)} variable(s)")

    def holds(members) -> bool:
        return mc_teamsize(Team(names, members), f, mode, bottom=bottom, max_team=max(m, 1)).holds

    if m == 0:
        return Team(names) if holds([]) else None
    # iterative DFS; picks[d] is the row index chosen at depth d
    picks: list[int] = []
    k = 0
    while True:
        depth = len(picks)
        if depth == m:
            return Team(names, [rows[i] for i in picks])
        if k <= len(rows) - (m - depth) and holds([rows[i] for i in picks] + [rows[k]]):
            picks.append(k)
            k += 1
            continue
        if k <= len(rows) - (m - depth):
            k += 1
            continue
        if not picks:
            return None
        k = picks.pop() + 1


def iter_satisfying_teams(f: Formula, size: int, universe: Sequence[str] | None = None):
    """Every team of exactly ``size`` members satisfying ``f`` (plain exhaustive scan)."""
    names = tuple(universe) if universe is not None else variables(f)
    for members in itertools.combinations(all_assignments(names), size):
        team = Team(names, members)
        if Evaluator(team, f, max_team=max(size, 1)).holds():
            yield team
