"""Model checking in time exponential only in the team size.

Bottom-up over the syntax tree, every occurrence ``a`` gets the label
``L[a]``: the set of all subteams ``P`` of the input team with ``P |= a``.
Subteams are bitmasks over the team's member order.  Leaves are filled by
trying every subteam, ``&`` intersects the labels of its children and ``|``
collects all unions ``P | Q`` (disjoint ones only under strict semantics).
The team satisfies the formula iff the full team is in the root label.

With ``k`` team members a label has at most ``2**k`` entries, so each inner
node costs at most ``4**k`` steps and the whole run is ``O(4**k * |f|)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded
from .semantics import BOTTOM_EMPTY, SplitMode, _check_bottom, _clash_rows
from .syntax import And, Bot, Dep, Formula, NegDep, NegVar, Top, Var, index_tree, variables
from .team import MAX_SUBTEAM_MEMBERS, Team


@dataclass(frozen=True)
class LabelSet:
    team: Team
    nodes: list[Formula]
    labels: list[frozenset[int]]

    def __getitem__(self, occurrence: int) -> frozenset[int]:
        return self.labels[occurrence]

    def __len__(self) -> int:
        return len(self.labels)

    def teams(self, occurrence: int) -> list[Team]:
        return [self.team.subteam(m) for m in sorted(self.labels[occurrence])]


@dataclass(frozen=True)
class MCResult:
    holds: bool
    labels: LabelSet
    certificate: dict[int, tuple[int, int]] | None = None
    assigned: dict[int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


@lru_cache(maxsize=256)
def _leaf_label(node: Formula, team: Team, bottom: str) -> frozenset[int]:
    k = len(team)
    everything = range(1 << k)
    if isinstance(node, Top):
        return frozenset(everything)
    if isinstance(node, Bot):
        return frozenset({0}) if bottom == BOTTOM_EMPTY else frozenset()
    if isinstance(node, NegDep):
        return frozenset({0})
    if isinstance(node, Var):
        ones = team.ones_mask(node.name)
        return frozenset(p for p in everything if p & ~ones == 0)
    if isinstance(node, NegVar):
        ones = team.ones_mask(node.name)
        return frozenset(p for p in everything if p & ones == 0)
    # dependence atom: P qualifies iff no two members of P agree on the
    # premise and disagree on some conclusion variable
    clash = _clash_rows(team, node)
    ok = [True] * (1 << k)
    for p in range(1, 1 << k):
        top = p.bit_length() - 1
        ok[p] = ok[p ^ (1 << top)] and not (p & clash[top])
    return frozenset(p for p in everything if ok[p])


def label_table(team: Team, f: Formula, mode: SplitMode = SplitMode.LAX, *,
                bottom: str = BOTTOM_EMPTY, max_team: int = MAX_SUBTEAM_MEMBERS) -> LabelSet:
    """Labels of every occurrence of ``f`` (indexed by pre-order occurrence id)."""
    if len(team) > max_team:
        raise CapExceeded("team size", len(team), max_team)
    _check_bottom(bottom)
    team.require(variables(f))
    strict = SplitMode(mode) is SplitMode.STRICT
    tree = index_tree(f)
    labels: list[frozenset[int]] = [frozenset()] * len(tree.nodes)
    for i in reversed(range(len(tree.nodes))):
        node = tree.nodes[i]
        if not tree.children[i]:
            labels[i] = _leaf_label(node, team, bottom)
            continue
        left, right = (labels[c] for c in tree.children[i])
        if isinstance(node, And):
            labels[i] = left & right
        elif strict:
            labels[i] = frozenset({p | q for p in left for q in right if not p & q})
        else:
            labels[i] = frozenset({p | q for p in left for q in right})
    return LabelSet(team, tree.nodes, labels)


def _certificate(tree, labels, full: int, strict: bool):
    """Walk down from the root, fixing for each ``|`` the lowest split (P, Q)."""
    chosen: dict[int, tuple[int, int]] = {}
    assigned = {0: full}
    stack = [0]
    while stack:
        i = stack.pop()
        target = assigned[i]
        kids = tree.children[i]
        if not kids:
            continue
        left, right = kids
        if isinstance(tree.nodes[i], And):
            assigned[left] = assigned[right] = target
        else:
            rhs = sorted(q for q in labels[right] if q & ~target == 0)
            split = next((p, q) for p in sorted(labels[left]) if p & ~target == 0
                         for q in rhs if p | q == target and not (strict and p & q))
            chosen[i] = split
            assigned[left], assigned[right] = split
        stack.extend(kids)
    return chosen, assigned


def mc_teamsize(team: Team, f: Formula, mode: SplitMode = SplitMode.LAX, *,
                bottom: str = BOTTOM_EMPTY, certificate: bool = False,
                max_team: int = MAX_SUBTEAM_MEMBERS) -> MCResult:
    """Decide ``team |= f`` from the label table.

    With ``certificate=True`` a positive answer also records, per ``|``
    occurrence, the split ``(P, Q)`` used (the numerically lowest one), and
    the subteam each occurrence ends up evaluated on.
    """
    table = label_table(team, f, mode, bottom=bottom, max_team=max_team)
    holds = team.full_mask in table.labels[0]
    if not (holds and certificate):
        return MCResult(holds, table)
    tree = index_tree(f)
    strict = SplitMode(mode) is SplitMode.STRICT
    chosen, assigned = _certificate(tree, table.labels, team.full_mask, strict)
    return MCResult(holds, table, chosen, assigned)
