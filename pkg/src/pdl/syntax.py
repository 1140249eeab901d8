"""Formulas of propositional dependence logic.

A formula is an immutable binary syntax tree.  Leaves are ``T``, ``F``,
literals ``x`` / ``!x`` and (negated) dependence atoms ``dep(P;Q)``; inner
nodes are ``&`` and the split-junction ``|``.  Negation is atomic only.

Two occurrences of the same subformula are different nodes of the tree:
``dep(x;y) | dep(x;y)`` is not equivalent to ``dep(x;y)``, so every node gets
its own occurrence id.  Structural equality (``==``) ignores those ids.

Every traversal in here is iterative so formulas with a few thousand nested
connectives do not run into the interpreter's recursion limit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import ParseError

_uids = itertools.count()


@dataclass(frozen=True, eq=False)
class Formula:
    uid: int = field(default_factory=lambda: next(_uids), repr=False, kw_only=True)
    _hash: int | None = field(default=None, init=False, repr=False)

    def children(self) -> tuple[Formula, ...]:
        return ()

    def __str__(self) -> str:
        return render(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return structurally_equal(self, other)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", _structural_hash(self))
        return self._hash

    def __and__(self, other: Formula) -> And:
        return And(self, other)

    def __or__(self, other: Formula) -> Or:
        return Or(self, other)


@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Var(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class NegVar(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class Dep(Formula):
    """``dep(premise; conclusion)``; an empty premise makes a constancy atom."""

    premise: tuple[str, ...]
    conclusion: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "premise", tuple(self.premise))
        object.__setattr__(self, "conclusion", tuple(self.conclusion))
        if not self.conclusion:
            raise ValueError("dependence atom needs a non-empty conclusion")


@dataclass(frozen=True, eq=False)
class NegDep(Dep):
    pass


@dataclass(frozen=True, eq=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        # Or(d, d) must still hold two occurrences.
        if self.right is self.left:
            object.__setattr__(self, "right", copy_tree(self.left))

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class And(_Binary):
    pass


@dataclass(frozen=True, eq=False)
class Or(_Binary):
    pass


LEAF_TYPES = (Top, Bot, Var, NegVar, Dep, NegDep)


def _payload(node: Formula):
    if isinstance(node, (Var, NegVar)):
        return node.name
    if isinstance(node, Dep):
        return (node.premise, node.conclusion)
    return None


def _postorder(f: Formula):
    """Yield nodes children-first."""
    stack = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded or not isinstance(node, _Binary):
            yield node
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))


def _structural_hash(f: Formula) -> int:
    hashes: dict[int, int] = {}
    for node in _postorder(f):
        if isinstance(node, _Binary):
            h = hash((type(node).__name__, hashes[id(node.left)], hashes[id(node.right)]))
        else:
            h = hash((type(node).__name__, _payload(node)))
        hashes[id(node)] = h
    return hashes[id(f)]


def structurally_equal(a: Formula, b: Formula) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is not type(y):
            return False
        if isinstance(x, _Binary):
            stack.append((x.right, y.right))
            stack.append((x.left, y.left))
        elif _payload(x) != _payload(y):
            return False
    return True


def copy_tree(f: Formula) -> Formula:
    """Rebuild ``f`` with fresh occurrence ids."""
    built: dict[int, Formula] = {}
    for node in _postorder(f):
        if isinstance(node, _Binary):
            new = type(node)(built[id(node.left)], built[id(node.right)])
        elif isinstance(node, Dep):
            new = type(node)(node.premise, node.conclusion)
        elif isinstance(node, (Var, NegVar)):
            new = type(node)(node.name)
        else:
            new = type(node)()
        built[id(node)] = new
    return built[id(f)]


# --------------------------------------------------------------------------
# occurrences


class TreeIndex(NamedTuple):
    """Pre-order numbering of a syntax tree.

    ``nodes[i]`` is the occurrence with id ``i`` (the root is 0), and
    ``children[i]`` / ``parent[i]`` hold the ids of its neighbours.  Children
    always have larger ids than their parent, so walking the ids backwards
    visits every node after its subtree.
    """

    nodes: list[Formula]
    children: list[tuple[int, ...]]
    parent: list[int]


def index_tree(f: Formula) -> TreeIndex:
    cached = f.__dict__.get("_tree_index")
    if cached is None:
        cached = _build_index(f)
        # trees are immutable, so the index can live on the root
        object.__setattr__(f, "_tree_index", cached)
    return cached


def _build_index(f: Formula) -> TreeIndex:
    nodes: list[Formula] = []
    children: list[list[int]] = []
    parent: list[int] = []
    stack = [(f, -1)]
    while stack:
        node, par = stack.pop()
        i = len(nodes)
        nodes.append(node)
        children.append([])
        parent.append(par)
        if par >= 0:
            children[par].append(i)
        if isinstance(node, _Binary):
            stack.append((node.right, i))
            stack.append((node.left, i))
    return TreeIndex(nodes, [tuple(c) for c in children], parent)


def subformulas(f: Formula) -> list[Formula]:
    """All occurrences of ``f`` in pre-order; the list index is the occurrence id."""
    return index_tree(f).nodes


def _natural_key(name: str):
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name)]


def sort_variables(names) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_natural_key))


def variables(f: Formula) -> tuple[str, ...]:
    """VAR(f), in natural sort order (``x2`` before ``x10``)."""
    cached = f.__dict__.get("_variables")
    if cached is not None:
        return cached
    names = set()
    for node in _postorder(f):
        if isinstance(node, (Var, NegVar)):
            names.add(node.name)
        elif isinstance(node, Dep):
            names.update(node.premise)
            names.update(node.conclusion)
    result = sort_variables(names)
    object.__setattr__(f, "_variables", result)
    return result


# --------------------------------------------------------------------------
# structural parameters


@dataclass(frozen=True)
class ParameterReport:
    formula_size: int
    formula_depth: int
    splits: int
    arity: int
    variable_count: int
    team_size: int | None = None

    def as_dict(self) -> dict:
        d = {
            "formula_size": self.formula_size,
            "formula_depth": self.formula_depth,
            "splits": self.splits,
            "arity": self.arity,
            "variable_count": self.variable_count,
        }
        if self.team_size is not None:
            d["team_size"] = self.team_size
        return d


def parameters(f: Formula, team=None) -> ParameterReport:
    """Size, depth, #splits, dep-arity and #variables of ``f``.

    Size counts syntax-tree nodes and depth counts edges on the longest
    root-to-leaf path, so a single leaf has size 1 and depth 0.  The arity of
    ``dep(P;Q)`` is ``len(P)``.  When ``team`` is given its size is reported
    as well.
    """
    idx = index_tree(f)
    depth = [0] * len(idx.nodes)
    splits = arity = 0
    for i, node in enumerate(idx.nodes):
        if i:
            depth[i] = depth[idx.parent[i]] + 1
        if isinstance(node, Or):
            splits += 1
        elif isinstance(node, Dep):
            arity = max(arity, len(node.premise))
    return ParameterReport(
        formula_size=len(idx.nodes),
        formula_depth=max(depth),
        splits=splits,
        arity=arity,
        variable_count=len(variables(f)),
        team_size=None if team is None else len(team),
    )


# --------------------------------------------------------------------------
# printing


def _render_leaf(node: Formula) -> str:
    if isinstance(node, Top):
        return "T"
    if isinstance(node, Bot):
        return "F"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, NegVar):
        return "!" + node.name
    text = "dep(%s;%s)" % (",".join(node.premise), ",".join(node.conclusion))
    return "!" + text if isinstance(node, NegDep) else text


def _join(node: _Binary, left: str, right: str) -> str:
    # Chains are left-nested by the parser, so a right operand of the same
    # connective needs parentheses while a left one does not.
    if isinstance(node, And):
        if isinstance(node.left, Or):
            left = f"({left})"
        if isinstance(node.right, _Binary):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(node.right, Or):
        right = f"({right})"
    return f"{left} | {right}"


def render(f: Formula) -> str:
    text: dict[int, str] = {}
    for node in _postorder(f):
        if isinstance(node, _Binary):
            text[id(node)] = _join(node, text[id(node.left)], text[id(node.right)])
        else:
            text[id(node)] = _render_leaf(node)
    return text[id(f)]


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[|&!();,])|(?P<bad>.)"
)
_KEYWORDS = {"T", "F"}


class _Token(NamedTuple):
    kind: str  # "ident", one of the symbols, or "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        col = m.start() - line_start + 1
        kind = m.lastgroup
        if kind == "ws":
            for k, ch in enumerate(m.group()):
                if ch == "\n":
                    line += 1
                    line_start = m.start() + k + 1
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", line, col)
        tokens.append(_Token("ident" if kind == "ident" else m.group(), m.group(), line, col))
    tokens.append(_Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def take(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        self.pos += 1
        return tok

    def ident_list(self, closing: str) -> list[str]:
        names: list[str] = []
        if self.peek().kind == closing:
            return names
        while True:
            tok = self.take("ident", "a variable name")
            if tok.text in _KEYWORDS:
                raise ParseError(f"{tok.text!r} is a constant, not a variable", tok.line, tok.column)
            names.append(tok.text)
            if self.peek().kind != ",":
                return names
            self.pos += 1

    def dep_atom(self, negated: bool) -> Formula:
        head = self.take("ident", "dep")
        self.take("(", "'('")
        premise = self.ident_list(";")
        self.take(";", "';' between premise and conclusion")
        conclusion = self.ident_list(")")
        if not conclusion:
            raise ParseError("dependence atom needs a non-empty conclusion", head.line, head.column)
        self.take(")", "')'")
        return NegDep(premise, conclusion) if negated else Dep(premise, conclusion)

    def is_dep(self) -> bool:
        return self.peek().text == "dep" and self.peek(1).kind == "("

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "!":
            self.pos += 1
            if self.is_dep():
                return self.dep_atom(negated=True)
            nxt = self.peek()
            if nxt.kind != "ident" or nxt.text in _KEYWORDS:
                raise ParseError("negation applies only to variables and dependence atoms",
                                 nxt.line, nxt.column)
            self.pos += 1
            return NegVar(nxt.text)
        if self.is_dep():
            return self.dep_atom(negated=False)
        if tok.kind == "ident":
            self.pos += 1
            if tok.text == "T":
                return Top()
            if tok.text == "F":
                return Bot()
            return Var(tok.text)
        raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}", tok.line, tok.column)

    def parse(self) -> Formula:
        # Operator precedence parsing with explicit stacks: nesting depth is
        # bounded by memory only.
        operands: list[Formula] = []
        ops: list[_Token] = []
        prec = {"|": 1, "&": 2}

        def reduce():
            op = ops.pop()
            right = operands.pop()
            left = operands.pop()
            operands.append(And(left, right) if op.kind == "&" else Or(left, right))

        expect_operand = True
        while True:
            tok = self.peek()
            if expect_operand:
                if tok.kind == "(":
                    ops.append(tok)
                    self.pos += 1
                else:
                    operands.append(self.atom())
                    expect_operand = False
                continue
            if tok.kind in prec:
                while ops and ops[-1].kind != "(" and prec[ops[-1].kind] >= prec[tok.kind]:
                    reduce()
                ops.append(tok)
                self.pos += 1
                expect_operand = True
            elif tok.kind == ")":
                while ops and ops[-1].kind != "(":
                    reduce()
                if not ops:
                    raise ParseError("unmatched ')'", tok.line, tok.column)
                ops.pop()
                self.pos += 1
            elif tok.kind == "eof":
                break
            else:
                raise ParseError(f"expected '&', '|' or ')', found {tok.text!r}", tok.line, tok.column)
        while ops:
            if ops[-1].kind == "(":
                raise ParseError("unclosed '('", ops[-1].line, ops[-1].column)
            reduce()
        return operands[0]


def parse(text: str) -> Formula:
    """Parse the concrete syntax, e.g. ``"(x3 | !x1) & (dep(x3;x4) | x1 & x2)"``.

    ``|`` binds weaker than ``&``; chains of either are left-nested.
    Raises :class:`ParseError` with line and column on malformed input.
    """
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# syntax circuit


@dataclass(frozen=True)
class Circuit:
    """Hash-consed syntax circuit.

    Structurally identical subtrees become one node.  Variables are nodes of
    their own: ``!x`` is a negation gate over the node ``x`` and a dependence
    atom is a gate over the nodes of its variables (``!dep(..)`` is a
    negation gate over the atom).  The circuit only feeds graph and treewidth
    analysis; formulas are always evaluated on the tree.
    """

    kinds: tuple[str, ...]
    labels: tuple[str, ...]
    children: tuple[tuple[int, ...], ...]
    root: int
    occurrence_nodes: tuple[int, ...]  # tree occurrence id -> circuit node

    def __len__(self) -> int:
        return len(self.kinds)

    def edges(self) -> list[tuple[int, int]]:
        return [(p, c) for p, cs in enumerate(self.children) for c in cs]

    def variable_nodes(self) -> dict[str, int]:
        return {lab: i for i, (k, lab) in enumerate(zip(self.kinds, self.labels)) if k == "var"}


def hash_cons(f: Formula) -> Circuit:
    idx = index_tree(f)
    keys: dict[tuple, int] = {}
    kinds: list[str] = []
    labels: list[str] = []
    children: list[tuple[int, ...]] = []

    def node(key, kind, label, kids=()):
        if key not in keys:
            keys[key] = len(kinds)
            kinds.append(kind)
            labels.append(label)
            children.append(tuple(dict.fromkeys(kids)))
        return keys[key]

    def var(name):
        return node(("var", name), "var", name)

    def dep(atom):
        names = dict.fromkeys(atom.premise + atom.conclusion)
        kids = [var(n) for n in names]
        label = _render_leaf(Dep(atom.premise, atom.conclusion))
        return node(("dep", atom.premise, atom.conclusion), "dep", label, kids)

    occ = [0] * len(idx.nodes)
    for i in reversed(range(len(idx.nodes))):
        n = idx.nodes[i]
        if isinstance(n, Top):
            occ[i] = node(("top",), "top", "T")
        elif isinstance(n, Bot):
            occ[i] = node(("bot",), "bot", "F")
        elif isinstance(n, Var):
            occ[i] = var(n.name)
        elif isinstance(n, NegVar):
            v = var(n.name)
            occ[i] = node(("neg", v), "neg", "!" + n.name, [v])
        elif isinstance(n, NegDep):
            d = dep(n)
            occ[i] = node(("neg", d), "neg", "!" + labels[d], [d])
        elif isinstance(n, Dep):
            occ[i] = dep(n)
        else:
            left, right = idx.children[i]
            l, r = occ[left], occ[right]
            kind = "and" if isinstance(n, And) else "or"
            occ[i] = node((kind, l, r), kind, _join(n, labels[l], labels[r]), [l, r])
    return Circuit(tuple(kinds), tuple(labels), tuple(children), occ[0], tuple(occ))
