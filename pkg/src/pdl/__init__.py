"""Propositional dependence logic: team semantics, FPT algorithms, treewidth tools."""

from .errors import CapExceeded, InputError, ParseError, PDLError, UnknownVariable
from .fpt_mc import LabelSet, MCResult, label_table, mc_teamsize
from .graphs import (Graph, TreeDecomposition, circuit_graph, exact_treewidth, gaifman_graph,
                     parameter_relations, tree_decompose, validate)
from .reductions import (CnfInstance, McInstance, SimpleGraph, cnf_brute, col_brute, reduce_3col,
                         reduce_3sat)
from .semantics import (BOTTOM_EMPTY, BOTTOM_NEVER, SplitMode, check_dep, evaluate, is_2coherent_atom,
                        is_flat)
from .solvers import (TRIVIALLY_TRUE, PartialAssignment, dep_eliminate, msat, sat_brute, sat_splits,
                      sat_splits_trace)
from .syntax import (And, Bot, Dep, Formula, NegDep, NegVar, Or, Top, Var, hash_cons, parameters, parse,
                     render, subformulas, variables)
from .team import Team, encode_table, full_team, load_team

__all__ = [
    "And", "BOTTOM_EMPTY", "BOTTOM_NEVER", "Bot", "CapExceeded", "CnfInstance", "Dep", "Formula",
    "Graph", "InputError", "LabelSet", "MCResult", "McInstance", "NegDep", "NegVar", "Or",
    "PDLError", "ParseError", "PartialAssignment", "SimpleGraph", "SplitMode", "TRIVIALLY_TRUE",
    "Team", "Top", "TreeDecomposition", "UnknownVariable", "Var", "check_dep", "circuit_graph",
    "cnf_brute", "col_brute", "dep_eliminate", "encode_table", "evaluate", "exact_treewidth",
    "full_team", "gaifman_graph", "hash_cons", "is_2coherent_atom", "is_flat", "label_table",
    "load_team", "mc_teamsize", "msat", "parameter_relations", "parameters", "parse", "reduce_3col",
    "reduce_3sat", "render", "sat_brute", "sat_splits", "sat_splits_trace", "subformulas",
    "tree_decompose", "validate", "variables",
]
