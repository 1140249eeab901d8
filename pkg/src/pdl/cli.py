"""Command-line front end.

Exit status: 0 for yes / success, 1 for no, 2 for any error.  With
``--json`` every command prints one :class:`RunReport` object.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import graphs
from .errors import PDLError
from .fpt_mc import mc_teamsize
from .generate import random_cnf, random_graph
from .reductions import (cnf_brute, col_brute, parse_dimacs, parse_graph, reduce_3col,
                         reduce_3sat)
from .semantics import BOTTOM_EMPTY, BOTTOM_NEVER, MAX_BRUTE_TEAM, SplitMode, check_dep, evaluate
from .solvers import msat, sat_brute, sat_splits
from .syntax import Formula, index_tree, parameters, parse, render
from .team import (MAX_SUBTEAM_MEMBERS, MAX_VARIABLES, Team, encode_table, load_team,
                   read_table_csv, rewrite_dep_over_columns)

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class SelfCheckFailed(Exception):
    pass


@dataclass
class RunReport:
    command: list[str]
    algorithm: str
    result: Any
    elapsed: float
    parameters: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def parse_report(text: str) -> RunReport:
    data = json.loads(text)
    return RunReport(command=list(data["command"]), algorithm=data["algorithm"],
                     result=data["result"], elapsed=float(data["elapsed"]),
                     parameters=dict(data.get("parameters", {})))


def read_formula(arg: str) -> Formula:
    """``arg`` is formula text, ``@path``, or the path of an existing file."""
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            return parse(fh.read())
    if os.path.isfile(arg):
        with open(arg) as fh:
            return parse(fh.read())
    return parse(arg)


def _row(bits) -> str:
    return "".join(map(str, bits))


def _team_rows(team: Team, mask: int) -> list[str]:
    return [_row(r) for i, r in enumerate(team.rows) if mask >> i & 1]


# --------------------------------------------------------------------------
# commands; each returns (exit code, text lines, report)


def cmd_mc(args) -> tuple[int, list[str], dict]:
    team = load_team(args.team)
    f = read_formula(args.formula)
    mode = SplitMode(args.mode)
    max_team = args.max_team
    if args.algo == "brute":
        holds = evaluate(team, f, mode, bottom=args.bottom,
                         max_team=max_team or MAX_BRUTE_TEAM)
        result: dict[str, Any] = {"holds": holds}
    else:
        res = mc_teamsize(team, f, mode, bottom=args.bottom, certificate=args.certificate,
                          max_team=max_team or MAX_SUBTEAM_MEMBERS)
        holds = res.holds
        result = {"holds": holds}
        if args.certificate and res.certificate is not None:
            tree = index_tree(f)
            result["certificate"] = [
                {"occurrence": occ, "subformula": render(tree.nodes[occ]),
                 "left": _team_rows(team, p), "right": _team_rows(team, q)}
                for occ, (p, q) in sorted(res.certificate.items())]
    if args.self_check:
        other = (mc_teamsize(team, f, mode, bottom=args.bottom).holds if args.algo == "brute"
                 else evaluate(team, f, mode, bottom=args.bottom,
                               max_team=max(len(team), MAX_BRUTE_TEAM)))
        if other != holds:
            raise SelfCheckFailed(f"brute and teamsize disagree on {render(f)}")
    lines = ["yes" if holds else "no"]
    for c in result.get("certificate", []):
        lines.append(f"split at {c['occurrence']} [{c['subformula']}]: "
                     f"{{{', '.join(c['left'])}}} | {{{', '.join(c['right'])}}}")
    return (EXIT_YES if holds else EXIT_NO), lines, {
        "algorithm": args.algo, "result": result,
        "parameters": parameters(f, team).as_dict()}


def cmd_sat(args):
    f = read_formula(args.formula)
    if args.algo == "brute":
        witness = sat_brute(f, max_vars=args.max_vars)
    else:
        witness = sat_splits(f)
    if args.self_check:
        other = sat_splits(f) if args.algo == "brute" else sat_brute(f, max_vars=args.max_vars)
        if (other is None) != (witness is None):
            raise SelfCheckFailed(f"brute and splits disagree on {render(f)}")
        if witness is not None and not evaluate(Team(tuple(witness), [tuple(witness.values())]), f):
            raise SelfCheckFailed("witness does not satisfy the formula")
    lines = ["yes" if witness is not None else "no"]
    if witness is not None and args.witness:
        lines.append(" ".join(f"{k}:{v}" for k, v in witness.items()))
    return (EXIT_YES if witness is not None else EXIT_NO), lines, {
        "algorithm": args.algo, "result": {"satisfiable": witness is not None, "witness": witness},
        "parameters": parameters(f).as_dict()}


def cmd_msat(args):
    f = read_formula(args.formula)
    universe = args.universe.split(",") if args.universe else None
    team = msat(f, args.m, universe, mode=SplitMode(args.mode), bottom=args.bottom,
                max_vars=args.max_vars, max_team=args.max_team or MAX_SUBTEAM_MEMBERS)
    lines = ["yes" if team is not None else "no"]
    result: dict[str, Any] = {"satisfiable": team is not None, "team": None}
    if team is not None:
        result["team"] = team.to_json()
        lines.append(" ".join(team.variables))
        lines += [_row(r) for r in team.rows]
    return (EXIT_YES if team is not None else EXIT_NO), lines, {
        "algorithm": "msat", "result": result, "parameters": parameters(f).as_dict()}


def cmd_params(args):
    f = read_formula(args.formula)
    team = load_team(args.team) if args.team else None
    report = parameters(f, team).as_dict()
    lines = [f"{k}: {v}" for k, v in report.items()]
    if team is not None:
        relations = graphs.parameter_relations(team, f, triangles=args.triangles)
        report["relations"] = {r.name: r.status for r in relations}
        lines += [f"{r.name} ({r.statement}): {r.status}" for r in relations]
    return EXIT_YES, lines, {"algorithm": "params", "result": report,
                             "parameters": parameters(f, team).as_dict()}


def cmd_tw(args):
    f = read_formula(args.formula)
    if args.graph == "gaifman":
        if not args.team:
            raise PDLError("--graph gaifman needs --team")
        team = load_team(args.team)
        g = graphs.gaifman_graph(team, f, triangles=args.triangles)
    else:
        team = None
        g = graphs.circuit_graph(f, triangles=args.triangles)
    if args.method == "exact":
        order = graphs.exact_order(g, max_vertices=args.max_vertices)
    else:
        order = graphs.elimination_order(g, args.method)
    d = graphs.decomposition_from_order(g, order)
    if not graphs.validate(d, g):
        raise SelfCheckFailed("produced an invalid tree decomposition")
    lines = [str(d.width)]
    if args.decomposition:
        lines.append(graphs.format_decomposition(d).rstrip("\n"))
    result = {"width": d.width, "vertices": len(g), "edges": len(g.edges),
              "bags": [sorted(b) for b in d.bags], "tree_edges": d.tree_edges}
    return EXIT_YES, lines, {"algorithm": f"{args.graph}/{args.method}", "result": result,
                             "parameters": parameters(f, team).as_dict()}


def cmd_reduce(args):
    rng = random.Random(args.seed)
    if args.problem == "3sat":
        if args.random:
            cnf = random_cnf(rng, args.random[0], args.random[1])
        else:
            cnf = parse_dimacs(_read(args.input))
        instance = reduce_3sat(cnf)
        expected = cnf_brute(cnf) if args.self_check else None
    else:
        if args.random:
            g = random_graph(rng, args.random[0], args.random[1] / 100)
        else:
            g = parse_graph(_read(args.input))
        instance = reduce_3col(g)
        expected = col_brute(g) if args.self_check else None
    if expected is not None:
        got = mc_teamsize(instance.team, instance.formula).holds
        if got != expected:
            raise SelfCheckFailed("model checking disagrees with the brute-force oracle")
    data = instance.to_json()
    data["parameters"] = parameters(instance.formula, instance.team).as_dict()
    text = json.dumps(data, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        lines = [f"wrote {args.out}"]
    else:
        lines = [text]
    return EXIT_YES, lines, {"algorithm": f"reduce-{args.problem}", "result": data,
                             "parameters": data["parameters"]}


def cmd_encode(args):
    encoded = encode_table(read_table_csv(_read(args.table)))
    lines = [f"{col}: {' '.join(encoded.column_variables[col])}" for col in encoded.columns]
    result: dict[str, Any] = {"team": encoded.team.to_json(),
                              "columns": {c: list(v) for c, v in encoded.column_variables.items()}}
    code = EXIT_YES
    if args.dep:
        premise_text, sep, conclusion_text = args.dep.partition(";")
        if not sep:
            raise PDLError(f"--dep needs 'A,B;C', got {args.dep!r}")
        premise = [c.strip() for c in premise_text.split(",") if c.strip()]
        conclusion = [c.strip() for c in conclusion_text.split(",") if c.strip()]
        atom = rewrite_dep_over_columns(encoded, premise, conclusion)
        check = check_dep(encoded.team, atom.premise, atom.conclusion)
        result.update(formula=render(atom), holds=check.holds)
        lines += [render(atom), "yes" if check.holds else "no"]
        if not check.holds:
            pair = [encoded.decode(r) for r in check.witness]
            result["witness"] = [list(p) for p in pair]
            lines += ["witness: " + ", ".join("(" + ", ".join(p) + ")" for p in pair)]
        code = EXIT_YES if check.holds else EXIT_NO
    else:
        lines.append(encoded.team.to_csv().rstrip("\n"))
    return code, lines, {"algorithm": "encode", "result": result, "parameters": {}}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON run report")
    common.add_argument("--mode", choices=[m.value for m in SplitMode], default="lax",
                        help="split semantics (default: lax)")
    common.add_argument("--bottom", choices=[BOTTOM_EMPTY, BOTTOM_NEVER], default=BOTTOM_EMPTY,
                        help="F holds on the empty team only (empty) or never (never)")
    common.add_argument("--seed", type=int, default=0, help="seed for random instances")
    common.add_argument("--max-team", type=int, default=None,
                        help=f"team size cap (default {MAX_BRUTE_TEAM} brute, "
                             f"{MAX_SUBTEAM_MEMBERS} teamsize)")
    common.add_argument("--max-vars", type=int, default=MAX_VARIABLES,
                        help=f"variable cap for assignment scans (default {MAX_VARIABLES})")
    common.add_argument("--self-check", action="store_true",
                        help="also run the other algorithm and fail on disagreement")

    parser = argparse.ArgumentParser(prog="pdl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mc", parents=[common], help="model checking: does TEAM satisfy FORMULA?")
    p.add_argument("team", help="team file (.json or .csv)")
    p.add_argument("formula", help="formula text, @file or file path")
    p.add_argument("--algo", choices=["brute", "teamsize"], default="teamsize")
    p.add_argument("--certificate", action="store_true", help="print the split used at each |")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("sat", parents=[common], help="satisfiability")
    p.add_argument("formula")
    p.add_argument("--algo", choices=["brute", "splits"], default="splits")
    p.add_argument("--witness", action="store_true", help="print a satisfying assignment")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("msat", parents=[common], help="satisfiability by a team of exactly m members")
    p.add_argument("formula")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--universe", help="comma-separated variables (default: those of the formula)")
    p.set_defaults(func=cmd_msat)

    p = sub.add_parser("params", parents=[common], help="structural parameters")
    p.add_argument("formula")
    p.add_argument("--team", help="also report team size and check the parameter relations")
    p.add_argument("--triangles", action="store_true", help="join sibling inputs in the circuit graph")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("tw", parents=[common], help="tree decomposition width")
    p.add_argument("formula")
    p.add_argument("--team")
    p.add_argument("--graph", choices=["circuit", "gaifman"], default="circuit")
    p.add_argument("--method", choices=["min-fill", "min-degree", "exact"], default="min-fill")
    p.add_argument("--triangles", action="store_true")
    p.add_argument("--max-vertices", type=int, default=graphs.MAX_EXACT_VERTICES,
                   help="vertex cap for --method exact")
    p.add_argument("--decomposition", action="store_true", help="print the bags and tree edges")
    p.set_defaults(func=cmd_tw)

    p = sub.add_parser("reduce", parents=[common], help="generate a hard model-checking instance")
    p.add_argument("problem", choices=["3sat", "3col"])
    p.add_argument("input", nargs="?", help="DIMACS CNF or edge list ('-' for stdin)")
    p.add_argument("--random", type=int, nargs=2, metavar=("N", "M"),
                   help="random input: 3sat N vars M clauses; 3col N vertices, edge prob M%%")
    p.add_argument("--out", help="write the instance JSON here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("encode", parents=[common], help="binary-encode a CSV table into a team")
    p.add_argument("table")
    p.add_argument("--dep", help="check a dependency between columns, e.g. 'Room,Time;Course'")
    p.set_defaults(func=cmd_encode)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    if args.command == "reduce" and not (args.input or args.random):
        print("error: reduce needs an input file or --random", file=sys.stderr)
        return EXIT_ERROR
    start = time.perf_counter()
    try:
        code, lines, info = args.func(args)
    except (PDLError, SelfCheckFailed, OSError, ValueError, KeyError, RecursionError) as exc:
        message = str(exc) or type(exc).__name__
        if args.json:
            print(RunReport(argv, args.command, {"error": message},
                            time.perf_counter() - start).to_json())
        print(f"error: {message}", file=sys.stderr)
        return EXIT_ERROR
    elapsed = time.perf_counter() - start
    if args.json:
        print(RunReport(argv, info["algorithm"], info["result"], elapsed,
                        info["parameters"]).to_json())
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
