"""Command-line surface tying the package's modules together.

Verbs: solve, verify, enumerate, reduce, gadget-check, seq, graph-check,
random-board.  Output is human-readable by default; ``--format json`` emits
the machine contract used by the service and tests.

Exit codes: 0 success, 1 domain errors (infeasible, lemma violated, routing
failed, ...), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .attack import Piece, Placement, verify
from .board import random_polyomino, read_board, write_board
from .chessgraph import build_chess_graph, check_min_max_inequality, find_claw
from .errors import PolydomError
from .reduction import (
    check_gadget,
    load_templates,
    parse_sat,
    reduce_queens,
    reduce_rooks,
)
from .sequences import Family, SequenceSpec, format_table, run_sequence
from .solver import (
    Budget,
    Objective,
    Problem,
    Status,
    compile,
    enumerate_optima,
    solve,
)


def _add_board_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--board", required=True, help="board file (JSON or ASCII)")
    sub.add_argument("--piece", required=True, choices=[p.value for p in Piece])


def _add_problem_flags(sub: argparse.ArgumentParser) -> None:
    _add_board_flags(sub)
    sub.add_argument("--objective", required=True, choices=["min", "max"])
    sub.add_argument("--independent", action="store_true")
    sub.add_argument("--dominating", action="store_true")
    sub.add_argument("--backend", default="auto", choices=["auto", "dfs", "milp"])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polydom",
        description="Exact rook/queen domination on polyominoes and polycubes.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default="human", choices=["human", "json"])
    subs = parser.add_subparsers(dest="verb", required=True)

    solve_p = subs.add_parser("solve", help="solve one board to optimality", parents=[common])
    _add_problem_flags(solve_p)

    enum_p = subs.add_parser("enumerate", help="enumerate all optimal placements", parents=[common])
    _add_problem_flags(enum_p)

    verify_p = subs.add_parser("verify", help="check a placement on a board", parents=[common])
    verify_p.add_argument("--board", required=True)
    verify_p.add_argument("--placement", required=True, help="JSON {piece, cells}")

    reduce_p = subs.add_parser("reduce", help="compile a P3SAT3 instance to a board", parents=[common])
    reduce_p.add_argument("--piece", required=True, choices=[p.value for p in Piece])
    reduce_p.add_argument("--sat", required=True, help="DIMACS CNF file")
    reduce_p.add_argument("--out", help="directory for board.json + layout.json")

    gadget_p = subs.add_parser("gadget-check", help="verify gadget template lemmas", parents=[common])
    gadget_p.add_argument("--name", help="check one template (default: all)")

    seq_p = subs.add_parser("seq", help="compute a value sequence over board sizes", parents=[common])
    seq_p.add_argument("--family", required=True, choices=[f.value for f in Family])
    seq_p.add_argument("--dim", type=int, default=2)
    seq_p.add_argument("--sizes", required=True, help="comma-separated side lengths")
    seq_p.add_argument("--cache", help="cache directory")
    seq_p.add_argument("--backend", default="auto", choices=["auto", "dfs", "milp"])

    graph_p = subs.add_parser("graph-check", help="chess-graph claw and min/max checks", parents=[common])
    _add_board_flags(graph_p)

    rand_p = subs.add_parser("random-board", help="generate a random polyomino", parents=[common])
    rand_p.add_argument("--tiles", type=int, default=50)
    rand_p.add_argument("--seed", type=int, required=True)
    rand_p.add_argument("--percolation", type=float, default=0.4)
    rand_p.add_argument("--out", help="write the board here instead of stdout")

    return parser


def _problem_from_args(args) -> Problem:
    board = read_board(args.board)
    objective = Objective.MINIMIZE if args.objective == "min" else Objective.MAXIMIZE
    independence = args.independent
    domination = args.dominating
    if not (independence or domination):
        # Sensible defaults per objective: max packs independent pieces,
        # min covers the board.
        independence = objective is Objective.MAXIMIZE
        domination = objective is Objective.MINIMIZE
    return Problem(board, Piece(args.piece), objective, independence, domination)


def _emit(args, obj: dict, human: str) -> None:
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print(human)


def _solution_exit(sol) -> int:
    return 0 if sol.status is Status.OPTIMAL else 1


def _cmd_solve(args) -> int:
    sol = solve(compile(_problem_from_args(args)), Budget.default(), backend=args.backend)
    witness = sorted(list(c) for c in sol.witness.cells) if sol.witness else None
    _emit(
        args,
        sol.to_json_obj(),
        f"status: {sol.status.value}\nvalue: {sol.value}\nwitness: {witness}",
    )
    return _solution_exit(sol)


def _cmd_enumerate(args) -> int:
    sol = enumerate_optima(
        compile(_problem_from_args(args)), Budget.default(), backend=args.backend
    )
    optima = [sorted(list(c) for c in p.cells) for p in sol.all_optima or []]
    obj = sol.to_json_obj()
    obj["optima"] = optima
    _emit(args, obj, f"status: {sol.status.value}\nvalue: {sol.value}\noptima: {len(optima)}")
    return _solution_exit(sol)


def _cmd_verify(args) -> int:
    board = read_board(args.board)
    raw = json.loads(Path(args.placement).read_text(encoding="utf-8"))
    piece = Piece(raw["piece"])
    placement = Placement(piece=piece, cells=frozenset(tuple(c) for c in raw["cells"]))
    report = verify(board, piece, placement)
    obj = {
        "dominates": report.dominates,
        "independent": report.independent,
        "count": len(placement.cells),
        "unguarded": sorted(list(c) for c in report.unguarded),
        "conflicts": [[list(a), list(b)] for a, b in report.conflicts],
    }
    _emit(
        args,
        obj,
        f"dominates: {report.dominates}\nindependent: {report.independent}\n"
        f"count: {len(placement.cells)}\nunguarded: {len(report.unguarded)}\n"
        f"conflicts: {len(report.conflicts)}",
    )
    return 0


def _cmd_reduce(args) -> int:
    instance = parse_sat(Path(args.sat).read_text(encoding="utf-8"))
    reducer = reduce_rooks if Piece(args.piece) is Piece.ROOK else reduce_queens
    board, target, layout = reducer(instance)
    layout_obj = {
        "piece": layout.piece.value,
        "style": layout.style,
        "target": target,
        "m": layout.m,
        "counts": dict(layout.counts),
        "lengths": list(layout.lengths),
        "variables": [
            {
                "var": v.var,
                "origin": list(v.origin),
                "true_cells": [list(c) for c in v.true_cells],
                "false_cells": [list(c) for c in v.false_cells],
            }
            for v in layout.variables
        ],
        "clauses": [
            {
                "literals": list(c.literals),
                "row": c.row,
                "level": c.level,
                "t_cubes": [[lit, list(cell)] for lit, cell in c.t_cubes],
            }
            for c in layout.clauses
        ],
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_board(board, out / "board.json")
        (out / "layout.json").write_text(json.dumps(layout_obj, indent=1), encoding="utf-8")
    _emit(
        args,
        {"target": target, "cells": len(board), "style": layout.style},
        f"cells: {len(board)}\ntarget: {target}\nstyle: {layout.style}",
    )
    return 0


def _cmd_gadget_check(args) -> int:
    templates = load_templates()
    names = [args.name] if args.name else sorted(templates)
    reports = []
    for name in names:
        if name not in templates:
            print(f"unknown template {name!r}; have: {', '.join(sorted(templates))}",
                  file=sys.stderr)
            return 2
        reports.append(check_gadget(templates[name]))
    obj = {
        r.name: {"optimum": r.optimum, "optima": r.optima_count, "ok": r.ok}
        for r in reports
    }
    human = "\n".join(
        f"{r.name}: optimum {r.optimum}, {r.optima_count} optima, ok" for r in reports
    )
    _emit(args, obj, human)
    return 0


def _cmd_seq(args) -> int:
    sizes = tuple(int(s) for s in args.sizes.split(","))
    spec = SequenceSpec(Family(args.family), d=args.dim, n_range=sizes, budget=Budget.default())
    points = run_sequence(spec, cache_dir=args.cache, backend=args.backend)
    obj = {"family": args.family, "points": [p.to_json_obj(Family(args.family)) for p in points]}
    _emit(args, obj, format_table(Family(args.family), points).rstrip())
    return 0


def _cmd_graph_check(args) -> int:
    board = read_board(args.board)
    piece = Piece(args.piece)
    graph = build_chess_graph(board, piece)
    report = check_min_max_inequality(board, piece, Budget.default())
    claw = find_claw(graph, report.claw_m + 1)
    obj = {
        "directions": report.directions,
        "claw_m": report.claw_m,
        "min": report.min_independent_dominating,
        "max": report.max_independent,
        "holds": report.holds,
        "oversized_claw": None if claw is None else {
            "centre": list(claw[0]),
            "leaves": [list(c) for c in claw[1]],
        },
    }
    _emit(
        args,
        obj,
        f"directions: {report.directions}\nmin: {report.min_independent_dominating}\n"
        f"max: {report.max_independent}\nholds: {report.holds}\n"
        f"oversized claw: {'none' if claw is None else claw}",
    )
    return 0 if report.holds and claw is None else 1


def _cmd_random_board(args) -> int:
    board = random_polyomino(args.tiles, seed=args.seed, percolation=args.percolation)
    if args.out:
        write_board(board, args.out)
        _emit(args, {"cells": len(board), "out": args.out}, f"wrote {len(board)} cells to {args.out}")
    else:
        obj = board.to_json_obj()
        _emit(args, obj, json.dumps(obj))
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "enumerate": _cmd_enumerate,
    "verify": _cmd_verify,
    "reduce": _cmd_reduce,
    "gadget-check": _cmd_gadget_check,
    "seq": _cmd_seq,
    "graph-check": _cmd_graph_check,
    "random-board": _cmd_random_board,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.verb](args)
    except PolydomError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
