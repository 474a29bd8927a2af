"""Command-line front end.

Exit codes: 0 solvable, 1 unsolvable, 2 input error, 3 unknown (random
engine exhausted its attempts).
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from .board import (Board, BoardFileError, Move, parse_board, parse_layout,
                    serialize_board)
from .harness import scan_layout
from .layouts import default_group_sizes, default_workers, get_layout, layout_names
from .rng import derive_seed
from .scan import prune_scan, scan_trace_lines
from .solver import (OracleSizeError, Verdict, oracle_solve, random_solve,
                     solve_group_directed, solve_match_directed, verify_solution)
from .theory import (DimacsError, LowLayoutError, detect_blocked_cycle,
                     one_level, parse_dimacs, reduce_3sat, solve_low_peek)

EXIT_SOLVABLE = 0
EXIT_UNSOLVABLE = 1
EXIT_ERROR = 2
EXIT_UNKNOWN = 3


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(str(exc)) from None


def _load_board(path: str) -> Board:
    try:
        return parse_board(_read(path))
    except BoardFileError as exc:
        raise CliError("%s: %s" % (path, exc)) from None


def _load_layout_arg(args) -> tuple:
    if args.layout:
        try:
            layout, sizes = get_layout(args.layout)
        except KeyError as exc:
            raise CliError(str(exc.args[0])) from None
        return layout, sizes, args.layout
    try:
        layout = parse_layout(_read(args.layout_file))
    except BoardFileError as exc:
        raise CliError("%s: %s" % (args.layout_file, exc)) from None
    return layout, default_group_sizes(layout), args.layout_file


def _print_solution(moves: Sequence[Move]) -> None:
    for m in moves:
        print("play %d %d %d %d %d %d" % (m.a.x, m.a.y, m.a.z,
                                          m.b.x, m.b.y, m.b.z))


def _cmd_solve(args) -> int:
    board = _load_board(args.board)
    if args.trace_scan:
        result = prune_scan(board, record_trace=True)
        for line in scan_trace_lines(result):
            print(line, file=sys.stderr)
    if args.method == "group":
        heuristic = args.heuristic.replace("-", "_")
        verdict = solve_group_directed(board, heuristic)
    elif args.method == "match":
        verdict = solve_match_directed(board)
    elif args.method == "oracle":
        try:
            verdict = oracle_solve(board)
        except OracleSizeError as exc:
            raise CliError(str(exc)) from None
    else:
        rr = random_solve(board, attempts=args.attempts, seed=args.seed)
        if rr.status == "solvable":
            _print_solution(rr.solution)
            return EXIT_SOLVABLE
        print("unknown after %d attempts" % rr.attempts, file=sys.stderr)
        return EXIT_UNKNOWN
    if verdict.solvable:
        _print_solution(verdict.solution)
        return EXIT_SOLVABLE
    print("unsolvable", file=sys.stderr)
    return EXIT_UNSOLVABLE


def _cmd_scan(args) -> int:
    layout, sizes, name = _load_layout_arg(args)
    report = scan_layout(layout, args.boards, args.seed,
                         workers=args.workers, layout_name=name,
                         group_sizes=sizes,
                         playout_attempts=args.playout_attempts)
    text = report.to_json()
    if args.json:
        try:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise CliError(str(exc)) from None
    print(text)
    return EXIT_SOLVABLE


def _cmd_gen(args) -> int:
    try:
        formula = parse_dimacs(_read(args.sat))
    except DimacsError as exc:
        raise CliError("%s: %s" % (args.sat, exc)) from None
    board, tags = one_level(formula) if args.one_level else reduce_3sat(formula)
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_board(board, tags))
    except OSError as exc:
        raise CliError(str(exc)) from None
    return EXIT_SOLVABLE


def _cmd_shuffle(args) -> int:
    from .board import shuffle
    layout, sizes, _ = _load_layout_arg(args)
    board = shuffle(layout, sizes, args.seed)
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_board(board))
    except OSError as exc:
        raise CliError(str(exc)) from None
    return EXIT_SOLVABLE


def _cmd_low(args) -> int:
    board = _load_board(args.board)
    try:
        cycle = detect_blocked_cycle(board)
        if cycle is not None:
            print("blocked-cycle: groups %s"
                  % " ".join(str(g) for g in cycle.groups), file=sys.stderr)
            return EXIT_UNSOLVABLE
        verdict = solve_low_peek(board)
    except LowLayoutError as exc:
        raise CliError(str(exc)) from None
    _print_solution(verdict.solution)
    return EXIT_SOLVABLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mahsolve",
        description="Mahjong Solitaire solvability engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a board file")
    p.add_argument("board")
    p.add_argument("--method", choices=("group", "match", "random", "oracle"),
                   default="group")
    p.add_argument("--heuristic", choices=("adaptive", "min-pairings"),
                   default="adaptive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--trace-scan", action="store_true",
                   help="dump the top-level pruning scan to stderr")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("scan", help="Monte Carlo unsolvable-fraction scan")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--layout", choices=layout_names())
    grp.add_argument("--layout-file")
    p.add_argument("--boards", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--playout-attempts", type=int, default=16)
    p.add_argument("--json")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("gen", help="generate a board from a 3-SAT formula")
    p.add_argument("--sat", required=True)
    p.add_argument("--one-level", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("shuffle", help="deal a seeded board of a layout")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--layout", choices=layout_names())
    grp.add_argument("--layout-file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_shuffle)

    p = sub.add_parser("low", help="blocked-cycle check and low-stack solver")
    p.add_argument("board")
    p.set_defaults(func=_cmd_low)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR
    except BoardFileError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
