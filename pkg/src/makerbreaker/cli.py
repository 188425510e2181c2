"""makerbreaker command line.

Exit codes: ``play`` returns 0 when Maker wins, 1 when Breaker wins and 2 on a
timeout. Every other subcommand returns 0 on success and 1 on failure. Usage
errors (bad flags, ids or experiment files) return 64 so they never look like
a game result.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .game import Budget, DominatingSet, KPath, Outcome, Player, Status, new_game, play_game, replay
from .graph import Graph, er_graph, flower_snark, grid_graph
from .micro import catalog
from .oracle import DEFAULT_CAP, solve
from .players import PlayerSpec, make_policy

EXIT_USAGE = 64
EXIT_CODES = {Outcome.MAKER: 0, Outcome.BREAKER: 1, Outcome.TIMEOUT: 2}


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ parsing


def _grid(text: str) -> tuple[int, int]:
    r, sep, c = text.lower().partition("x")
    try:
        return int(r), int(c)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RxC, got {text!r}") from None


def _er(text: str) -> tuple[int, float]:
    n, sep, p = text.partition(",")
    try:
        return int(n), float(p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,P, got {text!r}") from None


def _player(text: str) -> PlayerSpec:
    try:
        return PlayerSpec.parse(text)
    except ValueError as exc:
        valid = "\n  ".join(str(m) for m in catalog())
        raise UsageError(f"{exc}\nvalid micro-strategy ids:\n  {valid}") from None


def _add_board(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--grid", type=_grid, metavar="RxC", help="rows x cols grid")
    g.add_argument("--er", type=_er, metavar="N,P", help="Erdos-Renyi G(N,P) drawn with --seed")
    g.add_argument("--flower-snark", type=int, metavar="T", help="flower snark J_T (odd T >= 5)")
    g.add_argument("--board", type=Path, metavar="FILE", help="edge-list file written by 'board'")


def _add_condition(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--path", type=int, metavar="K", help="Maker wants an induced path on K vertices")
    g.add_argument("--dom", action="store_true", help="Maker wants a dominating set")


def board_from_args(args) -> Graph:
    try:
        if args.grid is not None:
            return grid_graph(*args.grid)
        if args.er is not None:
            return er_graph(args.er[0], args.er[1], args.seed)
        if args.flower_snark is not None:
            return flower_snark(args.flower_snark)
        return Graph.from_edge_list(args.board.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read board file: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def condition_from_args(args, board: Graph):
    try:
        cond = DominatingSet() if args.dom else KPath(args.path)
        cond.validate(board)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cond


# ------------------------------------------------------------- subcommands


def cmd_board(args) -> int:
    text = board_from_args(args).to_edge_list()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_play(args) -> int:
    board = board_from_args(args)
    cond = condition_from_args(args, board)
    maker = _player(args.maker).with_defaults(args.iterations)
    breaker = _player(args.breaker).with_defaults(args.iterations)
    trace = open(args.trace, "w") if args.trace else None
    try:
        rec = play_game(
            board, cond,
            make_policy(maker, trace=trace), make_policy(breaker, trace=trace),
            random.Random(args.seed),
            Budget(args.move_timeout, args.game_timeout),
            Player.MAKER if args.first == "maker" else Player.BREAKER,
        )
    finally:
        if trace:
            trace.close()
    sys.stdout.write(rec.transcript())
    return EXIT_CODES[rec.winner]


def cmd_solve(args) -> int:
    board = board_from_args(args)
    cond = condition_from_args(args, board)
    first = Player.MAKER if args.first == "maker" else Player.BREAKER
    try:
        moves = [int(v) for v in args.moves.split(",") if v.strip()] if args.moves else []
        state = replay(board, cond, moves, first) if moves else new_game(board, cond, first)
        res = solve(state, cap=args.cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"value {'Maker' if res.value is Status.MAKER_WIN else 'Breaker'}")
    if res.optimal_moves:
        print("optimal " + ",".join(str(v) for v in sorted(res.optimal_moves)))
    print(f"nodes {res.nodes_visited}")
    return 0


def cmd_sweep(args) -> int:
    from .harness import SpecError, load_spec, run_sweep, to_csv, write_relative

    try:
        spec = load_spec(args.experiment)
    except SpecError as exc:
        raise UsageError(str(exc)) from None
    changes = {}
    if args.games is not None:
        changes["games_per_cell"] = args.games
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.move_timeout is not None:
        changes["move_budget"] = args.move_timeout
    if args.game_timeout is not None:
        changes["game_budget"] = args.game_timeout
    spec = dataclasses.replace(spec, **changes)

    def progress(done: int, total: int) -> None:
        if args.verbose:
            print(f"\r{spec.name}: {done}/{total} tasks", end="", file=sys.stderr, flush=True)

    result = run_sweep(spec, workers=args.workers, progress=progress)
    if args.verbose:
        print(file=sys.stderr)
    for p, reason in sorted(result.invalid.items()):
        print(f"skipped {spec.sweep.parameter}={spec.sweep.values[p]}: {reason}", file=sys.stderr)
    if len(result.invalid) == len(spec.sweep.values):
        print("every swept value was invalid; nothing written", file=sys.stderr)
        return 1
    out = Path(args.out)
    written = [to_csv(result, out / f"{spec.name}.csv", spec)]
    if args.relative:
        written.append(write_relative(result, out / f"{spec.name}_rel.csv"))
    timeouts = int(result.timeouts.sum())
    if timeouts:
        print(f"{timeouts} games timed out", file=sys.stderr)
    for path in written:
        print(path)
    return 0


def cmd_rank(args) -> int:
    from .harness import rank_strategies, rank_transfer, read_csv

    def load(path: Path):
        try:
            _, table = read_csv(path)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
        meta = path.with_name(path.stem + ".meta.json")
        names = json.loads(meta.read_text())["strategies"] if meta.exists() else None
        return table, names

    table, names = load(args.table)
    means = np.nanmean(table, axis=0)
    for place, col in enumerate(rank_strategies(table), start=1):
        label = names[col] if names and col < len(names) else f"column {col + 1}"
        print(f"{place}\t{means[col]:.4f}\t{label}")
    if args.against:
        other, _ = load(args.against)
        print(f"spearman {rank_transfer(table, other):.4f}")
    return 0


def cmd_catalog(args) -> int:
    for mid in catalog():
        print(f"{mid}\t{mid.describe()}")
    return 0


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = Parser(prog="makerbreaker", description="Maker-Breaker graph games and micro-strategy MCTS sweeps")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("board", help="write a board as an edge list")
    _add_board(p)
    p.add_argument("--seed", type=int, default=0, help="graph seed for --er")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_board)

    p = sub.add_parser("play", help="play one game and print its transcript")
    _add_board(p)
    _add_condition(p)
    p.add_argument("--maker", default="mcts", help="mcts[:micro=ID,iters=N,c=X] | micro:ID | random")
    p.add_argument("--breaker", default="mcts", help="same syntax as --maker")
    p.add_argument("--iterations", type=int, default=None, help="MCTS iterations when a player omits iters=")
    p.add_argument("--first", choices=("maker", "breaker"), default="maker")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--move-timeout", type=float, default=5.0, metavar="SEC")
    p.add_argument("--game-timeout", type=float, default=120.0, metavar="SEC")
    p.add_argument("--trace", help="write per-iteration MCTS paths to this file")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("solve", help="exact game value and optimal moves (small boards)")
    _add_board(p)
    _add_condition(p)
    p.add_argument("--moves", help="comma-separated moves already played")
    p.add_argument("--first", choices=("maker", "breaker"), default="maker")
    p.add_argument("--seed", type=int, default=0, help="graph seed for --er")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest board the solver accepts")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run an experiment and write its CSV tables")
    p.add_argument("experiment", nargs="?", help="experiment YAML file or preset name")
    p.add_argument("--preset", help="preset name (alternative to the positional argument)")
    p.add_argument("--games", type=int, help="override games per cell")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--move-timeout", type=float, default=None, metavar="SEC")
    p.add_argument("--game-timeout", type=float, default=None, metavar="SEC")
    p.add_argument("--relative", action="store_true", help="also write the relative-to-row-max table")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rank", help="rank strategies in a sweep table")
    p.add_argument("table", type=Path)
    p.add_argument("--against", type=Path, help="second table; prints the Spearman rank correlation")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("catalog", help="list micro-strategy ids")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "sweep":
        if bool(args.experiment) == bool(args.preset):
            ap.error("sweep needs exactly one of EXPERIMENT or --preset")
        args.experiment = args.experiment or args.preset
        for flag in ("games", "workers"):
            value = getattr(args, flag)
            if value is not None and value < 1:
                ap.error(f"--{flag} must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"makerbreaker: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
