"""Exact minimax solver for small Maker-Breaker games (ground truth for tests)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .game import GameState, Player, Status
from .graph import bit_indices

DEFAULT_CAP = 16


@dataclass(frozen=True)
class SolveResult:
    value: Status
    optimal_moves: frozenset[int]
    nodes_visited: int


class Solver:
    """Memoised minimax keyed on ``(maker mask, breaker mask, mover)``.

    The memo persists across calls, so one solver can answer many positions
    of the same board and condition.
    """

    def __init__(self, cap: int = DEFAULT_CAP, memo: bool = True):
        self.cap = cap
        self.memo: Optional[dict] = {} if memo else None
        self.nodes = 0

    def _check(self, s: GameState) -> None:
        if s.board.n > self.cap:
            raise ValueError(f"board has {s.board.n} vertices; the exact solver is capped at {self.cap}")

    def value(self, s: GameState) -> Status:
        self._check(s)
        if s.cond.satisfied(s.board, s.maker):
            return Status.MAKER_WIN
        return self._value(s)

    def _value(self, s: GameState) -> Status:
        self.nodes += 1
        if s.status is not Status.ONGOING:
            return s.status
        key = (s.maker, s.breaker, s.to_move)
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        target = Status.MAKER_WIN if s.to_move == Player.MAKER else Status.BREAKER_WIN
        result = Status.BREAKER_WIN if target is Status.MAKER_WIN else Status.MAKER_WIN
        for v in bit_indices(s.unmarked):
            if self._value(s.copy().play(v)) is target:
                result = target
                break
        if self.memo is not None:
            self.memo[key] = result
        return result

    def solve(self, s: GameState) -> SolveResult:
        self._check(s)
        start = self.nodes
        if s.status is Status.ONGOING and s.cond.satisfied(s.board, s.maker):
            # only reachable from hand-built positions; Maker has already won
            return SolveResult(Status.MAKER_WIN, frozenset(s.legal_moves()), 1)
        value = self._value(s)
        moves = frozenset(v for v in s.legal_moves() if self._value(s.copy().play(v)) is value)
        return SolveResult(value, moves, self.nodes - start)


def solve(s: GameState, memo: bool = True, cap: int = DEFAULT_CAP) -> SolveResult:
    return Solver(cap, memo).solve(s)


def best_move_set(s: GameState, solver: Optional[Solver] = None) -> frozenset[int]:
    if s.is_over:
        raise ValueError("terminal position has no moves")
    return (solver or Solver()).solve(s).optimal_moves
