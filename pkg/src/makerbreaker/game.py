"""Maker-Breaker rules on a graph board.

Marks are kept as two bitmasks, one per player. Win detection is incremental:
after each Maker move only the structures through the new vertex are checked.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Callable, Optional, Protocol

from .graph import Graph, bit_indices, has_induced_path, has_induced_path_through


class Player(IntEnum):
    MAKER = 0
    BREAKER = 1

    @property
    def other(self) -> "Player":
        return _OTHER[self]

    def __str__(self) -> str:
        return self.name.capitalize()


MAKER = Player.MAKER
BREAKER = Player.BREAKER
_OTHER = (BREAKER, MAKER)


class Status(Enum):
    ONGOING = "ongoing"
    MAKER_WIN = "maker"
    BREAKER_WIN = "breaker"


class Outcome(Enum):
    MAKER = "Maker"
    BREAKER = "Breaker"
    TIMEOUT = "Timeout"

    def __str__(self) -> str:
        return self.value


class Mark(IntEnum):
    UNMARKED = 0
    MAKER = 1
    BREAKER = 2


class IllegalMoveError(ValueError):
    pass


class GameOverError(IllegalMoveError):
    pass


# ---------------------------------------------------------------- conditions


@dataclass(frozen=True)
class DominatingSet:
    """Maker wins by marking a dominating set of the board."""

    def validate(self, board: Graph) -> None:
        pass

    def satisfied(self, board: Graph, mask: int) -> bool:
        covered = 0
        closed = board.closed_masks
        for v in bit_indices(mask):
            covered |= closed[v]
        return covered == board.full_mask

    def initial_aux(self, board: Graph) -> int:
        return 0

    def after_move(self, board: Graph, mask: int, aux: int, v: int) -> tuple[bool, int]:
        # aux is the set of vertices already dominated by Maker
        aux |= board.closed_masks[v]
        return aux == board.full_mask, aux

    def label(self) -> str:
        return "dom"

    def __str__(self) -> str:
        return "DominatingSet"


@dataclass(frozen=True)
class KPath:
    """Maker wins by marking the vertex set of an induced path on ``k`` vertices."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"path length must be at least 2, got {self.k}")

    def validate(self, board: Graph) -> None:
        if self.k > board.n:
            raise ValueError(f"KPath({self.k}) exceeds the board's {board.n} vertices")

    def satisfied(self, board: Graph, mask: int) -> bool:
        return has_induced_path(board, mask, self.k)

    def initial_aux(self, board: Graph) -> int:
        return 0

    def after_move(self, board: Graph, mask: int, aux: int, v: int) -> tuple[bool, int]:
        return has_induced_path_through(board, mask, self.k, v), aux

    def label(self) -> str:
        return f"path:{self.k}"

    def __str__(self) -> str:
        return f"KPath({self.k})"


WinCondition = DominatingSet | KPath


def parse_condition(text: str) -> WinCondition:
    """``"dom"`` or ``"path:K"``."""
    text = text.strip().lower()
    if text in ("dom", "dominating"):
        return DominatingSet()
    if text.startswith("path:"):
        return KPath(int(text.split(":", 1)[1]))
    raise ValueError(f"unknown win condition {text!r}; expected 'dom' or 'path:K'")


# --------------------------------------------------------------------- state


class GameState:
    """Position of a Maker-Breaker game.

    ``apply_move`` returns a new state; :meth:`play` mutates in place and is
    what search code uses on its private copies.
    """

    __slots__ = ("board", "cond", "first", "maker", "breaker", "to_move", "history", "status", "aux")

    def __init__(self, board: Graph, cond: WinCondition, first: Player = MAKER):
        self.board = board
        self.cond = cond
        self.first = Player(first)
        self.maker = 0
        self.breaker = 0
        self.to_move = self.first
        self.history: list[int] = []
        self.status = Status.ONGOING
        self.aux = cond.initial_aux(board)

    def copy(self) -> "GameState":
        s = GameState.__new__(GameState)
        s.board = self.board
        s.cond = self.cond
        s.first = self.first
        s.maker = self.maker
        s.breaker = self.breaker
        s.to_move = self.to_move
        s.history = self.history.copy()
        s.status = self.status
        s.aux = self.aux
        return s

    @property
    def unmarked(self) -> int:
        return self.board.full_mask & ~(self.maker | self.breaker)

    @property
    def is_over(self) -> bool:
        return self.status is not Status.ONGOING

    @property
    def marks(self) -> list[Mark]:
        out = [Mark.UNMARKED] * self.board.n
        for v in bit_indices(self.maker):
            out[v] = Mark.MAKER
        for v in bit_indices(self.breaker):
            out[v] = Mark.BREAKER
        return out

    def mask_of(self, player: Player) -> int:
        return self.maker if player == MAKER else self.breaker

    def last_move_of(self, player: Player) -> Optional[int]:
        # moves alternate from self.first, so parity of the ply identifies the mover
        start = 0 if player == self.first else 1
        count = len(self.history)
        if count <= start:
            return None
        last = count - 1 if (count - 1 - start) % 2 == 0 else count - 2
        return self.history[last]

    def legal_moves(self) -> list[int]:
        if self.status is not Status.ONGOING:
            return []
        return bit_indices(self.unmarked)

    def play(self, v: int) -> "GameState":
        if self.status is not Status.ONGOING:
            raise GameOverError("game is already over")
        if not 0 <= v < self.board.n:
            raise IllegalMoveError(f"vertex {v} is not on the board")
        bit = 1 << v
        if (self.maker | self.breaker) & bit:
            raise IllegalMoveError(f"vertex {v} is already marked")
        self.history.append(v)
        if self.to_move == MAKER:
            self.maker |= bit
            won, self.aux = self.cond.after_move(self.board, self.maker, self.aux, v)
            if won:
                self.status = Status.MAKER_WIN
        else:
            self.breaker |= bit
        if self.status is Status.ONGOING and len(self.history) == self.board.n:
            self.status = Status.BREAKER_WIN
        self.to_move = self.to_move.other
        return self

    def __repr__(self) -> str:
        return (f"GameState({self.cond}, n={self.board.n}, to_move={self.to_move}, "
                f"history={self.history}, status={self.status.value})")


def new_game(board: Graph, cond: WinCondition, first: Player = MAKER) -> GameState:
    if board.n == 0:
        raise ValueError("board must have at least one vertex")
    cond.validate(board)
    return GameState(board, cond, first)


def legal_moves(s: GameState) -> list[int]:
    return s.legal_moves()


def apply_move(s: GameState, v: int) -> GameState:
    return s.copy().play(v)


def replay(board: Graph, cond: WinCondition, moves: list[int], first: Player = MAKER) -> GameState:
    s = new_game(board, cond, first)
    for v in moves:
        s.play(v)
    return s


# -------------------------------------------------------------------- playing


class Policy(Protocol):
    def __call__(self, state: GameState, rng) -> int: ...


@dataclass(frozen=True)
class Budget:
    """Wall-clock limits in seconds; ``None`` means unlimited."""

    move: Optional[float] = None
    game: Optional[float] = None


UNLIMITED = Budget()


@dataclass
class GameRecord:
    winner: Outcome
    moves: list[int]
    first: Player = MAKER
    elapsed: float = 0.0

    @property
    def move_count(self) -> int:
        return len(self.moves)

    def transcript(self) -> str:
        lines = []
        player = self.first
        for ply, v in enumerate(self.moves, start=1):
            lines.append(f"{ply} {player} {v}")
            player = player.other
        lines.append(f"result {self.winner}")
        return "\n".join(lines) + "\n"


def play_game(
    board: Graph,
    cond: WinCondition,
    maker_policy: Callable[[GameState, object], int],
    breaker_policy: Callable[[GameState, object], int],
    rng,
    budget: Budget = UNLIMITED,
    first: Player = MAKER,
) -> GameRecord:
    state = new_game(board, cond, first)
    policies = {MAKER: maker_policy, BREAKER: breaker_policy}
    start = time.perf_counter()
    while not state.is_over:
        if budget.game is not None and time.perf_counter() - start >= budget.game:
            return GameRecord(Outcome.TIMEOUT, state.history, first, time.perf_counter() - start)
        policy = policies[state.to_move]
        t0 = time.perf_counter()
        v = policy(state, rng)
        now = time.perf_counter()
        if budget.move is not None and now - t0 > budget.move:
            return GameRecord(Outcome.TIMEOUT, state.history, first, now - start)
        try:
            state.play(v)
        except IllegalMoveError as exc:
            name = getattr(policy, "name", repr(policy))
            raise IllegalMoveError(f"{state.to_move} policy {name} made an illegal move: {exc}") from exc
    winner = Outcome.MAKER if state.status is Status.MAKER_WIN else Outcome.BREAKER
    return GameRecord(winner, state.history, first, time.perf_counter() - start)
