"""Monte Carlo Tree Search with UCT, optionally steered by a micro-strategy.

Traditional MCTS breaks selection ties, picks expansion moves and plays its
own rollout moves uniformly at random. The modified engine replaces those
three random choices with the configured micro-strategy whenever the
searching player is the one choosing. The opponent's choices stay uniform
(or follow ``rollout_opponent`` inside rollouts).

Two engines implement the same search: :class:`Search` here (readable, with
an inspectable tree and trace output) and the compiled port in
``_kernel``. Each search draws one 64-bit seed from the caller's rng and
runs on a SplitMix64 stream, so both engines pick the same move.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, TextIO

from .game import GameState, Player, Status
from .graph import bit_indices
from .rng import SplitMix64
from .micro import UNIFORM, MicroStrategyId, argmax_tiebreak, sample_move, sample_uniform, weights

DEFAULT_C = math.sqrt(2.0)
DEFAULT_ITERATIONS = 200
UCT_TIE_TOL = 1e-12


def uct(w: float, n: int, N: int, c: float) -> float:
    """Upper confidence bound ``w/n + c*sqrt(ln N / n)``."""
    if n < 1:
        raise ValueError("UCT is undefined for an unvisited node (n = 0)")
    if N < n:
        raise ValueError(f"total visits N={N} smaller than node visits n={n}")
    if c < 0:
        raise ValueError("exploration constant must be non-negative")
    return w / n + c * math.sqrt(math.log(N) / n)


@dataclass(frozen=True)
class MctsConfig:
    iterations: int = DEFAULT_ITERATIONS
    c: float = DEFAULT_C
    micro: Optional[MicroStrategyId] = None
    rollout_opponent: MicroStrategyId = UNIFORM
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.c < 0:
            raise ValueError("exploration constant must be non-negative")

    @property
    def searcher_micro(self) -> MicroStrategyId:
        return self.micro if self.micro is not None else UNIFORM


class Node:
    __slots__ = ("move", "mover", "parent", "children", "unexpanded", "w", "n")

    def __init__(self, move: Optional[int], mover: Player, parent: Optional["Node"], unexpanded: list[int]):
        self.move = move
        self.mover = mover  # player whose move led into this node
        self.parent = parent
        self.children: list[Node] = []
        self.unexpanded = unexpanded
        self.w = 0
        self.n = 0

    def __repr__(self) -> str:
        return f"Node(move={self.move}, w={self.w}, n={self.n}, children={len(self.children)})"


@dataclass
class MoveChoice:
    chosen: int
    visits: dict[int, int]
    win_rates: dict[int, float]
    total: int
    root: Optional[Node] = field(default=None, repr=False)


class Search:
    """One search tree rooted at a copy of ``state``."""

    def __init__(self, state: GameState, cfg: MctsConfig, rng, trace: Optional[TextIO] = None):
        if state.is_over:
            raise ValueError("cannot search from a terminal position")
        self.state = state.copy()
        self.cfg = cfg
        self.rng = rng
        self.trace = trace
        self.searcher = state.to_move
        self.micro = cfg.searcher_micro
        self.root = Node(None, state.to_move.other, None, state.legal_moves())
        self.completed = 0

    def _micro_for(self, player: Player) -> MicroStrategyId:
        return self.micro if player == self.searcher else UNIFORM

    def _pick_tied(self, tied: list[Node], state: GameState) -> Node:
        mid = self._micro_for(state.to_move)
        if mid.is_uniform:
            return tied[int(self.rng.random() * len(tied))]
        moves = [ch.move for ch in tied]
        w = weights(mid, state, state.to_move, self.rng, moves)
        return tied[argmax_tiebreak(w, range(len(tied)), self.rng)]

    def _select(self, node: Node, state: GameState) -> Node:
        log_total = math.log(node.n)
        c = self.cfg.c
        best = -math.inf
        tied: list[Node] = []
        for ch in node.children:
            score = ch.w / ch.n + c * math.sqrt(log_total / ch.n)
            if score > best + UCT_TIE_TOL:
                best = score
                tied = [ch]
            elif score >= best - UCT_TIE_TOL:
                tied.append(ch)
        return tied[0] if len(tied) == 1 else self._pick_tied(tied, state)

    def _expand_move(self, node: Node, state: GameState) -> int:
        mid = self._micro_for(state.to_move)
        if mid.is_uniform:
            return sample_uniform(node.unexpanded, self.rng)
        return sample_move(weights(mid, state, state.to_move, self.rng, node.unexpanded), node.unexpanded, self.rng)

    def _rollout(self, state: GameState) -> Player:
        rng = self.rng
        searcher = self.searcher
        mine, theirs = self.micro, self.cfg.rollout_opponent
        while state.status is Status.ONGOING:
            legal = bit_indices(state.unmarked)
            mid = mine if state.to_move == searcher else theirs
            if mid.is_uniform:
                v = legal[int(rng.random() * len(legal))]
            else:
                v = sample_move(weights(mid, state, state.to_move, rng, legal), legal, rng)
            state.play(v)
        return Player.MAKER if state.status is Status.MAKER_WIN else Player.BREAKER

    def iterate(self) -> Player:
        state = self.state.copy()
        node = self.root
        path = [node]
        while state.status is Status.ONGOING and not node.unexpanded and node.children:
            node = self._select(node, state)
            state.play(node.move)
            path.append(node)
        if state.status is Status.ONGOING and node.unexpanded:
            move = self._expand_move(node, state)
            node.unexpanded.remove(move)
            mover = state.to_move
            state.play(move)
            child = Node(move, mover, node, state.legal_moves())
            node.children.append(child)
            node = child
            path.append(child)
        winner = self._rollout(state)
        for nd in path:
            nd.n += 1
            if nd.mover == winner:
                nd.w += 1
        self.completed += 1
        if self.trace is not None:
            moves = ",".join(str(nd.move) for nd in path[1:])
            self.trace.write(f"iter {self.completed} path {moves or '-'} winner {winner}\n")
        return winner

    def run(self, iterations: Optional[int] = None) -> MoveChoice:
        for _ in range(self.cfg.iterations if iterations is None else iterations):
            self.iterate()
        return self.choice()

    def immediate_win(self) -> Optional[int]:
        """Lowest move that ends the game in the mover's favour right away."""
        goal = Status.MAKER_WIN if self.searcher == Player.MAKER else Status.BREAKER_WIN
        for v in self.state.legal_moves():
            if self.state.copy().play(v).status is goal:
                return v
        return None

    def choice(self) -> MoveChoice:
        children = self.root.children
        if not children:
            raise ValueError("no iterations have been run")
        return MoveChoice(
            chosen=self._final_move(),
            visits={ch.move: ch.n for ch in children},
            win_rates={ch.move: ch.w / ch.n for ch in children},
            total=self.root.n,
            root=self.root,
        )

    def _final_move(self) -> int:
        # a move that wins on the spot is always optimal; otherwise the most-visited child
        winning = self.immediate_win()
        if winning is not None:
            return winning
        children = self.root.children
        top_n = max(ch.n for ch in children)
        tied = [ch for ch in children if ch.n == top_n]
        if len(tied) > 1:
            top_rate = max(ch.w / ch.n for ch in tied)
            tied = [ch for ch in tied if ch.w / ch.n >= top_rate - UCT_TIE_TOL]
        best = tied[0] if len(tied) == 1 else self._pick_tied(tied, self.state)
        return best.move


def draw_seed(rng) -> int:
    """One 64-bit search seed from either a ``random.Random`` or a SplitMix64."""
    if isinstance(rng, SplitMix64):
        return rng.next_u64()
    return rng.getrandbits(64)


ENGINES = ("fast", "reference")


def search(s: GameState, cfg: MctsConfig, rng=None, trace: Optional[TextIO] = None,
           engine: str = "fast") -> MoveChoice:
    """Run ``cfg.iterations`` MCTS iterations from ``s`` and pick a move.

    ``rng`` defaults to ``random.Random(cfg.seed)``. A trace forces the
    reference engine, which is the only one that can report per-iteration paths.
    """
    if rng is None:
        rng = random.Random(cfg.seed)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    seed = draw_seed(rng)
    if engine == "reference" or trace is not None:
        return Search(s, cfg, SplitMix64(seed), trace).run()
    if s.is_over:
        raise ValueError("cannot search from a terminal position")
    from ._kernel import run_search

    chosen, moves, cn, cw, total = run_search(s, cfg.iterations, cfg.c, cfg.searcher_micro,
                                              cfg.rollout_opponent, seed)
    return MoveChoice(
        chosen=int(chosen),
        visits={int(m): int(n) for m, n in zip(moves, cn)},
        win_rates={int(m): int(w) / int(n) for m, w, n in zip(moves, cw, cn)},
        total=int(total),
        root=None,
    )


class MctsPolicy:
    """Fresh-tree-per-move MCTS player for :func:`makerbreaker.game.play_game`.

    With ``cfg.seed`` set the policy owns its random stream; otherwise it draws
    from the rng handed in by the game loop.
    """

    def __init__(self, cfg: MctsConfig, trace: Optional[TextIO] = None, engine: str = "fast"):
        self.cfg = cfg
        self.trace = trace
        self.engine = engine
        self._own_rng = random.Random(cfg.seed) if cfg.seed is not None else None
        self.name = "mcts" if cfg.micro is None else f"mcts[{cfg.micro}]"

    def __call__(self, state: GameState, rng) -> int:
        return search(state, self.cfg, self._own_rng or rng, self.trace, self.engine).chosen


def mcts_policy(cfg: MctsConfig, trace: Optional[TextIO] = None, engine: str = "fast") -> MctsPolicy:
    return MctsPolicy(cfg, trace, engine)
