"""Run every (swept value, strategy) cell of an experiment.

Each game gets its own seed derived from ``(master_seed, value index,
strategy index, game index)``; workers only ever add up per-cell counters,
so the result does not depend on how games are scheduled.
"""
from __future__ import annotations

import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from ..game import Budget, Outcome, play_game
from ..players import PlayerSpec, make_policy
from .spec import ExperimentSpec

log = logging.getLogger(__name__)

GAME_DOMAIN = 0
GRAPH_DOMAIN = 1
CHUNK = 25  # games per task


def _seed(master: int, *key: int) -> int:
    words = np.random.SeedSequence(master, spawn_key=key).generate_state(2, np.uint32)
    return (int(words[0]) << 32) | int(words[1])


def game_seed(master: int, p: int, s: int, g: int) -> int:
    """Per-game rng seed; independent of how many strategies or values the spec lists."""
    return _seed(master, GAME_DOMAIN, p, s, g)


def graph_seed(master: int, p: int, g: Optional[int]) -> int:
    """Board seed for random-graph families. Shared by all strategies so cells
    compare on the same boards; ``g=None`` gives one board per swept value."""
    return _seed(master, GRAPH_DOMAIN, p) if g is None else _seed(master, GRAPH_DOMAIN, p, g)


@dataclass
class SweepResult:
    name: str
    parameter: str
    values: list  # CSV column-0 values
    strategies: list[str]
    games_per_cell: int
    maker: np.ndarray  # (values, strategies) int64
    breaker: np.ndarray
    timeouts: np.ndarray
    invalid: dict[int, str] = field(default_factory=dict)  # value index -> reason

    @classmethod
    def empty(cls, spec: ExperimentSpec) -> "SweepResult":
        shape = (len(spec.sweep.values), len(spec.strategies))
        return cls(
            name=spec.name,
            parameter=spec.sweep.parameter,
            values=[spec.sweep.column_value(i) for i in range(shape[0])],
            strategies=[str(p) for p in spec.strategies],
            games_per_cell=spec.games_per_cell,
            maker=np.zeros(shape, dtype=np.int64),
            breaker=np.zeros(shape, dtype=np.int64),
            timeouts=np.zeros(shape, dtype=np.int64),
        )

    @property
    def completed(self) -> np.ndarray:
        return self.maker + self.breaker

    @property
    def attempted(self) -> np.ndarray:
        return self.maker + self.breaker + self.timeouts

    def percentages(self) -> np.ndarray:
        """Maker win percentage per cell over completed games; nan for invalid or empty cells."""
        done = self.completed
        with np.errstate(invalid="ignore", divide="ignore"):
            pct = np.where(done > 0, 100.0 * self.maker / np.maximum(done, 1), np.nan)
        for p in self.invalid:
            pct[p, :] = np.nan
        return pct

    def merge(self, p: int, s: int, maker: int, breaker: int, timeouts: int) -> None:
        self.maker[p, s] += maker
        self.breaker[p, s] += breaker
        self.timeouts[p, s] += timeouts


@dataclass(frozen=True)
class Task:
    p: int
    s: int
    start: int
    stop: int


def cell_problem(spec: ExperimentSpec, p: int) -> Optional[str]:
    """Why value ``p`` cannot be played, or None."""
    if spec.condition == "path":
        k = int(spec.setting(p)["k"])
        n = spec.board_vertices(p)
        if k > n:
            return f"path length {k} exceeds the {n} board vertices"
    return None


def tasks(spec: ExperimentSpec, invalid: dict[int, str], chunk: int = CHUNK) -> Iterator[Task]:
    for p in range(len(spec.sweep.values)):
        if p in invalid:
            continue
        for s in range(len(spec.strategies)):
            for start in range(0, spec.games_per_cell, chunk):
                yield Task(p, s, start, min(start + chunk, spec.games_per_cell))


_policy_cache: dict[PlayerSpec, object] = {}


def _policy(player: PlayerSpec):
    pol = _policy_cache.get(player)
    if pol is None:
        pol = _policy_cache[player] = make_policy(player)
    return pol


def run_task(spec: ExperimentSpec, task: Task) -> tuple[int, int, int, int, int]:
    makers, breaker_spec = spec.players(task.p)
    maker_pol = _policy(makers[task.s])
    breaker_pol = _policy(breaker_spec)
    cond = spec.win_condition(task.p)
    budget = Budget(spec.move_budget, spec.game_budget)
    fixed_board = None
    if spec.family != "er":
        fixed_board = spec.board_for(task.p)
    elif not spec.resample_graph:
        fixed_board = spec.board_for(task.p, graph_seed(spec.master_seed, task.p, None))
    counts = {Outcome.MAKER: 0, Outcome.BREAKER: 0, Outcome.TIMEOUT: 0}
    for g in range(task.start, task.stop):
        board = fixed_board if fixed_board is not None else spec.board_for(
            task.p, graph_seed(spec.master_seed, task.p, g))
        rng = random.Random(game_seed(spec.master_seed, task.p, task.s, g))
        rec = play_game(board, cond, maker_pol, breaker_pol, rng, budget, spec.first)
        counts[rec.winner] += 1
    return task.p, task.s, counts[Outcome.MAKER], counts[Outcome.BREAKER], counts[Outcome.TIMEOUT]


def _run_task_packed(args):
    return run_task(*args)


def default_workers() -> int:
    return os.cpu_count() or 1


def run_sweep(spec: ExperimentSpec, workers: Optional[int] = None,
              progress: Optional[Callable[[int, int], None]] = None) -> SweepResult:
    """Play ``games_per_cell`` games in every cell. ``workers`` > 1 uses a process pool."""
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError("workers must be at least 1")
    result = SweepResult.empty(spec)
    for p in range(len(spec.sweep.values)):
        reason = cell_problem(spec, p)
        if reason is not None:
            result.invalid[p] = reason
            log.warning("%s: %s=%s skipped: %s", spec.name, spec.sweep.parameter, spec.sweep.values[p], reason)
    todo = list(tasks(spec, result.invalid))
    done = 0
    if workers == 1:
        outputs = (run_task(spec, t) for t in todo)
        for out in outputs:
            result.merge(*out)
            done += 1
            if progress:
                progress(done, len(todo))
        return result
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for out in pool.map(_run_task_packed, [(spec, t) for t in todo], chunksize=1):
            result.merge(*out)
            done += 1
            if progress:
                progress(done, len(todo))
    return result
