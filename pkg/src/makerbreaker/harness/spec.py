"""Experiment files: one YAML document per sweep.

Any sweepable setting may be written as a list or as an inclusive range
``{from: A, to: B, step: S}``; exactly one setting must be swept. Example::

    name: p5xk_dom
    board: {family: grid, rows: 5, cols: {from: 3, to: 11}}
    condition: {kind: dom}
    players: {maker: catalog, breaker: mcts}
    iterations: 20
    games_per_cell: 10000
    budget: {move: 5.0, game: 120.0}
    master_seed: 1

Sweepable: ``board.rows``, ``board.cols``, ``board.size`` (square grid),
``board.n``, ``board.p``, ``board.t``, ``condition.k``, ``iterations`` and
``complexity`` (levels ``micro-strategy`` and ``modified MCTS``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import yaml

from ..game import MAKER, DominatingSet, KPath, Player
from ..graph import Graph, er_graph, flower_snark, grid_graph
from ..mcts import DEFAULT_C, DEFAULT_ITERATIONS
from ..players import PlayerSpec, catalog_strategies

COMPLEXITY_LEVELS = ("micro-strategy", "modified MCTS")
BOARD_KEYS = {
    "grid": ("rows", "cols", "size"),
    "er": ("n", "p"),
    "flower_snark": ("t",),
}
SWEEPABLE = ("rows", "cols", "size", "n", "p", "t", "k", "iterations", "complexity")
PRESETS = (
    "p5xk_dom",
    "kxk_path7",
    "er12_dom",
    "p6x6_pathk",
    "er15_pathk",
    "snark_rollouts",
    "p5x7_micro_vs_mcts",
)


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple

    def column_value(self, index: int):
        """What goes into the CSV parameter column (level index for categorical sweeps)."""
        return index if self.parameter == "complexity" else self.values[index]


@dataclass
class ExperimentSpec:
    name: str
    family: str
    condition: str
    fixed: dict[str, Any]
    sweep: Sweep
    strategies: list[PlayerSpec]
    breaker: PlayerSpec = field(default_factory=lambda: PlayerSpec("mcts"))
    games_per_cell: int = 10000
    move_budget: Optional[float] = 5.0
    game_budget: Optional[float] = 120.0
    c: float = DEFAULT_C
    master_seed: int = 0
    first: Player = MAKER
    resample_graph: bool = True
    graph_seed: int = 0

    def setting(self, index: int) -> dict[str, Any]:
        out = dict(self.fixed)
        out[self.sweep.parameter] = self.sweep.values[index]
        return out

    def win_condition(self, index: int):
        if self.condition == "dom":
            return DominatingSet()
        return KPath(int(self.setting(index)["k"]))

    def iterations(self, index: int) -> int:
        return int(self.setting(index).get("iterations", DEFAULT_ITERATIONS))

    def board_for(self, index: int, seed: Optional[int] = None) -> Graph:
        s = self.setting(index)
        if self.family == "grid":
            if "size" in s:
                return grid_graph(int(s["size"]), int(s["size"]))
            return grid_graph(int(s["rows"]), int(s["cols"]))
        if self.family == "er":
            return er_graph(int(s["n"]), float(s["p"]), self.graph_seed if seed is None else seed)
        return flower_snark(int(s["t"]))

    def board_vertices(self, index: int) -> int:
        s = self.setting(index)
        if self.family == "grid":
            return int(s["size"]) ** 2 if "size" in s else int(s["rows"]) * int(s["cols"])
        if self.family == "er":
            return int(s["n"])
        return 4 * int(s["t"])

    def players(self, index: int) -> tuple[list[PlayerSpec], PlayerSpec]:
        """Maker strategies and the Breaker for one swept value."""
        iters = self.iterations(index)
        makers = [p.with_defaults(iters, self.c) for p in self.strategies]
        breaker = self.breaker.with_defaults(iters, self.c)
        if self.setting(index).get("complexity") == COMPLEXITY_LEVELS[0]:
            makers = [p.simplified() for p in makers]
            breaker = PlayerSpec("random")
        return makers, breaker

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "family": self.family,
            "condition": self.condition,
            "fixed": dict(sorted(self.fixed.items())),
            "sweep": {"parameter": self.sweep.parameter, "values": list(self.sweep.values)},
            "strategies": [str(p) for p in self.strategies],
            "breaker": str(self.breaker),
            "games_per_cell": self.games_per_cell,
            "move_budget": self.move_budget,
            "game_budget": self.game_budget,
            "c": self.c,
            "master_seed": self.master_seed,
            "first": str(self.first),
            "resample_graph": self.resample_graph,
            "graph_seed": self.graph_seed,
        }


# ----------------------------------------------------------------- parsing


def _expand(field_name: str, value: Any) -> Optional[tuple]:
    """Values of a swept setting, or None if ``value`` is a scalar."""
    if isinstance(value, list):
        if not value:
            raise SpecError(f"{field_name}: sweep list is empty")
        return tuple(value)
    if isinstance(value, dict):
        unknown = set(value) - {"from", "to", "step"}
        if unknown or not {"from", "to"} <= set(value):
            raise SpecError(f"{field_name}: a range needs 'from' and 'to' (optional 'step')")
        lo, hi, step = value["from"], value["to"], value.get("step", 1)
        if step <= 0:
            raise SpecError(f"{field_name}: range step must be positive")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        if count < 1:
            raise SpecError(f"{field_name}: empty range {lo}..{hi}")
        if all(isinstance(x, int) for x in (lo, hi, step)):
            return tuple(lo + i * step for i in range(count))
        return tuple(round(lo + i * step, 10) for i in range(count))
    return None


def _check_value(name: str, value: Any) -> None:
    if name == "complexity":
        if value not in COMPLEXITY_LEVELS:
            raise SpecError(f"complexity: unknown level {value!r}; expected one of {COMPLEXITY_LEVELS}")
        return
    if name == "p":
        if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
            raise SpecError(f"board.p: edge probability must lie in [0, 1], got {value!r}")
        return
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise SpecError(f"{name}: expected a positive integer, got {value!r}")
    if name == "t" and (value < 5 or value % 2 == 0):
        raise SpecError(f"board.t: flower snark needs an odd t >= 5, got {value}")
    if name == "k" and value < 2:
        raise SpecError(f"condition.k: path length must be at least 2, got {value}")


def _player(field_name: str, text: Any) -> PlayerSpec:
    try:
        return PlayerSpec.parse(str(text))
    except ValueError as exc:
        raise SpecError(f"{field_name}: {exc}") from None


def spec_from_dict(doc: dict[str, Any]) -> ExperimentSpec:
    if not isinstance(doc, dict):
        raise SpecError("experiment file must be a mapping")
    known = {"name", "board", "condition", "players", "iterations", "complexity", "c", "games_per_cell",
             "budget", "master_seed", "first"}
    for key in doc:
        if key not in known:
            raise SpecError(f"{key}: unknown top-level field")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise SpecError("name: required string")

    board = doc.get("board")
    if not isinstance(board, dict):
        raise SpecError("board: required mapping")
    family = board.get("family")
    if family not in BOARD_KEYS:
        raise SpecError(f"board.family: expected one of {sorted(BOARD_KEYS)}, got {family!r}")
    raw: dict[str, tuple[str, Any]] = {}
    for key, value in board.items():
        if key in ("family", "resample", "graph_seed"):
            continue
        if key not in BOARD_KEYS[family]:
            raise SpecError(f"board.{key}: not a setting of a {family} board")
        raw[key] = (f"board.{key}", value)
    if family == "grid":
        has_size = "size" in raw
        if has_size == ("rows" in raw or "cols" in raw) or (not has_size and not ("rows" in raw and "cols" in raw)):
            raise SpecError("board: a grid needs either 'size' or both 'rows' and 'cols'")
    else:
        for key in BOARD_KEYS[family]:
            if key not in raw:
                raise SpecError(f"board.{key}: required for a {family} board")

    cond = doc.get("condition")
    if not isinstance(cond, dict) or cond.get("kind") not in ("dom", "path"):
        raise SpecError("condition.kind: expected 'dom' or 'path'")
    for key in cond:
        if key not in ("kind", "k"):
            raise SpecError(f"condition.{key}: unknown field")
    if cond["kind"] == "path":
        if "k" not in cond:
            raise SpecError("condition.k: required for path conditions")
        raw["k"] = ("condition.k", cond["k"])
    elif "k" in cond:
        raise SpecError("condition.k: only meaningful for path conditions")

    raw["iterations"] = ("iterations", doc.get("iterations", DEFAULT_ITERATIONS))
    if "complexity" in doc:
        raw["complexity"] = ("complexity", doc["complexity"])

    fixed: dict[str, Any] = {}
    swept: list[Sweep] = []
    for key, (field_name, value) in raw.items():
        values = _expand(field_name, value)
        if values is None:
            _check_value(key, value)
            fixed[key] = value
        else:
            for v in values:
                _check_value(key, v)
            swept.append(Sweep(key, values))
    if len(swept) != 1:
        names = ", ".join(s.parameter for s in swept) or "none"
        raise SpecError(f"sweep: exactly one setting must be swept, found {len(swept)} ({names})")
    if "complexity" in fixed:
        raise SpecError("complexity: must be swept over its levels, not fixed")

    players = doc.get("players", {})
    if not isinstance(players, dict):
        raise SpecError("players: expected a mapping with 'maker' and 'breaker'")
    makers = players.get("maker", "catalog")
    if makers == "catalog":
        strategies = catalog_strategies()
    elif isinstance(makers, list) and makers:
        strategies = [_player(f"players.maker[{i}]", m) for i, m in enumerate(makers)]
    else:
        raise SpecError("players.maker: expected 'catalog' or a non-empty list of player specs")
    if not strategies[0].is_traditional_mcts:
        raise SpecError(f"players.maker[0]: the first strategy must be the traditional MCTS baseline, got {strategies[0]}")
    breaker = _player("players.breaker", players.get("breaker", "mcts"))

    games = doc.get("games_per_cell", 10000)
    if not isinstance(games, int) or games < 1:
        raise SpecError(f"games_per_cell: expected a positive integer, got {games!r}")
    budget = doc.get("budget", {}) or {}
    move_budget = budget.get("move", 5.0)
    game_budget = budget.get("game", 120.0)
    for label, b in (("budget.move", move_budget), ("budget.game", game_budget)):
        if b is not None and (not isinstance(b, (int, float)) or b < 0):
            raise SpecError(f"{label}: expected a non-negative number of seconds or null")
    c = doc.get("c", DEFAULT_C)
    if not isinstance(c, (int, float)) or c < 0:
        raise SpecError(f"c: expected a non-negative number, got {c!r}")
    seed = doc.get("master_seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise SpecError(f"master_seed: expected a non-negative integer, got {seed!r}")
    first = str(doc.get("first", "maker")).lower()
    if first not in ("maker", "breaker"):
        raise SpecError(f"first: expected 'maker' or 'breaker', got {first!r}")

    spec = ExperimentSpec(
        name=name,
        family=family,
        condition=cond["kind"],
        fixed=fixed,
        sweep=swept[0],
        strategies=strategies,
        breaker=breaker,
        games_per_cell=games,
        move_budget=None if move_budget is None else float(move_budget),
        game_budget=None if game_budget is None else float(game_budget),
        c=float(c),
        master_seed=seed,
        first=Player.MAKER if first == "maker" else Player.BREAKER,
        resample_graph=bool(board.get("resample", True)),
        graph_seed=int(board.get("graph_seed", 0)),
    )
    return spec


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise SpecError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return resources.files("makerbreaker.harness").joinpath("presets", f"{name}.yaml").read_text()


def load_spec(source: Union[str, Path]) -> ExperimentSpec:
    """Load an experiment from a YAML file path or a shipped preset name."""
    path = Path(source)
    if path.is_file():
        text = path.read_text()
    elif str(source) in PRESETS:
        text = preset_text(str(source))
    else:
        raise SpecError(f"no experiment file or preset named {str(source)!r}")
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError(f"could not parse {source}: {exc}") from None
    return spec_from_dict(doc)
