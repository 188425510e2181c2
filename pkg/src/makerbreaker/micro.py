"""Micro-strategies: cheap move-weighting functions usable on any Maker-Breaker game.

Each strategy scores every legal move, optionally flips the preference
(``low`` uses ``max - score``), rescales to ``[0, 1]`` and adds a floor of
``1 / (100 * #legal)`` before normalising, so every legal move keeps a
positive probability.

Ids serialise as ``family:direction[:budget=N]``; the uniform strategy is
plain ``uniform``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .game import DominatingSet, GameState, KPath, Player
from .graph import INF, bit_indices, component_masks, multi_source_distances

HIGH = "high"
LOW = "low"
DEFAULT_BUDGET = 64
TIE_TOL = 1e-12

FAMILIES: dict[str, str] = {
    "uniform": "every legal move equally likely",
    "degree": "board degree of the vertex",
    "unmarked_degree": "number of unmarked neighbours",
    "own_adjacency": "number of neighbours already marked by the mover",
    "opp_adjacency": "number of neighbours marked by the opponent",
    "dist_last_own": "hop distance to the mover's previous mark",
    "dist_all_own": "hop distance to the nearest mark of the mover",
    "dist_opp": "hop distance to the nearest opponent mark",
    "component_size": "size of the vertex's component among unmarked vertices",
    "own_component_size": "size of the mover's component the vertex would join",
    "winset_count": "winning sets through the vertex still free of opponent marks",
    "winset_block": "winning sets through the vertex still free of the mover's marks",
    "closeness": "closeness centrality of the vertex on the board",
}
SAMPLED = frozenset({"winset_count", "winset_block"})


@dataclass(frozen=True, order=True)
class MicroStrategyId:
    family: str
    direction: str = HIGH
    budget: Optional[int] = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown micro-strategy family {self.family!r}")
        if self.family == "uniform":
            object.__setattr__(self, "direction", HIGH)
        elif self.direction not in (HIGH, LOW):
            raise ValueError(f"direction must be 'high' or 'low', got {self.direction!r}")
        if self.budget is not None:
            if self.family not in SAMPLED:
                raise ValueError(f"{self.family} takes no sample budget")
            if self.budget < 1:
                raise ValueError("sample budget must be positive")

    @property
    def sample_budget(self) -> int:
        return self.budget if self.budget is not None else DEFAULT_BUDGET

    @property
    def is_uniform(self) -> bool:
        return self.family == "uniform"

    def __str__(self) -> str:
        if self.is_uniform:
            return "uniform"
        text = f"{self.family}:{self.direction}"
        if self.budget is not None:
            text += f":budget={self.budget}"
        return text

    def describe(self) -> str:
        if self.is_uniform:
            return FAMILIES["uniform"]
        text = ("prefer high " if self.direction == HIGH else "prefer low ") + FAMILIES[self.family]
        if self.family in SAMPLED:
            text += f" (sampled, budget {self.sample_budget} on path games)"
        return text

    @classmethod
    def parse(cls, text: str) -> "MicroStrategyId":
        parts = text.strip().split(":")
        family = parts[0]
        if family == "uniform":
            if len(parts) > 2 or (len(parts) == 2 and parts[1] not in (HIGH, LOW)):
                raise ValueError(f"malformed micro-strategy id {text!r}")
            return cls("uniform")
        if len(parts) < 2:
            raise ValueError(f"micro-strategy id {text!r} needs a direction (high/low)")
        budget = None
        for extra in parts[2:]:
            key, _, value = extra.partition("=")
            if key != "budget" or not value.isdigit():
                raise ValueError(f"unknown micro-strategy parameter {extra!r} in {text!r}")
            budget = int(value)
        return cls(family, parts[1], budget)


UNIFORM = MicroStrategyId("uniform")


def catalog() -> list[MicroStrategyId]:
    """The 29 shipped micro-strategies, in a fixed order."""
    ids = [UNIFORM]
    for family in FAMILIES:
        if family != "uniform":
            ids += [MicroStrategyId(family, HIGH), MicroStrategyId(family, LOW)]
    for family in ("winset_count", "winset_block"):
        for budget in (8, 16):
            ids.append(MicroStrategyId(family, HIGH, budget))
    return ids


# ------------------------------------------------------------------ scoring

ScoreFn = Callable[[GameState, Player, Sequence[int], object, MicroStrategyId], Optional[list[float]]]


def _popcounts(masks: Sequence[int], legal: Sequence[int], against: int) -> list[float]:
    return [float((masks[v] & against).bit_count()) for v in legal]


def _degree(s, mover, legal, rng, mid):
    deg = s.board.degrees
    return [float(deg[v]) for v in legal]


def _unmarked_degree(s, mover, legal, rng, mid):
    return _popcounts(s.board.nbr_masks, legal, s.unmarked)


def _own_adjacency(s, mover, legal, rng, mid):
    return _popcounts(s.board.nbr_masks, legal, s.mask_of(mover))


def _opp_adjacency(s, mover, legal, rng, mid):
    return _popcounts(s.board.nbr_masks, legal, s.mask_of(mover.other))


def _finite(dist: Sequence[float], legal: Sequence[int], n: int) -> list[float]:
    # unreachable counts as one hop further than any possible distance
    return [float(n) if dist[v] == INF else float(dist[v]) for v in legal]


def _dist_last_own(s, mover, legal, rng, mid):
    last = s.last_move_of(mover)
    if last is None:
        return None
    return _finite(s.board.distance_matrix[last], legal, s.board.n)


def _dist_all_own(s, mover, legal, rng, mid):
    own = s.mask_of(mover)
    if not own:
        return None
    return _finite(multi_source_distances(s.board, own), legal, s.board.n)


def _dist_opp(s, mover, legal, rng, mid):
    opp = s.mask_of(mover.other)
    if not opp:
        return None
    return _finite(multi_source_distances(s.board, opp), legal, s.board.n)


def _size_lookup(comps: list[int]) -> dict[int, int]:
    size = {}
    for c in comps:
        k = c.bit_count()
        for v in bit_indices(c):
            size[v] = k
    return size


def _component_size(s, mover, legal, rng, mid):
    size = _size_lookup(component_masks(s.board, s.unmarked))
    return [float(size[v]) for v in legal]


def _own_component_size(s, mover, legal, rng, mid):
    nbr = s.board.nbr_masks
    comps = component_masks(s.board, s.mask_of(mover))
    out = []
    for v in legal:
        total = 1
        for c in comps:
            if nbr[v] & c:
                total += c.bit_count()
        out.append(float(total))
    return out


def _closeness(s, mover, legal, rng, mid):
    cl = s.board.closeness
    return [cl[v] for v in legal]


def sample_path_counts(s: GameState, avail: int, k: int, budget: int, rng) -> list[int]:
    """Draw ``budget`` random induced-path growths inside ``avail`` and count, for
    every unmarked vertex, how many of the completed k-paths pass through it."""
    counts = [0] * s.board.n
    starts = bit_indices(avail)
    if not starts:
        return counts
    nbr = s.board.nbr_masks
    unmarked = s.unmarked
    for _ in range(budget):
        v = starts[int(rng.random() * len(starts))]
        path = 1 << v
        head = tail = v
        length = 1
        while length < k:
            options = []
            for end in (head, tail) if head != tail else (head,):
                end_bit = 1 << end
                cand = nbr[end] & avail & ~path
                while cand:
                    low = cand & -cand
                    cand ^= low
                    w = low.bit_length() - 1
                    if nbr[w] & path == end_bit:
                        options.append((end == head, w))
            if not options:
                break
            at_head, w = options[int(rng.random() * len(options))]
            path |= 1 << w
            if at_head:
                head = w
            else:
                tail = w
            length += 1
        if length == k:
            for u in bit_indices(path & unmarked):
                counts[u] += 1
    return counts


def _winset(s: GameState, mover: Player, legal, rng, mid: MicroStrategyId, blocked_by: Player):
    cond = s.cond
    if isinstance(cond, DominatingSet):
        # exact: vertices of N[v] not yet dominated by the relevant side's marks
        closed = s.board.closed_masks
        covered = 0
        for u in bit_indices(s.mask_of(blocked_by.other)):
            covered |= closed[u]
        return [float((closed[v] & ~covered).bit_count()) for v in legal]
    if isinstance(cond, KPath):
        if rng is None:
            raise ValueError(f"{mid} samples winning sets and needs an rng")
        avail = s.board.full_mask & ~s.mask_of(blocked_by)
        counts = sample_path_counts(s, avail, cond.k, mid.sample_budget, rng)
        return [float(counts[v]) for v in legal]
    raise TypeError(f"unsupported win condition {cond!r}")


def _winset_count(s, mover, legal, rng, mid):
    return _winset(s, mover, legal, rng, mid, blocked_by=mover.other)


def _winset_block(s, mover, legal, rng, mid):
    return _winset(s, mover, legal, rng, mid, blocked_by=mover)


_SCORERS: dict[str, ScoreFn] = {
    "degree": _degree,
    "unmarked_degree": _unmarked_degree,
    "own_adjacency": _own_adjacency,
    "opp_adjacency": _opp_adjacency,
    "dist_last_own": _dist_last_own,
    "dist_all_own": _dist_all_own,
    "dist_opp": _dist_opp,
    "component_size": _component_size,
    "own_component_size": _own_component_size,
    "winset_count": _winset_count,
    "winset_block": _winset_block,
    "closeness": _closeness,
}


def raw_scores(mid: MicroStrategyId, s: GameState, mover: Player, legal: Sequence[int], rng=None) -> Optional[list[float]]:
    """Family scores before direction and normalisation; ``None`` means the
    family has nothing to measure here and falls back to uniform."""
    if mid.is_uniform:
        return None
    return _SCORERS[mid.family](s, mover, legal, rng, mid)


def normalize(scores: Optional[Sequence[float]], direction: str, count: int) -> list[float]:
    if count == 0:
        return []
    if scores is None:
        return [1.0 / count] * count
    top = max(scores)
    if direction == LOW:
        scores = [top - x for x in scores]
        top = max(scores)
    scale = 1.0 / top if top > 0 else 0.0
    floor = 1.0 / (100 * count)
    shifted = [x * scale + floor for x in scores]
    total = 0.0
    for x in shifted:  # plain left-to-right sum, mirrored by the compiled engine
        total += x
    return [x / total for x in shifted]


def weights(mid: MicroStrategyId, s: GameState, mover: Optional[Player] = None, rng=None,
            legal: Optional[Sequence[int]] = None) -> list[float]:
    """Probability vector over ``legal_moves(s)`` (ascending vertex order)."""
    if s.is_over:
        raise ValueError("micro-strategies need an ongoing game")
    if mover is None:
        mover = s.to_move
    if legal is None:
        legal = s.legal_moves()
    return normalize(raw_scores(mid, s, mover, legal, rng), mid.direction, len(legal))


def sample_move(w: Sequence[float], legal: Sequence[int], rng) -> int:
    if len(w) != len(legal):
        raise ValueError(f"weight vector has {len(w)} entries for {len(legal)} moves")
    if not legal:
        raise ValueError("no moves to sample from")
    total = 0.0
    for x in w:
        total += x
    u = rng.random() * total
    acc = 0.0
    for i, x in enumerate(w):
        acc += x
        if u < acc:
            return legal[i]
    return legal[-1]


def sample_uniform(legal: Sequence[int], rng) -> int:
    return legal[int(rng.random() * len(legal))]


def argmax_tiebreak(w: Sequence[float], candidates: Sequence[int], rng) -> int:
    """Index in ``candidates`` with the largest weight; exact ties broken uniformly."""
    if not candidates:
        raise ValueError("no candidates")
    best = max(w[i] for i in candidates)
    tied = [i for i in candidates if w[i] >= best - TIE_TOL]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.random() * len(tied))]


def choose(mid: MicroStrategyId, s: GameState, rng, mover: Optional[Player] = None) -> int:
    """One move drawn from the strategy's weights (uniform short-cuts the scoring)."""
    legal = s.legal_moves()
    if mid.is_uniform:
        return sample_uniform(legal, rng)
    return sample_move(weights(mid, s, mover, rng, legal), legal, rng)
