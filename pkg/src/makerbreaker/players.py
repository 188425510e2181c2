"""Player specifications shared by the CLI and experiment files.

Syntax::

    mcts[:micro=ID,iters=N,c=X]    MCTS, optionally micro-modified
    micro:ID                        a micro-strategy on its own
    random                          uniform random moves
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .mcts import DEFAULT_C, DEFAULT_ITERATIONS, MctsConfig, mcts_policy
from .micro import UNIFORM, MicroStrategyId, catalog, choose


@dataclass(frozen=True)
class PlayerSpec:
    kind: str  # "mcts" | "micro" | "random"
    micro: Optional[MicroStrategyId] = None
    iterations: Optional[int] = None
    c: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in ("mcts", "micro", "random"):
            raise ValueError(f"unknown player kind {self.kind!r}")
        if self.kind == "micro" and self.micro is None:
            raise ValueError("micro player needs a micro-strategy id")
        if self.kind != "mcts" and (self.iterations is not None or self.c is not None):
            raise ValueError(f"{self.kind} player takes no MCTS settings")

    @property
    def is_traditional_mcts(self) -> bool:
        return self.kind == "mcts" and self.micro is None

    def __str__(self) -> str:
        if self.kind == "random":
            return "random"
        if self.kind == "micro":
            return f"micro:{self.micro}"
        opts = []
        if self.micro is not None:
            opts.append(f"micro={self.micro}")
        if self.iterations is not None:
            opts.append(f"iters={self.iterations}")
        if self.c is not None:
            opts.append(f"c={self.c:g}")
        return "mcts" + (":" + ",".join(opts) if opts else "")

    @classmethod
    def parse(cls, text: str) -> "PlayerSpec":
        text = text.strip()
        if text == "random":
            return cls("random")
        if text.startswith("micro:"):
            return cls("micro", MicroStrategyId.parse(text[len("micro:"):]))
        if text == "mcts":
            return cls("mcts")
        if text.startswith("mcts:"):
            fields = {}
            for item in text[len("mcts:"):].split(","):
                key, sep, value = item.partition("=")
                if not sep or key not in ("micro", "iters", "c"):
                    raise ValueError(f"bad MCTS option {item!r} in {text!r} (expected micro=, iters=, c=)")
                fields[key] = value
            return cls(
                "mcts",
                MicroStrategyId.parse(fields["micro"]) if "micro" in fields else None,
                int(fields["iters"]) if "iters" in fields else None,
                float(fields["c"]) if "c" in fields else None,
            )
        raise ValueError(f"unknown player {text!r}; expected mcts[:...], micro:ID or random")

    def with_defaults(self, iterations: Optional[int] = None, c: Optional[float] = None) -> "PlayerSpec":
        """Fill MCTS settings left unset from experiment-level values."""
        if self.kind != "mcts":
            return self
        return replace(self, iterations=self.iterations if self.iterations is not None else iterations,
                       c=self.c if self.c is not None else c)

    def simplified(self) -> "PlayerSpec":
        """The micro-only counterpart: modified MCTS keeps just its micro-strategy,
        traditional MCTS becomes uniform random play."""
        if self.kind != "mcts":
            return self
        return PlayerSpec("micro", self.micro or UNIFORM)


class MicroPolicy:
    def __init__(self, mid: MicroStrategyId):
        self.mid = mid
        self.name = f"micro:{mid}"

    def __call__(self, state, rng) -> int:
        return choose(self.mid, state, rng)


def make_policy(spec: PlayerSpec, engine: str = "fast", trace=None):
    if spec.kind == "random":
        policy = MicroPolicy(UNIFORM)
        policy.name = "random"
        return policy
    if spec.kind == "micro":
        return MicroPolicy(spec.micro)
    cfg = MctsConfig(
        iterations=spec.iterations if spec.iterations is not None else DEFAULT_ITERATIONS,
        c=spec.c if spec.c is not None else DEFAULT_C,
        micro=spec.micro,
    )
    return mcts_policy(cfg, trace=trace, engine=engine)


def catalog_strategies() -> list[PlayerSpec]:
    """Traditional MCTS baseline followed by one modified MCTS per catalog entry."""
    return [PlayerSpec("mcts")] + [PlayerSpec("mcts", mid) for mid in catalog()]
