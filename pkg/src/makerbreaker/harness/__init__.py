from .output import (read_csv, rank_strategies, rank_transfer, relative_to_max, to_csv, wilson_interval,
                     write_relative)
from .spec import COMPLEXITY_LEVELS, PRESETS, ExperimentSpec, SpecError, Sweep, load_spec, spec_from_dict
from .sweep import SweepResult, game_seed, graph_seed, run_sweep

__all__ = [
    "COMPLEXITY_LEVELS", "PRESETS", "ExperimentSpec", "SpecError", "Sweep", "SweepResult", "game_seed",
    "graph_seed", "load_spec", "rank_strategies", "rank_transfer", "read_csv", "relative_to_max",
    "run_sweep", "spec_from_dict", "to_csv", "wilson_interval", "write_relative",
]
