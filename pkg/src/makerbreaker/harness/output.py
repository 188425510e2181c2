"""Figure-ready tables: headerless CSV, metadata sidecar and post-processing."""
from __future__ import annotations

import json
import math
import os
import tempfile
import warnings
from pathlib import Path
from statistics import NormalDist
from typing import Optional, Sequence, Union

import numpy as np
from scipy.stats import spearmanr

from .spec import ExperimentSpec
from .sweep import SweepResult

PathLike = Union[str, Path]


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.4f}"


def _fmt_param(v) -> str:
    if isinstance(v, float):
        return f"{v:.4f}".rstrip("0").rstrip(".") if not v.is_integer() else str(int(v))
    return str(v)


def _atomic_write(path: PathLike, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"could not write {path}: {exc}") from exc


def table_text(params: Sequence, matrix: np.ndarray) -> str:
    lines = []
    for v, row in zip(params, matrix):
        lines.append(",".join([_fmt_param(v)] + [_fmt(float(x)) for x in row]))
    return "\n".join(lines) + "\n"


def to_csv(r: SweepResult, path: PathLike, spec: Optional[ExperimentSpec] = None) -> Path:
    """Write the win-percentage table and a ``.meta.json`` sidecar next to it."""
    path = Path(path)
    _atomic_write(path, table_text(r.values, r.percentages()))
    _atomic_write(metadata_path(path), json.dumps(metadata(r, spec), indent=2, sort_keys=True) + "\n")
    return path


def metadata_path(csv_path: PathLike) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".meta.json")


def metadata(r: SweepResult, spec: Optional[ExperimentSpec] = None) -> dict:
    """Everything needed to audit a table. No timestamps, so reruns are byte-identical."""
    return {
        "name": r.name,
        "parameter": r.parameter,
        "values": list(r.values),
        "strategies": list(r.strategies),
        "games_per_cell": r.games_per_cell,
        "maker_wins": r.maker.tolist(),
        "breaker_wins": r.breaker.tolist(),
        "timeouts": r.timeouts.tolist(),
        "invalid": {str(k): v for k, v in sorted(r.invalid.items())},
        "spec": spec.to_dict() if spec is not None else None,
    }


def write_relative(r: SweepResult, path: PathLike) -> Path:
    path = Path(path)
    _atomic_write(path, table_text(r.values, relative_to_max(r.percentages())))
    return path


def read_csv(path: PathLike) -> tuple[list[float], np.ndarray]:
    """Parameter column and value matrix of a headerless table."""
    params, rows = [], []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        cells = line.split(",")
        params.append(float(cells[0]))
        rows.append([float(c) for c in cells[1:]])
    return params, np.array(rows, dtype=float)


def relative_to_max(matrix: np.ndarray) -> np.ndarray:
    """Divide each row by its maximum (nan entries ignored). All-zero rows stay zero."""
    m = np.asarray(matrix, dtype=float)
    out = np.full_like(m, np.nan)
    for i, row in enumerate(m):
        finite = row[~np.isnan(row)]
        if finite.size == 0:
            continue
        top = finite.max()
        if top <= 0:
            warnings.warn(f"row {i} has no positive entry; emitted as zeros", RuntimeWarning, stacklevel=2)
            out[i] = np.where(np.isnan(row), np.nan, 0.0)
        else:
            out[i] = row / top
    return out


def wilson_interval(wins: int, games: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if games < 1:
        raise ValueError("games must be at least 1")
    if not 0 <= wins <= games:
        raise ValueError(f"wins={wins} outside 0..{games}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = wins / games
    denom = 1 + z * z / games
    centre = (phat + z * z / (2 * games)) / denom
    half = z * math.sqrt(phat * (1 - phat) / games + z * z / (4 * games * games)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def rank_strategies(matrix: np.ndarray) -> np.ndarray:
    """Column indices sorted by mean win percentage over valid rows, best first."""
    means = np.nanmean(np.asarray(matrix, dtype=float), axis=0)
    return np.argsort(-np.nan_to_num(means, nan=-np.inf), kind="stable")


def rank_transfer(simple: np.ndarray, complex_: np.ndarray) -> float:
    """Spearman correlation of strategy means between a simplified and a full game."""
    a = np.nanmean(np.asarray(simple, dtype=float), axis=0)
    b = np.nanmean(np.asarray(complex_, dtype=float), axis=0)
    if a.shape != b.shape:
        raise ValueError(f"tables have {a.size} and {b.size} strategies")
    return float(spearmanr(a, b).statistic)
