import functools
import logging
import math
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from ..config import StopkitConfig, default_config
from ..exceptions import InvalidCutoffsError
from ..probability import outcome_table
from ..strategy.spec import StrategySpec, cutoffs_for
from ..types import CutoffVector
from .report import DiscrepancyReport, compare_to_prediction
from .rng import draw_block, shard_bounds, universe_width, validate_seed

logger = logging.getLogger("stopkit.simulation.engine")


@dataclass(frozen=True)
class RunRecord:
    v: int
    fp: int
    pg: int
    mp: int
    m: float


def play_run(cutoffs: CutoffVector, draws: Sequence[float]) -> RunRecord:
    """
    Plays one game: accept the first draw at or above its cutoff.

    Ties for the maximum go to the earliest position.
    """
    n = cutoffs.n
    if len(draws) != n:
        raise ValueError(f"expected {n} draws, got {len(draws)}")
    pg = next(r for r in range(1, n + 1) if draws[r - 1] >= cutoffs[r])
    mp = int(np.argmax(draws)) + 1
    v = int(pg == mp)
    fp = int(not v and pg < mp)
    return RunRecord(v=v, fp=fp, pg=pg, mp=mp, m=float(draws[mp - 1]))


def _zeros(n: int) -> np.ndarray:
    return np.zeros(n, dtype=np.int64)


def _nan_to_none(x: float) -> Optional[float]:
    return None if math.isnan(x) else x


@dataclass(eq=False)
class SimulationTally:
    """
    Per-round counts for a batch of runs. Wins and false positives are
    counted at the acceptance round, false negatives at the round of the
    maximum. Index ``r - 1`` holds round ``r``.
    """

    n: int
    master_seed: int
    strategy: str = ""
    cutoffs: tuple[float, ...] = ()
    runs: int = 0
    win: np.ndarray = field(default=None)  # type: ignore[assignment]
    fp: np.ndarray = field(default=None)  # type: ignore[assignment]
    fn: np.ndarray = field(default=None)  # type: ignore[assignment]
    mp_counts: np.ndarray = field(default=None)  # type: ignore[assignment]
    max_sum: float = 0.0
    max_sq_sum: float = 0.0
    cond_max_sum: np.ndarray = field(default=None)  # type: ignore[assignment]
    cond_count: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("win", "fp", "fn", "mp_counts", "cond_count"):
            if getattr(self, name) is None:
                setattr(self, name, _zeros(self.n))
        if self.cond_max_sum is None:
            self.cond_max_sum = np.zeros(self.n)

    def __add__(self, other: "SimulationTally") -> "SimulationTally":
        if (self.n, self.master_seed, self.cutoffs) != (
            other.n,
            other.master_seed,
            other.cutoffs,
        ):
            raise ValueError("only tallies of the same game and seed can be merged")
        return SimulationTally(
            n=self.n,
            master_seed=self.master_seed,
            strategy=self.strategy,
            cutoffs=self.cutoffs,
            runs=self.runs + other.runs,
            win=self.win + other.win,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            mp_counts=self.mp_counts + other.mp_counts,
            max_sum=self.max_sum + other.max_sum,
            max_sq_sum=self.max_sq_sum + other.max_sq_sum,
            cond_max_sum=self.cond_max_sum + other.cond_max_sum,
            cond_count=self.cond_count + other.cond_count,
        )

    @property
    def win_total(self) -> int:
        return int(self.win.sum())

    @property
    def win_rate(self) -> float:
        return self.win_total / self.runs if self.runs else 0.0

    @property
    def mean_max(self) -> float:
        return self.max_sum / self.runs if self.runs else math.nan

    @property
    def max_standard_error(self) -> float:
        if self.runs < 2:
            return math.nan
        mean = self.mean_max
        var = (self.max_sq_sum - self.runs * mean * mean) / (self.runs - 1)
        return math.sqrt(max(var, 0.0) / self.runs)

    @property
    def mp_frequencies(self) -> np.ndarray:
        return self.mp_counts / self.runs if self.runs else np.zeros(self.n)

    @property
    def conditional_max_mean(self) -> list[float]:
        """Mean sample maximum over runs still continuing after each round."""
        return [
            float(s / c) if c else math.nan
            for s, c in zip(self.cond_max_sum, self.cond_count)
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy,
            "n": self.n,
            "runs": self.runs,
            "master_seed": self.master_seed,
            "cutoffs": list(self.cutoffs),
            "win": self.win.tolist(),
            "fp": self.fp.tolist(),
            "fn": self.fn.tolist(),
            "mp_counts": self.mp_counts.tolist(),
            "mean_max": _nan_to_none(self.mean_max),
            "max_standard_error": _nan_to_none(self.max_standard_error),
            "conditional_max_mean": [
                _nan_to_none(v) for v in self.conditional_max_mean
            ],
        }


def tally_draws(
    cutoffs: CutoffVector,
    draws: np.ndarray,
    master_seed: int = 0,
    strategy: str = "",
) -> SimulationTally:
    """Classifies a ``(runs, n)`` block of draws in one vectorized pass."""
    n = cutoffs.n
    if draws.ndim != 2 or draws.shape[1] != n:
        raise ValueError(f"expected draws of shape (runs, {n}), got {draws.shape}")

    pg = np.argmax(draws >= cutoffs.array, axis=1)
    mp = np.argmax(draws, axis=1)
    m = draws[np.arange(draws.shape[0]), mp]
    won = pg == mp
    early = ~won & (pg < mp)
    late = ~won & (mp < pg)

    # continuing after round r means neither acceptance nor maximum by then
    first = np.minimum(pg, mp)
    reached = np.cumsum(np.bincount(first, minlength=n)[::-1])[::-1]
    reached_sum = np.cumsum(np.bincount(first, weights=m, minlength=n)[::-1])[::-1]

    return SimulationTally(
        n=n,
        master_seed=master_seed,
        strategy=strategy,
        cutoffs=cutoffs.values,
        runs=int(draws.shape[0]),
        win=np.bincount(pg[won], minlength=n),
        fp=np.bincount(pg[early], minlength=n),
        fn=np.bincount(mp[late], minlength=n),
        mp_counts=np.bincount(mp, minlength=n),
        max_sum=float(m.sum()),
        max_sq_sum=float((m * m).sum()),
        cond_max_sum=np.append(reached_sum[1:], 0.0),
        cond_count=np.append(reached[1:], 0).astype(np.int64),
    )


def _resolve(
    spec: StrategySpec | CutoffVector, config: StopkitConfig
) -> tuple[CutoffVector, str]:
    if isinstance(spec, CutoffVector):
        return spec, "explicit"
    return cutoffs_for(spec, config), spec.label


def simulate(
    spec: StrategySpec | CutoffVector,
    runs: int,
    master_seed: int,
    config: Optional[StopkitConfig] = None,
) -> SimulationTally:
    """
    Plays ``runs`` games with draws keyed by ``(master_seed, run index)``.

    Runs are cut into fixed ``config.chunk_size`` shards and merged in shard
    order, so the tally does not depend on ``config.workers``.
    """
    if runs < 1:
        raise ValueError(f"runs must be at least 1, got {runs}")
    master_seed = validate_seed(master_seed)
    config = config or default_config()
    cutoffs, label = _resolve(spec, config)
    n = cutoffs.n
    width = universe_width(n)

    def run_shard(bounds: tuple[int, int]) -> SimulationTally:
        start, stop = bounds
        draws = draw_block(master_seed, start, stop, width)[:, :n]
        return tally_draws(cutoffs, draws, master_seed, label)

    shards = shard_bounds(runs, config.chunk_size)
    logger.debug(
        f"simulating {label} n={n}: {runs} runs in {len(shards)} shards "
        f"on {config.workers} workers"
    )
    if config.workers == 1:
        parts = list(map(run_shard, shards))
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(run_shard, shards))
    return functools.reduce(operator.add, parts)


def compare_strategies(
    specs: Sequence[StrategySpec],
    n: int,
    runs: int,
    master_seed: int,
    config: Optional[StopkitConfig] = None,
) -> dict[str, DiscrepancyReport]:
    """Simulates every strategy on the same runs and compares each with its
    closed-form prediction."""
    config = config or default_config()
    reports: dict[str, DiscrepancyReport] = {}
    for spec in specs:
        spec = spec.with_n(n)
        if spec.label in reports:
            raise InvalidCutoffsError(f"strategy {spec.label} listed twice")
        tally = simulate(spec, runs, master_seed, config)
        table = outcome_table(n, CutoffVector(tally.cutoffs))
        reports[spec.label] = compare_to_prediction(tally, table)
    return reports
