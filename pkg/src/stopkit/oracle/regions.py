"""
Sampling oracle: each (round, outcome) cell is tested directly on points of
the unit hypercube, independently of the closed forms.
"""

import functools
import logging
import math
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..config import StopkitConfig, default_config
from ..simulation.engine import play_run
from ..simulation.report import z_score
from ..simulation.rng import draw_block, shard_bounds, validate_seed
from ..types import CutoffVector, Outcome, as_cutoffs

logger = logging.getLogger("stopkit.oracle")

ADVISED_SAMPLES = 100_000

Cell = tuple[int, Outcome]


@dataclass(frozen=True)
class RegionPredicate:
    n: int
    r: int
    outcome: Outcome
    cutoffs: CutoffVector

    def __post_init__(self):
        if self.cutoffs.n != self.n:
            raise ValueError(f"expected {self.n} cutoffs, got {self.cutoffs.n}")
        if not 1 <= self.r <= self.n:
            raise ValueError(f"round r={self.r} outside 1..{self.n}")

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of the rows of ``points`` (shape ``(N, n)``) in the region."""
        points = np.atleast_2d(points)
        idx = self.r - 1
        k = self.cutoffs.array
        top = np.argmax(points, axis=1)  # first index on ties

        # no acceptance so far and the maximum still ahead
        alive = np.all(points[:, :idx] < k[:idx], axis=1) & (top >= idx)
        accepted = points[:, idx] >= k[idx]
        is_max = top == idx

        match self.outcome:
            case Outcome.WIN:
                return alive & accepted & is_max
            case Outcome.FALSE_POSITIVE:
                return alive & accepted & ~is_max
            case Outcome.FALSE_NEGATIVE:
                return alive & ~accepted & is_max
            case Outcome.CONTINUE:
                return alive & ~accepted & ~is_max


def region_predicate(
    n: int, r: int, outcome: Outcome, cutoffs: CutoffVector | Sequence[float]
) -> RegionPredicate:
    return RegionPredicate(n=n, r=r, outcome=Outcome(outcome), cutoffs=as_cutoffs(cutoffs))


@dataclass(frozen=True)
class OracleEstimate:
    estimate: float
    standard_error: float
    hits: int
    samples: int

    def z(self, predicted: float) -> float:
        """z-score against ``predicted``, scaled by the binomial error of the
        prediction so that cells with no hits still get a finite spread."""
        se = math.sqrt(predicted * (1.0 - predicted) / self.samples)
        return z_score(self.estimate, predicted, se)

    def agrees(self, predicted: float, threshold: float = 4.0) -> bool:
        return abs(self.z(predicted)) <= threshold


def _estimate(hits: int, samples: int) -> OracleEstimate:
    p = hits / samples
    return OracleEstimate(
        estimate=p,
        standard_error=math.sqrt(p * (1.0 - p) / samples),
        hits=hits,
        samples=samples,
    )


def _count_cells(
    predicates: Sequence[RegionPredicate],
    samples: int,
    seed: int,
    config: StopkitConfig,
) -> np.ndarray:
    n = predicates[0].n
    width = -(-n // 4) * 4

    def count(bounds: tuple[int, int]) -> np.ndarray:
        points = draw_block(seed, bounds[0], bounds[1], width)[:, :n]
        return np.array([int(p(points).sum()) for p in predicates], dtype=np.int64)

    shards = shard_bounds(samples, config.chunk_size)
    if config.workers == 1:
        parts = list(map(count, shards))
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(count, shards))
    return functools.reduce(operator.add, parts)


def _check_samples(samples: int) -> None:
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    if samples < ADVISED_SAMPLES:
        logger.warning(
            f"{samples} samples is below the advised {ADVISED_SAMPLES}; "
            "standard errors will be wide"
        )


def oracle_probability(
    n: int,
    r: int,
    outcome: Outcome,
    cutoffs: CutoffVector | Sequence[float],
    samples: int,
    seed: int,
    config: Optional[StopkitConfig] = None,
) -> OracleEstimate:
    """Monte Carlo volume of one cell with its binomial standard error."""
    _check_samples(samples)
    predicate = region_predicate(n, r, outcome, cutoffs)
    hits = _count_cells(
        [predicate], samples, validate_seed(seed), config or default_config()
    )
    return _estimate(int(hits[0]), samples)


def oracle_table(
    n: int,
    cutoffs: CutoffVector | Sequence[float],
    samples: int,
    seed: int,
    config: Optional[StopkitConfig] = None,
) -> dict[Cell, OracleEstimate]:
    """Every (round, outcome) cell estimated from one shared sample set."""
    _check_samples(samples)
    cutoffs = as_cutoffs(cutoffs)
    predicates = [
        RegionPredicate(n, r, outcome, cutoffs)
        for r in range(1, n + 1)
        for outcome in Outcome
    ]
    hits = _count_cells(predicates, samples, validate_seed(seed), config or default_config())
    return {
        (p.r, p.outcome): _estimate(int(h), samples) for p, h in zip(predicates, hits)
    }


@dataclass(frozen=True)
class PointClassification:
    by_region: dict[Cell, int]
    by_play: dict[Cell, int]

    @property
    def consistent(self) -> bool:
        return self.by_region == self.by_play


def classify_points(
    points: np.ndarray, cutoffs: CutoffVector | Sequence[float]
) -> PointClassification:
    """Counts terminal cells twice: through region predicates and by playing
    each point as a game."""
    cutoffs = as_cutoffs(cutoffs)
    n = cutoffs.n
    points = np.atleast_2d(points)
    terminal = (Outcome.WIN, Outcome.FALSE_POSITIVE, Outcome.FALSE_NEGATIVE)

    by_region = {
        (r, outcome): int(RegionPredicate(n, r, outcome, cutoffs)(points).sum())
        for r in range(1, n + 1)
        for outcome in terminal
    }
    by_play = dict.fromkeys(by_region, 0)
    for row in points:
        record = play_run(cutoffs, row)
        if record.v:
            by_play[(record.pg, Outcome.WIN)] += 1
        elif record.fp:
            by_play[(record.pg, Outcome.FALSE_POSITIVE)] += 1
        else:
            by_play[(record.mp, Outcome.FALSE_NEGATIVE)] += 1
    return PointClassification(by_region=by_region, by_play=by_play)
