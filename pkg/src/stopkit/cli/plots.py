"""Tidy ``(series, x, y)`` rows behind each chart."""

import math
from typing import Callable, Optional, Sequence

import numpy as np

from ..config import StopkitConfig
from ..gm import gm_cutoffs, gm_indifference_table, gm_total_win_probability
from ..probability import outcome_table, single_k_win_probability
from ..strategy import StrategySpec, cutoffs_for, log_linear_fit

Row = tuple[str, float, float]

FIGURES: dict[str, Callable[..., list[Row]]] = {}


def figure(name: str):
    def register(fn: Callable[..., list[Row]]) -> Callable[..., list[Row]]:
        FIGURES[name] = fn
        return fn

    return register


@figure("indifference")
def indifference(n: int, specs: Sequence[StrategySpec], config: StopkitConfig, **_) -> list[Row]:
    table = gm_indifference_table(n, config)
    return [("gm", float(i), k) for i, k in enumerate(table.values, start=1)]


@figure("gm-total")
def gm_total(n: int, specs: Sequence[StrategySpec], config: StopkitConfig, **_) -> list[Row]:
    rows: list[Row] = []
    for m in range(1, n + 1):
        cutoffs = gm_cutoffs(m, config)
        rows.append(("gm", float(m), gm_total_win_probability(m, cutoffs)))
        rows.append(("exact_at_gm_cutoffs", float(m), outcome_table(m, cutoffs).pw_total))
    return rows


@figure("single-k-curve")
def single_k_curve(
    n: int, specs: Sequence[StrategySpec], config: StopkitConfig, points: int = 101, **_
) -> list[Row]:
    grid = np.linspace(0.0, 1.0, points, endpoint=False)
    return [(f"n={n}", float(k), single_k_win_probability(n, float(k))) for k in grid]


@figure("per-round")
def per_round(n: int, specs: Sequence[StrategySpec], config: StopkitConfig, **_) -> list[Row]:
    rows: list[Row] = []
    for spec in specs:
        table = outcome_table(n, cutoffs_for(spec, config))
        for row in table.rows:
            rows += [
                (f"{spec.label}:W", float(row.r), row.pw),
                (f"{spec.label}:FP", float(row.r), row.pfp),
                (f"{spec.label}:FN", float(row.r), row.pfn),
                (f"{spec.label}:C", float(row.r), row.pc),
            ]
    return rows


@figure("cumulative-win")
def cumulative_win(n: int, specs: Sequence[StrategySpec], config: StopkitConfig, **_) -> list[Row]:
    rows: list[Row] = []
    for spec in specs:
        running = outcome_table(n, cutoffs_for(spec, config)).cumulative_win()
        rows += [(spec.label, float(r), float(y)) for r, y in enumerate(running, start=1)]
    return rows


@figure("cutoffs")
def cutoff_curves(n: int, specs: Sequence[StrategySpec], config: StopkitConfig, **_) -> list[Row]:
    rows: list[Row] = []
    for spec in specs:
        cutoffs = cutoffs_for(spec, config)
        rows += [(spec.label, float(r), k) for r, k in enumerate(cutoffs, start=1)]
    return rows


@figure("log-linear")
def log_linear(n: int, specs: Sequence[StrategySpec], config: StopkitConfig, **_) -> list[Row]:
    rows: list[Row] = []
    for spec in specs:
        cutoffs = cutoffs_for(spec, config)
        rows += [
            (spec.label, math.log(n - r), cutoffs[r]) for r in range(1, n)
        ]
        fit = log_linear_fit(cutoffs)
        rows += [
            (f"{spec.label}:fit", math.log(n - r), fit.intercept + fit.slope * math.log(n - r))
            for r in range(1, n - 4)
        ]
    return rows


def plot_data(
    name: str,
    n: int,
    specs: Sequence[StrategySpec],
    config: StopkitConfig,
    points: Optional[int] = None,
) -> list[Row]:
    try:
        build = FIGURES[name]
    except KeyError:
        raise ValueError(
            f"unknown figure {name!r}, expected one of {', '.join(sorted(FIGURES))}"
        ) from None
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    extra = {} if points is None else {"points": points}
    return build(n, specs, config, **extra)
