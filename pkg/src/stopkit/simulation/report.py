import csv
import io
import json
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from ..types import Outcome, RoundOutcomeTable

if TYPE_CHECKING:
    from .engine import SimulationTally

logger = logging.getLogger("stopkit.simulation.report")

CSV_COLUMNS = (
    "round",
    "outcome",
    "realized_count",
    "realized_freq",
    "predicted_prob",
    "z",
    "realized_display",
    "predicted_display",
    "strategy",
    "master_seed",
)


def format_number(x: float) -> str:
    """17 significant digits: enough to round-trip a double."""
    return f"{x:.17g}"


def _finite_or_none(x: float) -> float | None:
    return x if math.isfinite(x) else None


def z_score(realized: float, predicted: float, se: float) -> float:
    if se > 0.0:
        return (realized - predicted) / se
    return 0.0 if realized == predicted else math.inf


@dataclass(frozen=True)
class DiscrepancyCell:
    r: int
    outcome: Outcome
    realized_count: int
    realized_freq: float
    predicted_prob: float
    standard_error: float
    z: float


@dataclass(frozen=True)
class DiscrepancyReport:
    strategy: str
    n: int
    runs: int
    master_seed: int
    cells: tuple[DiscrepancyCell, ...]
    realized_win_total: float
    predicted_win_total: float

    @property
    def max_abs_z(self) -> float:
        return max((abs(cell.z) for cell in self.cells), default=0.0)

    @property
    def insufficient_runs(self) -> bool:
        return self.runs == 0

    def agrees(self, threshold: float = 4.0) -> bool:
        return not self.insufficient_runs and self.max_abs_z <= threshold

    def cell(self, r: int, outcome: Outcome) -> DiscrepancyCell:
        for cell in self.cells:
            if cell.r == r and cell.outcome is outcome:
                return cell
        raise KeyError((r, outcome))

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for cell in self.cells:
            writer.writerow(
                [
                    cell.r,
                    cell.outcome.value,
                    cell.realized_count,
                    format_number(cell.realized_freq),
                    format_number(cell.predicted_prob),
                    format_number(cell.z),
                    f"{cell.realized_freq:.4f}",
                    f"{cell.predicted_prob:.4f}",
                    self.strategy,
                    self.master_seed,
                ]
            )
        return buffer.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy,
            "n": self.n,
            "runs": self.runs,
            "master_seed": self.master_seed,
            "realized_win_total": self.realized_win_total,
            "predicted_win_total": self.predicted_win_total,
            "max_abs_z": _finite_or_none(self.max_abs_z),
            "insufficient_runs": self.insufficient_runs,
            "cells": [
                {
                    "round": cell.r,
                    "outcome": cell.outcome.value,
                    "realized_count": cell.realized_count,
                    "realized_freq": cell.realized_freq,
                    "predicted_prob": cell.predicted_prob,
                    "standard_error": cell.standard_error,
                    "z": _finite_or_none(cell.z),
                }
                for cell in self.cells
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)


def compare_to_prediction(
    tally: "SimulationTally", table: RoundOutcomeTable
) -> DiscrepancyReport:
    """
    Realized frequency, predicted probability, binomial standard error and
    z-score for every terminal cell: wins in rounds ``1..n``, false positives
    and false negatives in rounds ``1..n-1``.
    """
    if tally.n != table.n:
        raise ValueError(f"tally has n={tally.n} but prediction has n={table.n}")
    runs = tally.runs
    counts = {
        Outcome.WIN: tally.win,
        Outcome.FALSE_POSITIVE: tally.fp,
        Outcome.FALSE_NEGATIVE: tally.fn,
    }

    cells: list[DiscrepancyCell] = []
    for outcome, column in counts.items():
        last = table.n if outcome is Outcome.WIN else table.n - 1
        for r in range(1, last + 1):
            count = int(column[r - 1])
            freq = count / runs if runs else 0.0
            p = table.row(r).get(outcome)
            se = math.sqrt(p * (1.0 - p) / runs) if runs else 0.0
            cells.append(
                DiscrepancyCell(
                    r=r,
                    outcome=outcome,
                    realized_count=count,
                    realized_freq=freq,
                    predicted_prob=p,
                    standard_error=se,
                    z=z_score(freq, p, se) if runs else (0.0 if p == 0 else math.inf),
                )
            )

    report = DiscrepancyReport(
        strategy=tally.strategy,
        n=tally.n,
        runs=runs,
        master_seed=tally.master_seed,
        cells=tuple(cells),
        realized_win_total=tally.win_rate,
        predicted_win_total=table.pw_total,
    )
    if report.insufficient_runs:
        logger.warning(f"{tally.strategy} n={tally.n}: no runs to compare")
    return report
