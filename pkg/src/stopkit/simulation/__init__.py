from .engine import (
    RunRecord,
    SimulationTally,
    compare_strategies,
    play_run,
    simulate,
    tally_draws,
)
from .report import DiscrepancyCell, DiscrepancyReport, compare_to_prediction

__all__ = [
    "DiscrepancyCell",
    "DiscrepancyReport",
    "RunRecord",
    "SimulationTally",
    "compare_strategies",
    "compare_to_prediction",
    "play_run",
    "simulate",
    "tally_draws",
]
