from stopkit.helper.version import __version__, __version_tuple__

from .probability import (
    continue_probability,
    false_negative_probability,
    false_positive_probability_at_round,
    outcome_table,
    single_k_win_probability,
    win_probability_at_round,
)
from .types import CutoffVector, Outcome, RoundOutcomeTable

__all__ = [
    "CutoffVector",
    "Outcome",
    "RoundOutcomeTable",
    "__version__",
    "__version_tuple__",
    "continue_probability",
    "false_negative_probability",
    "false_positive_probability_at_round",
    "outcome_table",
    "single_k_win_probability",
    "win_probability_at_round",
]
