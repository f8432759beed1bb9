import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import InvalidCutoffsError, NonMonotoneCutoffsWarning

logger = logging.getLogger("stopkit.types")

MONOTONE_TOL = 1e-12


class Outcome(str, Enum):
    WIN = "W"
    FALSE_POSITIVE = "FP"
    FALSE_NEGATIVE = "FN"
    CONTINUE = "C"


@dataclass(frozen=True)
class CutoffVector:
    """
    Decision numbers ``k_1..k_n`` for a game of length ``n``.

    The player accepts draw ``a_r`` iff ``a_r >= k_r``. The last entry must be
    0 and the vector nonincreasing; with ``permissive=True`` a non-monotone
    vector is accepted with a warning, but the closed forms are no longer
    exact for it.
    """

    values: tuple[float, ...]
    permissive: bool = False
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)

        if len(values) == 0:
            raise InvalidCutoffsError("a cutoff vector needs at least one round")
        for j, v in enumerate(values, start=1):
            if not math.isfinite(v) or v < 0.0 or v > 1.0:
                raise InvalidCutoffsError(f"k_{j}={v} is outside [0, 1]")
        if values[-1] != 0.0:
            raise InvalidCutoffsError(
                f"the last cutoff must be 0, got k_{len(values)}={values[-1]}"
            )

        notes: list[str] = []
        rising = [
            j
            for j in range(1, len(values))
            if values[j] - values[j - 1] > MONOTONE_TOL
        ]
        if rising:
            message = (
                "cutoffs are not nonincreasing at rounds "
                + ", ".join(f"{j}->{j + 1}" for j in rising)
            )
            if not self.permissive:
                raise InvalidCutoffsError(message)
            warnings.warn(
                f"{message}; closed-form probabilities are not exact",
                NonMonotoneCutoffsWarning,
                stacklevel=3,
            )
            notes.append(message)

        ones = [j for j, v in enumerate(values, start=1) if v == 1.0]
        if ones:
            logger.debug(f"k=1 at rounds {ones}: those rounds never accept")
            notes.append(f"k=1 at rounds {', '.join(map(str, ones))}")

        object.__setattr__(self, "notes", tuple(notes))

    @classmethod
    def of(cls, values: Iterable[float], permissive: bool = False) -> "CutoffVector":
        return cls(tuple(values), permissive=permissive)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.values, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @property
    def is_monotone(self) -> bool:
        return not any(
            self.values[j] - self.values[j - 1] > MONOTONE_TOL
            for j in range(1, self.n)
        )

    def __getitem__(self, r: int) -> float:
        """Returns ``k_r`` using the 1-based round index."""
        if not 1 <= r <= self.n:
            raise IndexError(f"round {r} outside 1..{self.n}")
        return self.values[r - 1]

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class RoundOutcome:
    r: int
    pw: float
    pfp: float
    pfn: float
    pc: float

    def get(self, outcome: Outcome) -> float:
        match outcome:
            case Outcome.WIN:
                return self.pw
            case Outcome.FALSE_POSITIVE:
                return self.pfp
            case Outcome.FALSE_NEGATIVE:
                return self.pfn
            case Outcome.CONTINUE:
                return self.pc


@dataclass(frozen=True)
class RoundOutcomeTable:
    n: int
    cutoffs: CutoffVector
    rows: tuple[RoundOutcome, ...]

    @property
    def pw_total(self) -> float:
        return math.fsum(row.pw for row in self.rows)

    @property
    def pfp_total(self) -> float:
        return math.fsum(row.pfp for row in self.rows)

    @property
    def pfn_total(self) -> float:
        return math.fsum(row.pfn for row in self.rows)

    @property
    def totals(self) -> tuple[float, float, float]:
        return (self.pw_total, self.pfp_total, self.pfn_total)

    def row(self, r: int) -> RoundOutcome:
        if not 1 <= r <= self.n:
            raise IndexError(f"round {r} outside 1..{self.n}")
        return self.rows[r - 1]

    def cumulative_win(self) -> list[float]:
        return list(np.cumsum([row.pw for row in self.rows]))

    def to_rows(self) -> list[dict[str, float | int]]:
        return [
            {"r": row.r, "pw": row.pw, "pfp": row.pfp, "pfn": row.pfn, "pc": row.pc}
            for row in self.rows
        ]


def as_cutoffs(values: "CutoffVector | Sequence[float]") -> CutoffVector:
    if isinstance(values, CutoffVector):
        return values
    return CutoffVector.of(values)
