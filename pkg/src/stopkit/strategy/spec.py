from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from ..config import StopkitConfig
from ..exceptions import InvalidCutoffsError
from ..gm import gm_cutoffs, naive_cutoffs
from ..types import CutoffVector
from .optimize import approx_cutoffs, optimal_single_k, optimize_cutoffs


class StrategyKind(str, Enum):
    NAIVE = "naive"
    GM = "gm"
    SINGLE_K = "single_k"
    SINGLE_K_OPTIMAL = "single_k_optimal"
    APPROX = "approx"
    OPTIMAL = "optimal"
    EXPLICIT = "explicit"

    @classmethod
    def parse(cls, name: str) -> "StrategyKind":
        try:
            return cls(name.strip().lower().replace("-", "_"))
        except ValueError:
            choices = ", ".join(kind.value for kind in cls)
            raise ValueError(f"unknown strategy {name!r}, expected one of {choices}")


@dataclass(frozen=True)
class StrategySpec:
    """
    A named way of producing a cutoff vector for a game of length ``n``.

    ``single_k`` needs ``k`` and ``explicit`` needs ``values``; the other
    kinds are fully determined by ``n``.
    """

    kind: StrategyKind
    n: int
    k: Optional[float] = None
    values: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")

        if self.kind is StrategyKind.EXPLICIT:
            if self.values is None:
                raise InvalidCutoffsError("an explicit strategy needs cutoff values")
            values = tuple(float(v) for v in self.values)
            object.__setattr__(self, "values", values)
            if len(values) != self.n:
                raise InvalidCutoffsError(
                    f"expected {self.n} explicit cutoffs, got {len(values)}"
                )
            CutoffVector(values)
        elif self.kind is StrategyKind.SINGLE_K:
            if self.k is None:
                raise InvalidCutoffsError("a single_k strategy needs k")
            if not 0.0 <= self.k < 1.0:
                raise InvalidCutoffsError(f"single cutoff must lie in [0, 1), got {self.k}")

    @classmethod
    def explicit(cls, values: CutoffVector | Sequence[float]) -> "StrategySpec":
        values = tuple(values)
        return cls(StrategyKind.EXPLICIT, len(values), values=values)

    @property
    def label(self) -> str:
        if self.kind is StrategyKind.SINGLE_K:
            return f"single_k({self.k:g})"
        return self.kind.value

    def with_n(self, n: int) -> "StrategySpec":
        if self.kind is StrategyKind.EXPLICIT:
            if n != self.n:
                raise InvalidCutoffsError("an explicit strategy has a fixed length")
            return self
        return StrategySpec(self.kind, n, k=self.k)


def cutoffs_for(
    spec: StrategySpec, config: Optional[StopkitConfig] = None
) -> CutoffVector:
    n = spec.n
    match spec.kind:
        case StrategyKind.NAIVE:
            return naive_cutoffs(n)
        case StrategyKind.GM:
            return gm_cutoffs(n, config)
        case StrategyKind.SINGLE_K:
            assert spec.k is not None
            return CutoffVector.of([spec.k] * (n - 1) + [0.0])
        case StrategyKind.SINGLE_K_OPTIMAL:
            if n == 1:
                return CutoffVector((0.0,))
            k, _ = optimal_single_k(n)
            return CutoffVector.of([k] * (n - 1) + [0.0])
        case StrategyKind.APPROX:
            return approx_cutoffs(n) if n > 1 else CutoffVector((0.0,))
        case StrategyKind.OPTIMAL:
            if n == 1:
                return CutoffVector((0.0,))
            return optimize_cutoffs(n, config=config).cutoffs
        case StrategyKind.EXPLICIT:
            assert spec.values is not None
            return CutoffVector(spec.values)
