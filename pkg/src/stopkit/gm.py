"""
Gilbert–Mosteller baseline: indifference numbers, their per-round win
formula, the naive strategy and the single-k Poisson asymptote.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import optimize, stats

from .config import StopkitConfig, default_config
from .exceptions import InvalidCutoffsError
from .types import CutoffVector, as_cutoffs

logger = logging.getLogger("stopkit.gm")

INDIFFERENCE_XTOL = 1e-14
SERIES_RTOL = 1e-16


@dataclass(frozen=True)
class IndifferenceTable:
    max_i: int
    values: tuple[float, ...]

    def __getitem__(self, i: int) -> float:
        """Returns ``k_i`` for ``i`` rounds remaining (1-based)."""
        if not 1 <= i <= self.max_i:
            raise IndexError(f"i={i} outside 1..{self.max_i}")
        return self.values[i - 1]


@dataclass(frozen=True)
class GmAsymptote:
    mu: float
    value: float
    terms: int
    last_term: float


@dataclass(frozen=True)
class TruncatedSingleK:
    t: int
    k: float
    pwin: float


def indifference_residual(i: int, k: float) -> float:
    """
    Win probability from continuing minus the probability ``k**(i-1)`` that
    the current draw at value ``k`` is the maximum of the ``i`` remaining.
    """
    m = i - 1
    if m == 0:
        return -1.0
    j = np.arange(1, m + 1)
    # each of the m later draws beats k with probability 1-k
    beats = stats.binom.pmf(j, m, 1.0 - k)
    return float(math.fsum(beats / j) - k**m)


def _solve_indifference(i: int) -> float:
    if i == 1:
        return 0.0
    lo = max(0.5, 1.0 - 2.0 / i)
    if indifference_residual(i, lo) <= 0.0:
        lo = 0.5
    f_lo = indifference_residual(i, lo)
    if f_lo == 0.0:
        return lo
    root, result = optimize.brentq(
        lambda k: indifference_residual(i, k),
        lo,
        1.0,
        xtol=INDIFFERENCE_XTOL,
        full_output=True,
    )
    logger.debug(
        f"indifference i={i}: k={root!r} after {result.iterations} iterations"
    )
    return float(root)


def gm_indifference_number(i: int, config: Optional[StopkitConfig] = None) -> float:
    """Cutoff at which accepting and continuing are equally good with ``i``
    rounds left, the current one included."""
    if i < 1:
        raise ValueError(f"remaining rounds must be at least 1, got {i}")
    config = config or default_config()
    return config.cache.get_or_compute(f"gm:{i}", lambda: _solve_indifference(i))


def gm_indifference_table(
    max_i: int, config: Optional[StopkitConfig] = None
) -> IndifferenceTable:
    if max_i < 1:
        raise ValueError(f"max_i must be at least 1, got {max_i}")
    values = tuple(gm_indifference_number(i, config) for i in range(1, max_i + 1))
    return IndifferenceTable(max_i=max_i, values=values)


def gm_cutoffs(n: int, config: Optional[StopkitConfig] = None) -> CutoffVector:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return CutoffVector.of(
        gm_indifference_number(n - j + 1, config) for j in range(1, n + 1)
    )


def naive_cutoffs(n: int) -> CutoffVector:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return CutoffVector.of(1.0 - 1.0 / (n - j + 1) for j in range(1, n + 1))


def _gm_rounds(k: np.ndarray, n: int) -> np.ndarray:
    out = np.empty(n)
    out[0] = 1.0 / n - k[0] ** n / n
    pow_n = np.power(k, n)
    tail = np.cumsum(pow_n)
    for r in range(1, n):
        early = math.fsum(np.power(k[:r], r))
        out[r] = (
            early / (r * (n - r))
            - tail[r - 1] / (n * (n - r))
            - pow_n[r] / n
        )
    return out


def gm_round_win_probabilities(
    n: int, cutoffs: CutoffVector | Sequence[float]
) -> list[float]:
    """Per-round win probability ``P(1)..P(n)`` under the GM formula."""
    cutoffs = as_cutoffs(cutoffs)
    if cutoffs.n != n:
        raise InvalidCutoffsError(f"expected {n} cutoffs, got {cutoffs.n}")
    if not cutoffs.is_monotone:
        raise InvalidCutoffsError("the GM formula needs nonincreasing cutoffs")
    return [float(p) for p in _gm_rounds(cutoffs.array, n)]


def gm_round_win_probability(
    n: int, r: int, cutoffs: CutoffVector | Sequence[float]
) -> float:
    if not 1 <= r <= n:
        raise ValueError(f"round r={r} outside 1..{n}")
    return gm_round_win_probabilities(n, cutoffs)[r - 1]


def gm_total_win_probability(
    n: int, cutoffs: Optional[CutoffVector | Sequence[float]] = None
) -> float:
    """Total GM win probability, at the GM cutoffs unless others are given."""
    if cutoffs is None:
        cutoffs = gm_cutoffs(n)
    return math.fsum(gm_round_win_probabilities(n, cutoffs))


def _poisson_series(mu: float) -> tuple[float, int, float]:
    if mu <= 0.0:
        return 0.0, 0, 0.0
    term = mu * math.exp(-mu)
    total = term
    i = 1
    while True:
        term *= mu / (i + 1) * i / (i + 1)
        i += 1
        total += term
        if i > mu and term < SERIES_RTOL * total:
            return total, i, term


def poisson_win_series(mu: float) -> float:
    """``sum_i e^-mu mu^i / (i! i)`` for ``i >= 1``."""
    return _poisson_series(mu)[0]


def gm_single_k_asymptote() -> GmAsymptote:
    """Large-n limit of the best single-cutoff win probability."""
    result = optimize.minimize_scalar(
        lambda mu: -poisson_win_series(mu),
        bounds=(0.5, 5.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    mu = float(result.x)
    value, terms, last = _poisson_series(mu)
    logger.debug(f"asymptote mu={mu!r} value={value!r} using {terms} terms")
    return GmAsymptote(mu=mu, value=value, terms=terms, last_term=last)


def gm_truncated_single_k(n: int, t_max: Optional[int] = None) -> TruncatedSingleK:
    """
    Best GM win probability using one cutoff ``k`` for the first ``t`` rounds
    and 0 afterwards, searched over every integer ``t < n``.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    t_max = n - 1 if t_max is None else min(t_max, n - 1)

    best = TruncatedSingleK(t=0, k=0.0, pwin=1.0 / n)
    for t in range(1, t_max + 1):

        def loss(k: float) -> float:
            k_vec = np.zeros(n)
            k_vec[:t] = k
            return -math.fsum(_gm_rounds(k_vec, n))

        result = optimize.minimize_scalar(
            loss, bounds=(0.0, 1.0 - 1e-12), method="bounded",
            options={"xatol": 1e-10},
        )
        pwin = -float(result.fun)
        if pwin > best.pwin:
            best = TruncatedSingleK(t=t, k=float(result.x), pwin=pwin)

    logger.debug(f"truncated single-k n={n}: {best}")
    return best
