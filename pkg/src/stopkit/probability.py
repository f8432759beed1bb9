"""Closed-form outcome probabilities for threshold strategies."""

import logging
import math
from typing import Sequence

import numpy as np

from .exceptions import InvalidCutoffsError
from .types import CutoffVector, RoundOutcome, RoundOutcomeTable, as_cutoffs

logger = logging.getLogger("stopkit.probability")

CONSERVATION_TOL = 1e-12


def _check(n: int, r: int, cutoffs: CutoffVector, lowest: int = 1) -> None:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if cutoffs.n != n:
        raise InvalidCutoffsError(f"expected {n} cutoffs, got {cutoffs.n}")
    if not lowest <= r <= n:
        raise ValueError(f"round r={r} outside {lowest}..{n}")


def exponent(i: int, j: int, n: int, r: int) -> int:
    """Power of ``k_j`` in the i-th correction term of ``PC(n, r)``."""
    if not (1 <= i <= r <= n and 1 <= j <= r):
        raise ValueError(f"need 1 <= i, j <= r <= n, got i={i} j={j} r={r} n={n}")
    if i == j:
        return n - r + i
    return 1 if i < j else 0


def coefficient(i: int, n: int, r: int) -> float:
    """Coefficient ``g(i, n, r)`` of the i-th correction term, for ``r < n``."""
    if not 1 <= i <= r < n:
        raise ValueError(f"need 1 <= i <= r < n, got i={i} r={r} n={n}")
    return (n - r) / ((n - r + i - 1) * (n - r + i))


def _continue_raw(k: np.ndarray, n: int, r: int) -> float:
    if r == 0:
        return 1.0
    if r == n:
        return 0.0
    ks = k[:r]
    # suffix[t] = k_{t+1} * ... * k_r, suffix[r] = 1
    suffix = np.ones(r + 1)
    suffix[:r] = np.cumprod(ks[::-1])[::-1]
    i = np.arange(1, r + 1)
    g = (n - r) / ((n - r + i - 1) * (n - r + i))
    terms = g * np.power(ks, n - r + i) * suffix[1:]
    return float(suffix[0] - math.fsum(terms))


def _clamp(value: float, label: str) -> float:
    if value < -CONSERVATION_TOL or value > 1.0 + CONSERVATION_TOL:
        logger.warning(f"{label}={value!r} fell outside [0, 1] before clamping")
    return min(1.0, max(0.0, value))


def continue_probability(
    n: int, r: int, cutoffs: CutoffVector | Sequence[float]
) -> float:
    """Probability that none of the first ``r`` draws was accepted and the
    maximum of the game is not among them. ``PC(n, 0) = 1``."""
    cutoffs = as_cutoffs(cutoffs)
    _check(n, r, cutoffs, lowest=0)
    return _clamp(_continue_raw(cutoffs.array, n, r), f"PC({n},{r})")


def false_negative_probability(
    n: int, r: int, cutoffs: CutoffVector | Sequence[float]
) -> float:
    cutoffs = as_cutoffs(cutoffs)
    _check(n, r, cutoffs)
    return cutoffs[r] ** n / n


def win_probability_at_round(
    n: int, r: int, cutoffs: CutoffVector | Sequence[float]
) -> float:
    cutoffs = as_cutoffs(cutoffs)
    _check(n, r, cutoffs)
    raw = _continue_raw(cutoffs.array, n, r - 1) / (n - r + 1) - cutoffs[r] ** n / n
    return _clamp(raw, f"PW({n},{r})")


def false_positive_probability_at_round(
    n: int, r: int, cutoffs: CutoffVector | Sequence[float]
) -> float:
    cutoffs = as_cutoffs(cutoffs)
    _check(n, r, cutoffs)
    if r == n:
        return 0.0
    k = cutoffs.array
    pc_prev = _continue_raw(k, n, r - 1)
    pfn = cutoffs[r] ** n / n
    pw = pc_prev / (n - r + 1) - pfn
    raw = pc_prev - pw - pfn - _continue_raw(k, n, r)
    return _clamp(raw, f"PFP({n},{r})")


def outcome_table(
    n: int, cutoffs: CutoffVector | Sequence[float]
) -> RoundOutcomeTable:
    """Per-round W/FP/FN/C probabilities for every round of the game.

    PFP is the remainder of ``PC(r-1)`` after PW, PFN and ``PC(r)``, so each
    row conserves mass by construction. Before clamping, every row is checked
    for a negative PW or PFP and for a PC that grows from one round to the
    next. For nonincreasing cutoffs that raises ``ArithmeticError``. Rising
    cutoffs, where the closed form is not exact, only log a warning.
    """
    cutoffs = as_cutoffs(cutoffs)
    _check(n, 1, cutoffs)
    k = cutoffs.array

    rows: list[RoundOutcome] = []
    monotone = cutoffs.is_monotone
    pc_prev = 1.0
    for r in range(1, n + 1):
        pfn = float(k[r - 1]) ** n / n
        pw = pc_prev / (n - r + 1) - pfn
        pc = _continue_raw(k, n, r)
        pfp = 0.0 if r == n else pc_prev - pw - pfn - pc

        if min(pw, pfp) < -CONSERVATION_TOL or pc > pc_prev + CONSERVATION_TOL:
            message = (
                f"round {r} of n={n}: PW={pw!r} PFP={pfp!r} PC={pc!r} "
                f"with PC(r-1)={pc_prev!r}"
            )
            if monotone:
                raise ArithmeticError(message)
            logger.warning(f"{message} for rising cutoffs {cutoffs.values}")
        rows.append(
            RoundOutcome(
                r=r,
                pw=_clamp(pw, f"PW({n},{r})"),
                pfp=_clamp(pfp, f"PFP({n},{r})"),
                pfn=_clamp(pfn, f"PFN({n},{r})"),
                pc=_clamp(pc, f"PC({n},{r})"),
            )
        )
        pc_prev = pc

    return RoundOutcomeTable(n=n, cutoffs=cutoffs, rows=tuple(rows))


def total_win_probability(cutoffs: CutoffVector | Sequence[float]) -> float:
    cutoffs = as_cutoffs(cutoffs)
    return outcome_table(cutoffs.n, cutoffs).pw_total


def win_value_and_gradient(k: np.ndarray, n: int) -> tuple[float, np.ndarray]:
    """Total win probability and its gradient with respect to ``k_1..k_{n-1}``.

    ``k`` is a raw array of length ``n``; ``k_n`` is treated as 0 whatever
    the array holds. Inputs are not validated.
    """
    k = np.asarray(k, dtype=np.float64)
    value = 1.0 / n
    grad = np.zeros(max(n - 1, 0))

    for s in range(1, n):
        ks = k[:s]
        i = np.arange(1, s + 1)
        e = n - s + i
        g = (n - s) / ((n - s + i - 1) * (n - s + i))
        a = g * np.power(ks, e)

        suffix = np.ones(s + 1)
        suffix[:s] = np.cumprod(ks[::-1])[::-1]
        prefix = np.ones(s + 1)
        prefix[1:] = np.cumprod(ks)

        # b[m] = sum_{i<m} a_i * k_{i+1} * ... * k_{m-1} (0-based m)
        b = np.zeros(s)
        for m in range(1, s):
            b[m] = b[m - 1] * ks[m - 1] + a[m - 1]

        value += (suffix[0] - math.fsum(a * suffix[1:])) / (n - s)
        d_pc = suffix[1:] * (prefix[:s] - b - g * e * np.power(ks, e - 1))
        grad[:s] += d_pc / (n - s)

    head = k[: n - 1]
    value -= math.fsum(np.power(head, n)) / n
    grad -= np.power(head, n - 1)
    return float(value), grad


def win_probability_gradient(cutoffs: CutoffVector | Sequence[float]) -> np.ndarray:
    cutoffs = as_cutoffs(cutoffs)
    return win_value_and_gradient(cutoffs.array, cutoffs.n)[1]


def harmonic_number(m: int) -> float:
    if m < 0:
        raise ValueError(f"harmonic number of negative order {m}")
    return math.fsum(1.0 / j for j in range(1, m + 1))


def _check_single_k(n: int, k: float) -> None:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if not math.isfinite(k) or not 0.0 <= k < 1.0:
        raise InvalidCutoffsError(f"single cutoff must lie in [0, 1), got k={k}")


def single_k_win_probability(n: int, k: float) -> float:
    """Win probability when ``k_1 = ... = k_{n-1} = k`` and ``k_n = 0``."""
    _check_single_k(n, k)
    if k == 0.0:
        return 1.0 / n
    m = np.arange(1, n + 1)
    head = math.fsum(np.power(k, n - m) / m)
    return float(head - k**n * harmonic_number(n - 1))


def single_k_round_win_probability(n: int, r: int, k: float) -> float:
    _check_single_k(n, k)
    if not 1 <= r <= n:
        raise ValueError(f"round r={r} outside 1..{n}")
    value = (k ** (r - 1) - k**n) / (n - r + 1)
    if r == n:
        value += k**n / n
    return value
