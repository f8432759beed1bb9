"""
Hand-integrated polynomials for small games, kept as exact reference values.

Cells are written out term by term rather than generated, so they stay an
independent check of the general formulas.
"""

from fractions import Fraction
from typing import Callable, Sequence

from ..types import CutoffVector, Outcome, as_cutoffs

W, FP, FN, C = (
    Outcome.WIN,
    Outcome.FALSE_POSITIVE,
    Outcome.FALSE_NEGATIVE,
    Outcome.CONTINUE,
)

Poly = Callable[[Sequence[float]], float]


def _zero(k: Sequence[float]) -> float:
    return 0.0


_N2: dict[tuple[int, Outcome], Poly] = {
    (1, W): lambda k: 1 / 2 - k[0] ** 2 / 2,
    (1, FP): lambda k: 1 / 2 - k[0] + k[0] ** 2 / 2,
    (1, FN): lambda k: k[0] ** 2 / 2,
    (1, C): lambda k: k[0] - k[0] ** 2 / 2,
    (2, W): lambda k: k[0] - k[0] ** 2 / 2,
    (2, FP): _zero,
    (2, FN): _zero,
    (2, C): _zero,
}

_N3: dict[tuple[int, Outcome], Poly] = {
    (1, W): lambda k: 1 / 3 - k[0] ** 3 / 3,
    (1, FP): lambda k: 2 / 3 - k[0] + k[0] ** 3 / 3,
    (1, FN): lambda k: k[0] ** 3 / 3,
    (1, C): lambda k: k[0] - k[0] ** 3 / 3,
    (2, W): lambda k: k[0] / 2 - k[0] ** 3 / 6 - k[1] ** 3 / 3,
    (2, FP): lambda k: (
        k[0] / 2
        - k[0] ** 3 / 6
        - k[0] * k[1]
        + k[0] ** 2 * k[1] / 2
        + k[1] ** 3 / 6
    ),
    (2, FN): lambda k: k[1] ** 3 / 3,
    (2, C): lambda k: k[0] * k[1] - k[0] ** 2 * k[1] / 2 - k[1] ** 3 / 6,
    (3, W): lambda k: k[0] * k[1] - k[0] ** 2 * k[1] / 2 - k[1] ** 3 / 6,
    (3, FP): _zero,
    (3, FN): _zero,
    (3, C): _zero,
}


def _n4_c3(k: Sequence[float]) -> float:
    a, b, c = k[0], k[1], k[2]
    return a * b * c - a**2 * b * c / 2 - b**3 * c / 6 - c**4 / 12


_N4: dict[tuple[int, Outcome], Poly] = {
    (1, W): lambda k: 1 / 4 - k[0] ** 4 / 4,
    (1, FP): lambda k: 3 / 4 - k[0] + k[0] ** 4 / 4,
    (1, FN): lambda k: k[0] ** 4 / 4,
    (1, C): lambda k: k[0] - k[0] ** 4 / 4,
    (2, W): lambda k: k[0] / 3 - k[0] ** 4 / 12 - k[1] ** 4 / 4,
    (2, FP): lambda k: (
        2 * k[0] / 3
        - k[0] ** 4 / 6
        - k[0] * k[1]
        + k[0] ** 3 * k[1] / 3
        + k[1] ** 4 / 6
    ),
    (2, FN): lambda k: k[1] ** 4 / 4,
    (2, C): lambda k: k[0] * k[1] - k[0] ** 3 * k[1] / 3 - k[1] ** 4 / 6,
    (3, W): lambda k: (
        k[0] * k[1] / 2 - k[0] ** 3 * k[1] / 6 - k[1] ** 4 / 12 - k[2] ** 4 / 4
    ),
    (3, FP): lambda k: (
        k[0] * k[1] / 2
        - k[0] ** 3 * k[1] / 6
        - k[1] ** 4 / 12
        - k[0] * k[1] * k[2]
        + k[0] ** 2 * k[1] * k[2] / 2
        + k[1] ** 3 * k[2] / 6
        + k[2] ** 4 / 12
    ),
    (3, FN): lambda k: k[2] ** 4 / 4,
    (3, C): _n4_c3,
    (4, W): _n4_c3,
    (4, FP): _zero,
    (4, FN): _zero,
    (4, C): _zero,
}

_N5_C: dict[int, Poly] = {
    1: lambda k: k[0] - k[0] ** 5 / 5,
    2: lambda k: k[0] * k[1] - k[0] ** 4 * k[1] / 4 - 3 * k[1] ** 5 / 20,
    3: lambda k: (
        k[0] * k[1] * k[2]
        - k[0] ** 3 * k[1] * k[2] / 3
        - k[1] ** 4 * k[2] / 6
        - k[2] ** 5 / 10
    ),
    4: lambda k: (
        k[0] * k[1] * k[2] * k[3]
        - k[0] ** 2 * k[1] * k[2] * k[3] / 2
        - k[1] ** 3 * k[2] * k[3] / 6
        - k[2] ** 4 * k[3] / 12
        - k[3] ** 5 / 20
    ),
    5: _zero,
}

_N6_C: dict[int, Poly] = {
    1: lambda k: k[0] - k[0] ** 6 / 6,
    2: lambda k: k[0] * k[1] - k[0] ** 5 * k[1] / 5 - 2 * k[1] ** 6 / 15,
    3: lambda k: (
        k[0] * k[1] * k[2]
        - k[0] ** 4 * k[1] * k[2] / 4
        - 3 * k[1] ** 5 * k[2] / 20
        - k[2] ** 6 / 10
    ),
    4: lambda k: (
        k[0] * k[1] * k[2] * k[3]
        - k[0] ** 3 * k[1] * k[2] * k[3] / 3
        - k[1] ** 4 * k[2] * k[3] / 6
        - k[2] ** 5 * k[3] / 10
        - k[3] ** 6 / 15
    ),
    5: lambda k: (
        k[0] * k[1] * k[2] * k[3] * k[4]
        - k[0] ** 2 * k[1] * k[2] * k[3] * k[4] / 2
        - k[1] ** 3 * k[2] * k[3] * k[4] / 6
        - k[2] ** 4 * k[3] * k[4] / 12
        - k[3] ** 5 * k[4] / 20
        - k[4] ** 6 / 30
    ),
    6: _zero,
}


def _fn_cell(n: int, r: int) -> Poly:
    return lambda k: k[r - 1] ** n / n


def _continuation_only(n: int, table: dict[int, Poly]) -> dict[tuple[int, Outcome], Poly]:
    cells: dict[tuple[int, Outcome], Poly] = {}
    for r, poly in table.items():
        cells[(r, C)] = poly
        cells[(r, FN)] = _fn_cell(n, r) if r < n else _zero
    return cells


FIXTURES: dict[int, dict[tuple[int, Outcome], Poly]] = {
    2: _N2,
    3: _N3,
    4: _N4,
    5: _continuation_only(5, _N5_C),
    6: _continuation_only(6, _N6_C),
}

# PW with cutoffs (k, ..., k, 0): coefficients of k**(r-1) and k**n per round
IDENTICAL_K_WIN: dict[int, tuple[tuple[Fraction, Fraction], ...]] = {
    2: ((Fraction(1, 2), Fraction(-1, 2)), (Fraction(1), Fraction(-1, 2))),
    3: (
        (Fraction(1, 3), Fraction(-1, 3)),
        (Fraction(1, 2), Fraction(-1, 2)),
        (Fraction(1), Fraction(-2, 3)),
    ),
    4: (
        (Fraction(1, 4), Fraction(-1, 4)),
        (Fraction(1, 3), Fraction(-1, 3)),
        (Fraction(1, 2), Fraction(-1, 2)),
        (Fraction(1), Fraction(-3, 4)),
    ),
    5: (
        (Fraction(1, 5), Fraction(-1, 5)),
        (Fraction(1, 4), Fraction(-1, 4)),
        (Fraction(1, 3), Fraction(-1, 3)),
        (Fraction(1, 2), Fraction(-1, 2)),
        (Fraction(1), Fraction(-4, 5)),
    ),
    6: (
        (Fraction(1, 6), Fraction(-1, 6)),
        (Fraction(1, 5), Fraction(-1, 5)),
        (Fraction(1, 4), Fraction(-1, 4)),
        (Fraction(1, 3), Fraction(-1, 3)),
        (Fraction(1, 2), Fraction(-1, 2)),
        (Fraction(1), Fraction(-5, 6)),
    ),
}


def has_fixture(n: int, r: int, outcome: Outcome) -> bool:
    return (r, Outcome(outcome)) in FIXTURES.get(n, {})


def fixture_probability(
    n: int, r: int, outcome: Outcome, cutoffs: CutoffVector | Sequence[float]
) -> float:
    """Exact value of a tabulated cell; raises ``KeyError`` for cells without one."""
    cutoffs = as_cutoffs(cutoffs)
    if cutoffs.n != n:
        raise ValueError(f"expected {n} cutoffs, got {cutoffs.n}")
    poly = FIXTURES.get(n, {}).get((r, Outcome(outcome)))
    if poly is None:
        raise KeyError(f"no fixture for n={n} r={r} {Outcome(outcome).value}")
    return float(poly(cutoffs.values))


def identical_k_win_fixture(n: int, r: int, k: float) -> float:
    low, high = IDENTICAL_K_WIN[n][r - 1]
    return float(low) * k ** (r - 1) + float(high) * k**n
