import pytest

from stopkit.config import StopkitConfig
from stopkit.exceptions import InvalidCutoffsError
from stopkit.strategy import StrategyKind, StrategySpec, cutoffs_for


@pytest.fixture
def config():
    return StopkitConfig()


def test_naive(config):
    cutoffs = cutoffs_for(StrategySpec(StrategyKind.NAIVE, 3), config)
    assert cutoffs.values == pytest.approx((2 / 3, 0.5, 0.0))


def test_gm(config):
    cutoffs = cutoffs_for(StrategySpec(StrategyKind.GM, 3), config)
    assert cutoffs.values == pytest.approx((0.68989795, 0.5, 0.0), abs=1e-8)


def test_single_k(config):
    cutoffs = cutoffs_for(StrategySpec(StrategyKind.SINGLE_K, 4, k=0.7), config)
    assert cutoffs.values == (0.7, 0.7, 0.7, 0.0)


def test_single_k_optimal(config):
    cutoffs = cutoffs_for(StrategySpec(StrategyKind.SINGLE_K_OPTIMAL, 3), config)
    assert cutoffs[1] == pytest.approx(0.622839, abs=1e-6)
    assert cutoffs[2] == cutoffs[1]


def test_approx_and_optimal(config):
    approx = cutoffs_for(StrategySpec(StrategyKind.APPROX, 10), config)
    optimal = cutoffs_for(StrategySpec(StrategyKind.OPTIMAL, 10), config)
    assert approx.n == optimal.n == 10
    assert optimal[1] == pytest.approx(0.9056, abs=1e-4)


@pytest.mark.parametrize("kind", list(StrategyKind))
def test_single_round_games(kind, config):
    if kind is StrategyKind.EXPLICIT:
        spec = StrategySpec.explicit([0.0])
    else:
        spec = StrategySpec(kind, 1, k=0.3)
    assert cutoffs_for(spec, config).values == (0.0,)


def test_explicit_round_trip(config):
    spec = StrategySpec.explicit([0.9, 0.4, 0.0])
    assert cutoffs_for(spec, config).values == (0.9, 0.4, 0.0)
    assert spec.n == 3


def test_explicit_rejects_non_monotone():
    with pytest.raises(InvalidCutoffsError):
        StrategySpec.explicit([0.9, 0.3, 0.5, 0.0])


def test_single_k_needs_k():
    with pytest.raises(InvalidCutoffsError):
        StrategySpec(StrategyKind.SINGLE_K, 5)
    with pytest.raises(InvalidCutoffsError):
        StrategySpec(StrategyKind.SINGLE_K, 5, k=1.0)


@pytest.mark.parametrize(
    "name, kind",
    [
        ("naive", StrategyKind.NAIVE),
        ("GM", StrategyKind.GM),
        ("single-k", StrategyKind.SINGLE_K),
        ("single-k-optimal", StrategyKind.SINGLE_K_OPTIMAL),
    ],
)
def test_parse(name, kind):
    assert StrategyKind.parse(name) is kind


def test_parse_unknown():
    with pytest.raises(ValueError, match="unknown strategy"):
        StrategyKind.parse("greedy")


def test_labels_and_with_n():
    spec = StrategySpec(StrategyKind.SINGLE_K, 3, k=0.5)
    assert spec.label == "single_k(0.5)"
    assert spec.with_n(7).n == 7
    with pytest.raises(InvalidCutoffsError):
        StrategySpec.explicit([0.5, 0.0]).with_n(3)
