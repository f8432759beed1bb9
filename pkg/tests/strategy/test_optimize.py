import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stopkit.config import StopkitConfig
from stopkit.exceptions import ConvergenceWarning
from stopkit.gm import gm_cutoffs, naive_cutoffs
from stopkit.probability import outcome_table
from stopkit.strategy import (
    approx_cutoffs,
    log_linear_fit,
    optimal_single_k,
    optimize_cutoffs,
)

OPTIMAL_CUTOFFS = {
    2: (0.75, (0.5,)),
    4: (0.6474, (0.7575, 0.6921, 0.5876)),
    5: (0.6289, (0.8076, 0.7677, 0.7124, 0.6229)),
    6: (0.6169, (0.8406, 0.8138, 0.7791, 0.7309, 0.6524)),
    7: (0.6085, (0.8640, 0.8447, 0.8209, 0.7901, 0.7473, 0.6773)),
    8: (0.6024, (0.8814, 0.8669, 0.8495, 0.8280, 0.8004, 0.7618, 0.6985)),
    9: (0.5976, (0.8949, 0.8836, 0.8703, 0.8544, 0.8349, 0.8097, 0.7746, 0.7168)),
    10: (
        0.5939,
        (0.9056, 0.8965, 0.8861, 0.8739, 0.8593, 0.8414, 0.8182, 0.7860, 0.7329),
    ),
}

BEST_SINGLE_K = {
    2: (0.5, 0.75),
    3: (0.622839, 0.670256),
    4: (0.697839, 0.631163),
    5: (0.748138, 0.607973),
    10: (0.862793, 0.56222),
    30: (0.951433, 0.532206),
    50: (0.970499, 0.526251),
    100: (0.985111, 0.521797),
    1000: (0.998499, 0.517796),
    10000: (0.99985, 0.517396),
}


@pytest.fixture
def config():
    return StopkitConfig()


class TestApprox:
    def test_first_round(self):
        assert approx_cutoffs(100)[1] == pytest.approx(0.99 + 0.01 * math.log(0.99))
        assert approx_cutoffs(100)[1] == pytest.approx(0.98990, abs=1e-5)

    def test_last_round_is_zero(self):
        assert approx_cutoffs(7)[7] == 0.0

    def test_floored_at_zero(self):
        assert all(k >= 0.0 for k in approx_cutoffs(2))

    def test_rejects_single_round(self):
        with pytest.raises(ValueError):
            approx_cutoffs(1)

    @pytest.mark.parametrize(
        "n, naive, approx",
        [
            (100, 0.5304, 0.5632),
            (200, 0.5280, 0.5619),
            (500, 0.5265, 0.5611),
            (1000, 0.5260, 0.5608),
        ],
    )
    def test_large_n_totals(self, n, naive, approx):
        assert outcome_table(n, naive_cutoffs(n)).pw_total == pytest.approx(naive, abs=1e-3)
        assert outcome_table(n, approx_cutoffs(n)).pw_total == pytest.approx(approx, abs=1e-3)


@pytest.mark.slow
def test_two_thousand_rounds():
    n = 2000
    assert outcome_table(n, naive_cutoffs(n)).pw_total == pytest.approx(0.5257, abs=1e-3)
    assert outcome_table(n, approx_cutoffs(n)).pw_total == pytest.approx(0.5607, abs=1e-3)


@pytest.mark.parametrize("n", sorted(BEST_SINGLE_K))
def test_optimal_single_k(n):
    k, pw = optimal_single_k(n)
    expected_k, expected_pw = BEST_SINGLE_K[n]
    assert k == pytest.approx(expected_k, abs=1e-5)
    assert pw == pytest.approx(expected_pw, abs=1e-5)


class TestOptimizeCutoffs:
    def test_three_rounds(self, config):
        result = optimize_cutoffs(3, config=config)
        assert result.converged
        assert result.cutoffs.values[:2] == pytest.approx((0.672608, 0.545532), abs=2e-6)
        assert result.pw_total == pytest.approx(0.679846, abs=2e-6)

    @pytest.mark.parametrize("n", sorted(OPTIMAL_CUTOFFS))
    def test_reference_optima(self, n, config):
        pw, ks = OPTIMAL_CUTOFFS[n]
        result = optimize_cutoffs(n, config=config)
        assert result.pw_total == pytest.approx(pw, abs=1e-4)
        assert result.cutoffs.values[:-1] == pytest.approx(ks, abs=1e-4)
        assert result.cutoffs[n] == 0.0
        assert result.pw_total == pytest.approx(
            outcome_table(n, result.cutoffs).pw_total, abs=1e-12
        )

    @settings(max_examples=20, deadline=None)
    @given(st.floats(min_value=0.01, max_value=0.99))
    def test_two_rounds_from_any_start(self, start):
        result = optimize_cutoffs(2, init=[start], config=StopkitConfig())
        assert result.cutoffs[1] == pytest.approx(0.5, abs=1e-6)
        assert result.pw_total == pytest.approx(0.75, abs=1e-12)

    def test_start_does_not_matter(self, config):
        default = optimize_cutoffs(3, config=config)
        moved = optimize_cutoffs(3, init=[0.9, 0.9], config=config)
        assert moved.cutoffs.values == pytest.approx(default.cutoffs.values, abs=1e-6)

    def test_start_at_one_stays_below_one(self, config):
        result = optimize_cutoffs(3, init=[1.0, 1.0], config=config)
        assert result.converged
        assert all(k < 1.0 for k in result.cutoffs.values)
        assert result.cutoffs.values[:2] == pytest.approx((0.672608, 0.545532), abs=2e-6)

    def test_strictly_decreasing(self, config):
        ks = optimize_cutoffs(10, config=config).cutoffs.values
        assert all(a - b > 1e-9 for a, b in zip(ks, ks[1:]))

    def test_approx_sits_below_optimum(self, config):
        optimal = optimize_cutoffs(10, config=config).cutoffs.array
        assert np.all(approx_cutoffs(10).array <= optimal + 1e-3)

    def test_emergent_mode_agrees(self, config):
        enforced = optimize_cutoffs(6, config=config)
        emergent = optimize_cutoffs(6, monotone="emergent", config=config)
        assert emergent.notes == ()
        assert emergent.cutoffs.values == pytest.approx(enforced.cutoffs.values, abs=1e-6)

    def test_result_is_cached(self, config):
        first = optimize_cutoffs(5, config=config)
        assert optimize_cutoffs(5, config=config) is first

    def test_budget_exhaustion_warns(self):
        config = StopkitConfig(max_iterations=1)
        with pytest.warns(ConvergenceWarning):
            result = optimize_cutoffs(10, config=config)
        assert not result.converged
        assert result.cutoffs.n == 10

    def test_rejects_bad_arguments(self, config):
        with pytest.raises(ValueError):
            optimize_cutoffs(1, config=config)
        with pytest.raises(ValueError):
            optimize_cutoffs(4, monotone="sometimes", config=config)
        with pytest.raises(ValueError):
            optimize_cutoffs(4, init=[0.5], config=config)

    def test_to_dict(self, config):
        payload = optimize_cutoffs(2, config=config).to_dict()
        assert payload["n"] == 2
        assert payload["cutoffs"][-1] == 0.0
        assert payload["converged"] is True


@pytest.mark.slow
class TestHundredRounds:
    def test_four_strategy_predictions(self):
        config = StopkitConfig()
        n = 100
        optimal = optimize_cutoffs(n, config=config)
        assert outcome_table(n, naive_cutoffs(n)).pw_total == pytest.approx(0.5304, abs=1e-4)
        assert outcome_table(n, gm_cutoffs(n, config)).pw_total == pytest.approx(
            0.5405, abs=1e-4
        )
        assert optimal.pw_total == pytest.approx(0.5651, abs=1e-4)
        assert outcome_table(n, approx_cutoffs(n)).pw_total == pytest.approx(
            0.5632, abs=1e-4
        )
        assert np.all(approx_cutoffs(n).array <= optimal.cutoffs.array + 1e-3)

    def test_log_linear_shape(self):
        optimal = optimize_cutoffs(100, config=StopkitConfig())
        fit = log_linear_fit(optimal.cutoffs)
        assert fit.points == 95
        assert fit.correlation > 0.999
        assert fit.slope > 0.0


def test_log_linear_fit_on_approx():
    # approx cutoffs are exactly linear in log(n - r)
    fit = log_linear_fit(approx_cutoffs(50))
    assert fit.slope == pytest.approx(1 / 50)
    assert fit.intercept == pytest.approx(1 - 1 / 50 - math.log(50) / 50)
    assert fit.correlation == pytest.approx(1.0)


def test_log_linear_fit_needs_enough_rounds():
    with pytest.raises(ValueError):
        log_linear_fit(approx_cutoffs(6))
