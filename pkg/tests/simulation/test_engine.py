import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stopkit.config import StopkitConfig
from stopkit.gm import gm_cutoffs, naive_cutoffs
from stopkit.probability import outcome_table
from stopkit.simulation import (
    SimulationTally,
    compare_strategies,
    compare_to_prediction,
    play_run,
    simulate,
    tally_draws,
)
from stopkit.strategy import StrategyKind, StrategySpec, optimize_cutoffs
from stopkit.types import CutoffVector, Outcome

SEED = 20240611
OPTIMAL_3 = CutoffVector.of([0.672608, 0.545532, 0.0])


@pytest.fixture
def config():
    return StopkitConfig(chunk_size=256)


class TestPlayRun:
    def test_first_draw_wins(self):
        record = play_run(CutoffVector.of([0.5, 0.0]), [0.7, 0.2])
        assert (record.v, record.pg, record.mp) == (1, 1, 1)

    def test_declined_then_won(self):
        record = play_run(CutoffVector.of([0.5, 0.0]), [0.3, 0.6])
        assert (record.v, record.pg, record.mp) == (1, 2, 2)

    def test_false_negative(self):
        record = play_run(OPTIMAL_3, [0.60, 0.40, 0.55])
        assert (record.pg, record.mp, record.v, record.fp) == (3, 1, 0, 0)
        assert record.m == 0.60

    def test_false_positive(self):
        record = play_run(OPTIMAL_3, [0.70, 0.90, 0.10])
        assert (record.pg, record.mp, record.v, record.fp) == (1, 2, 0, 1)

    def test_ties_go_to_first_index(self):
        record = play_run(CutoffVector.of([0.9, 0.0]), [0.5, 0.5])
        assert record.mp == 1
        assert record.pg == 2
        assert record.v == 0

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            play_run(OPTIMAL_3, [0.5, 0.5])

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(min_value=0.0, max_value=0.999), min_size=3, max_size=3))
    def test_record_invariants(self, draws):
        record = play_run(OPTIMAL_3, draws)
        assert record.v == (record.pg == record.mp)
        if not record.v:
            assert record.fp == (record.pg < record.mp)
        else:
            assert record.fp == 0


def test_vectorized_tally_matches_play_run():
    rng = np.random.default_rng(7)
    draws = rng.random((500, 3))
    tally = tally_draws(OPTIMAL_3, draws)
    win, fp, fn = np.zeros(3, int), np.zeros(3, int), np.zeros(3, int)
    for row in draws:
        record = play_run(OPTIMAL_3, row)
        if record.v:
            win[record.pg - 1] += 1
        elif record.fp:
            fp[record.pg - 1] += 1
        else:
            fn[record.mp - 1] += 1
    assert tally.win.tolist() == win.tolist()
    assert tally.fp.tolist() == fp.tolist()
    assert tally.fn.tolist() == fn.tolist()


def test_conditional_counts_by_hand():
    cutoffs = CutoffVector.of([0.5, 0.0])
    draws = np.array([[0.4, 0.9], [0.6, 0.1], [0.3, 0.2]])
    tally = tally_draws(cutoffs, draws)
    # only the first run is still live after round 1
    assert tally.cond_count.tolist() == [1, 0]
    assert tally.conditional_max_mean[0] == pytest.approx(0.9)
    assert math.isnan(tally.conditional_max_mean[1])


class TestSimulate:
    def test_partition(self, config):
        tally = simulate(OPTIMAL_3, 2000, SEED, config)
        assert tally.runs == 2000
        assert int(tally.win.sum() + tally.fp.sum() + tally.fn.sum()) == 2000
        assert int(tally.mp_counts.sum()) == 2000
        assert tally.fp[-1] == 0
        assert tally.fn[-1] == 0

    def test_single_run(self, config):
        tally = simulate(OPTIMAL_3, 1, SEED, config)
        assert tally.runs == 1
        assert int(tally.win.sum() + tally.fp.sum() + tally.fn.sum()) == 1

    @pytest.mark.parametrize("workers", [1, 4, 8])
    def test_independent_of_worker_count(self, workers):
        base = simulate(OPTIMAL_3, 3000, SEED, StopkitConfig(chunk_size=256))
        other = simulate(
            OPTIMAL_3, 3000, SEED, StopkitConfig(chunk_size=256, workers=workers)
        )
        assert other.to_dict() == base.to_dict()

    def test_seed_changes_result(self, config):
        a = simulate(OPTIMAL_3, 3000, SEED, config)
        b = simulate(OPTIMAL_3, 3000, SEED + 1, config)
        assert a.to_dict() != b.to_dict()

    def test_common_random_numbers(self, config):
        naive = simulate(naive_cutoffs(3), 3000, SEED, config)
        gm = simulate(gm_cutoffs(3, config), 3000, SEED, config)
        assert naive.mp_counts.tolist() == gm.mp_counts.tolist()
        assert naive.max_sum == gm.max_sum

    def test_strategy_spec_label(self, config):
        tally = simulate(StrategySpec(StrategyKind.NAIVE, 4), 100, SEED, config)
        assert tally.strategy == "naive"
        assert tally.cutoffs == naive_cutoffs(4).values

    @pytest.mark.parametrize("runs", [0, -3])
    def test_rejects_no_runs(self, runs, config):
        with pytest.raises(ValueError):
            simulate(OPTIMAL_3, runs, SEED, config)

    @pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
    def test_rejects_bad_seed(self, seed, config):
        with pytest.raises(ValueError):
            simulate(OPTIMAL_3, 10, seed, config)

    def test_agreement_at_moderate_size(self, config):
        tally = simulate(OPTIMAL_3, 200_000, SEED, StopkitConfig())
        report = compare_to_prediction(tally, outcome_table(3, OPTIMAL_3))
        assert report.max_abs_z < 5.0
        assert report.realized_win_total == pytest.approx(0.6798, abs=0.005)

    def test_merge_rejects_mismatch(self):
        a = SimulationTally(n=3, master_seed=1, cutoffs=OPTIMAL_3.values)
        b = SimulationTally(n=3, master_seed=2, cutoffs=OPTIMAL_3.values)
        with pytest.raises(ValueError):
            a + b


def test_compare_strategies_shares_runs(config):
    specs = [StrategySpec(StrategyKind.NAIVE, 1), StrategySpec(StrategyKind.GM, 1)]
    reports = compare_strategies(specs, 5, 4000, SEED, config)
    assert list(reports) == ["naive", "gm"]
    for report in reports.values():
        assert report.n == 5
        assert report.master_seed == SEED
        assert report.max_abs_z < 5.0


def _conditional_max(n: int, k1: float) -> float:
    # E[max | round 1 declined and not the maximum]
    numerator = (n - 1) / n * (k1 - k1 ** (n + 1) / (n + 1))
    denominator = k1 - k1**n / n
    return numerator / denominator


@pytest.mark.parametrize(
    ("cutoffs", "published"),
    [
        ((0.8076, 0.7677, 0.7124, 0.6229, 0.0), 0.824),
        (
            (0.9056, 0.8965, 0.8861, 0.8739, 0.8593, 0.8414, 0.8182, 0.7860, 0.7329, 0.0),
            0.907,
        ),
    ],
)
def test_conditional_maximum_matches_closed_form(cutoffs, published):
    n = len(cutoffs)
    expected = _conditional_max(n, cutoffs[0])
    assert expected == pytest.approx(published, abs=0.002)
    config = StopkitConfig(chunk_size=8192)
    tally = simulate(CutoffVector.of(cutoffs), 200_000, SEED, config)
    assert tally.conditional_max_mean[0] == pytest.approx(expected, abs=0.003)


@pytest.mark.slow
class TestMillionRuns:
    """Million-run checks against the closed forms."""

    RUNS = 1_000_000

    @pytest.mark.parametrize("n", [3, 5, 10])
    @pytest.mark.parametrize("kind", ["naive", "gm", "optimal"])
    def test_every_cell_within_four_errors(self, n, kind):
        config = StopkitConfig(workers=4)
        spec = StrategySpec(StrategyKind.parse(kind), n)
        report = compare_strategies([spec], n, self.RUNS, SEED, config)[spec.label]
        assert report.max_abs_z <= 4.0

    @pytest.mark.parametrize("n", [3, 5, 10])
    def test_maximum_statistics(self, n):
        tally = simulate(naive_cutoffs(n), self.RUNS, SEED, StopkitConfig(workers=4))
        assert np.all(np.abs(tally.mp_frequencies - 1 / n) <= 0.002)
        assert abs(tally.mean_max - n / (n + 1)) <= 5 * tally.max_standard_error

    def test_conditional_maximum_three_rounds(self):
        tally = simulate(OPTIMAL_3, self.RUNS, SEED, StopkitConfig(workers=4))
        expected = _conditional_max(3, OPTIMAL_3[1])
        assert expected == pytest.approx(0.724, abs=0.002)
        assert tally.conditional_max_mean[0] == pytest.approx(expected, abs=0.002)

    @pytest.mark.parametrize(("n", "published"), [(5, 0.824), (10, 0.907)])
    def test_conditional_maximum_after_first_round(self, n, published):
        cutoffs = optimize_cutoffs(n, config=StopkitConfig()).cutoffs
        tally = simulate(cutoffs, self.RUNS, SEED, StopkitConfig(workers=4))
        expected = _conditional_max(n, cutoffs[1])
        assert expected == pytest.approx(published, abs=0.002)
        assert tally.conditional_max_mean[0] == pytest.approx(published, abs=0.002)
        assert tally.conditional_max_mean[0] > (n - 1) / n

    def test_hundred_round_totals(self):
        config = StopkitConfig(workers=8)
        specs = [
            StrategySpec(StrategyKind.parse(name), 100)
            for name in ("naive", "gm", "optimal", "approx")
        ]
        reports = compare_strategies(specs, 100, self.RUNS, SEED, config)
        realized = {label: r.realized_win_total for label, r in reports.items()}
        assert realized["naive"] == pytest.approx(0.5306, abs=0.003)
        assert realized["gm"] == pytest.approx(0.5411, abs=0.003)
        assert realized["optimal"] == pytest.approx(0.5650, abs=0.003)
        assert realized["approx"] == pytest.approx(0.5634, abs=0.003)

    def test_tally_bytes_independent_of_workers(self):
        outputs = set()
        for workers in (1, 4, 8):
            tally = simulate(OPTIMAL_3, self.RUNS, SEED, StopkitConfig(workers=workers))
            report = compare_to_prediction(tally, outcome_table(3, OPTIMAL_3))
            outputs.add(report.to_csv())
        assert len(outputs) == 1


def test_report_flags_cell_outcomes(config):
    tally = simulate(OPTIMAL_3, 1000, SEED, config)
    report = compare_to_prediction(tally, outcome_table(3, OPTIMAL_3))
    assert {cell.outcome for cell in report.cells} == {
        Outcome.WIN,
        Outcome.FALSE_POSITIVE,
        Outcome.FALSE_NEGATIVE,
    }
