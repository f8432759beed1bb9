import numpy as np
import pytest

from stopkit.simulation.rng import draw_block, shard_bounds, universe_width


@pytest.mark.parametrize("n, width", [(1, 100), (3, 100), (100, 100), (101, 104), (2000, 2000)])
def test_universe_width(n, width):
    assert universe_width(n) == width


def test_blocks_do_not_depend_on_shard_start():
    whole = draw_block(42, 0, 10, 100)
    tail = draw_block(42, 6, 10, 100)
    assert np.array_equal(whole[6:], tail)


def test_values_in_unit_interval():
    block = draw_block(1, 0, 50, 8)
    assert block.shape == (50, 8)
    assert np.all((block >= 0.0) & (block < 1.0))


def test_width_must_align():
    with pytest.raises(ValueError):
        draw_block(1, 0, 5, 6)


def test_shard_bounds():
    assert shard_bounds(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert shard_bounds(3, 16) == [(0, 3)]
