"""
Counter-based draws: run ``t`` of a universe keyed by ``master_seed`` always
reads the same ``width`` uniforms, whichever shard or thread produces it.
"""

import numpy as np

SEED_BITS = 64
MIN_WIDTH = 100
_LANES = 4  # Philox4x64 emits four words per counter step


def validate_seed(master_seed: int) -> int:
    if isinstance(master_seed, bool) or not isinstance(master_seed, (int, np.integer)):
        raise ValueError(f"master seed must be an integer, got {master_seed!r}")
    master_seed = int(master_seed)
    if not 0 <= master_seed < 2**SEED_BITS:
        raise ValueError(f"master seed must fit in {SEED_BITS} unsigned bits")
    return master_seed


def universe_width(n: int) -> int:
    """Draws per run: at least 100 so every n <= 100 shares the same runs."""
    width = max(n, MIN_WIDTH)
    return -(-width // _LANES) * _LANES


def draw_block(master_seed: int, start: int, stop: int, width: int) -> np.ndarray:
    """Uniforms in ``[0, 1)`` for runs ``start..stop-1``, shape ``(stop-start, width)``."""
    if width % _LANES:
        raise ValueError(f"width must be a multiple of {_LANES}, got {width}")
    if not 0 <= start <= stop:
        raise ValueError(f"bad run range [{start}, {stop})")
    bit_generator = np.random.Philox(
        key=validate_seed(master_seed), counter=start * width // _LANES
    )
    return np.random.Generator(bit_generator).random((stop - start, width))


def shard_bounds(total: int, chunk_size: int) -> list[tuple[int, int]]:
    return [
        (start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)
    ]
