"""Block-deterministic Monte Carlo scheduling.

Trials are partitioned into fixed-size blocks; block b of a run draws from
its own generator seeded by (seed components..., b).  Because every block's
draws depend only on its index and the reduction is an exact integer sum,
results are byte-identical no matter how many workers map the blocks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK_SIZE = 8192


def seed_components(seed) -> tuple[int, ...]:
    """Normalize a seed (int or sequence of ints) to a tuple of ints."""
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def block_sizes(trials: int, block: int = BLOCK_SIZE) -> list[int]:
    full, rem = divmod(trials, block)
    sizes = [block] * full
    if rem:
        sizes.append(rem)
    return sizes


def parallel_count(count_block, trials: int, workers: int = 1,
                   block: int = BLOCK_SIZE) -> int:
    """Sum count_block(index, size) over the block partition of `trials`.

    count_block must depend only on its arguments (it builds its own RNG
    from the block index), so the total is independent of scheduling.
    """
    sizes = block_sizes(trials, block)
    if workers <= 1 or len(sizes) == 1:
        return sum(count_block(b, n) for b, n in enumerate(sizes))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        counts = pool.map(count_block, range(len(sizes)), sizes)
        return sum(counts)
