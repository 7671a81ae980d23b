"""Train/test split on whole calendar weeks.

Days are partitioned into consecutive Monday-anchored 7-day blocks;
every block is independently assigned to the test set with probability
1/5 (seeded), so the expected proportion is 4:1 and no block ever
straddles the split. The label applies to all users' days in the block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TEST_PROBABILITY = 0.2


@dataclass
class SplitAssignment:
    block_ids: np.ndarray       # (n,) int64, per profile
    is_test: np.ndarray         # (n,) bool, per profile
    test_blocks: np.ndarray     # sorted unique block ids labelled test
    train_blocks: np.ndarray
    seed: int


def week_block_split(dates: np.ndarray, seed: int) -> SplitAssignment:
    """Assign one train/test label per 7-day block of local dates."""
    dates = np.asarray(dates, dtype="datetime64[D]")
    day_int = dates.astype(np.int64)
    if day_int.size == 0:
        empty = np.array([], dtype=np.int64)
        return SplitAssignment(empty, np.array([], dtype=bool), empty, empty, seed)
    # 1970-01-01 was a Thursday; (d + 3) % 7 gives Monday=0.
    first = day_int.min()
    anchor = first - (first + 3) % 7
    blocks = (day_int - anchor) // 7

    unique_blocks = np.unique(blocks)
    rng = np.random.default_rng(seed)
    test_mask = rng.random(unique_blocks.size) < TEST_PROBABILITY
    test_blocks = unique_blocks[test_mask]
    is_test = np.isin(blocks, test_blocks)
    return SplitAssignment(
        block_ids=blocks,
        is_test=is_test,
        test_blocks=test_blocks,
        train_blocks=unique_blocks[~test_mask],
        seed=seed,
    )
