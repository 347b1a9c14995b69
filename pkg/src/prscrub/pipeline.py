"""Dataset splitting, sampling, and heuristic-overlap statistics."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .heuristics import HeuristicFlags

HEURISTIC_NAMES = ("H1", "H2", "H3", "H4")

# Pinned so split assignments stay reproducible across releases: Mersenne
# Twister as shipped in CPython's random module, Fisher-Yates shuffle.
PRNG_NAME = "cpython-random-mt19937/shuffle-v1"


class SampleTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SplitAssignment:
    seed: int
    train_ids: tuple[str, ...]
    val_ids: tuple[str, ...]
    test_ids: tuple[str, ...]
    prng: str = PRNG_NAME

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "prng": self.prng,
            "sizes": {
                "train": len(self.train_ids),
                "val": len(self.val_ids),
                "test": len(self.test_ids),
            },
            "train_ids": list(self.train_ids),
            "val_ids": list(self.val_ids),
            "test_ids": list(self.test_ids),
        }


def split_sizes(n: int) -> tuple[int, int, int]:
    """8:1:1 with val rounded down, test rounded up, train the remainder."""
    val = math.floor(0.1 * n)
    test = math.ceil(0.1 * n)
    return n - val - test, val, test


def split(ids: Sequence[str], seed: int) -> SplitAssignment:
    """Shuffle deterministically and cut into train/val/test."""
    if len(set(ids)) != len(ids):
        raise ValueError("ids must be unique")
    shuffled = list(ids)
    random.Random(seed).shuffle(shuffled)
    train_n, val_n, _ = split_sizes(len(ids))
    return SplitAssignment(
        seed=seed,
        train_ids=tuple(shuffled[:train_n]),
        val_ids=tuple(shuffled[train_n : train_n + val_n]),
        test_ids=tuple(shuffled[train_n + val_n :]),
    )


def sample_n(ids: Sequence[str], n: int, seed: int) -> list[str]:
    """Uniform sample without replacement, returned in original order."""
    if n > len(ids):
        raise SampleTooLarge(f"cannot sample {n} from {len(ids)} ids")
    picked = random.Random(seed).sample(range(len(ids)), n)
    return [ids[i] for i in sorted(picked)]


def region_key(names) -> str:
    return "+".join(sorted(names))


@dataclass
class OverlapReport:
    per_heuristic: dict[str, int]
    region_counts: dict[str, int]
    total_affected: int
    total_samples: int
    affected_fraction: float = field(init=False)

    def __post_init__(self):
        self.affected_fraction = (
            self.total_affected / self.total_samples if self.total_samples else 0.0
        )

    def to_dict(self) -> dict:
        return {
            "per_heuristic": dict(self.per_heuristic),
            "regions": dict(self.region_counts),
            "total_affected": self.total_affected,
            "total_samples": self.total_samples,
            "affected_fraction": self.affected_fraction,
        }


def all_region_keys() -> list[str]:
    keys = []
    for r in range(1, len(HEURISTIC_NAMES) + 1):
        for combo in combinations(HEURISTIC_NAMES, r):
            keys.append(region_key(combo))
    return keys


def overlap_stats(flags: Sequence[HeuristicFlags]) -> OverlapReport:
    """Venn-style accounting: each affected sample lands in exactly the
    region of the heuristics that fired on it."""
    per_heuristic = {name: 0 for name in HEURISTIC_NAMES}
    regions = {key: 0 for key in all_region_keys()}
    affected = 0
    for f in flags:
        fired = f.fired()
        if not fired:
            continue
        affected += 1
        for name in fired:
            per_heuristic[name] += 1
        regions[region_key(fired)] += 1
    return OverlapReport(
        per_heuristic=per_heuristic,
        region_counts=regions,
        total_affected=affected,
        total_samples=len(flags),
    )
