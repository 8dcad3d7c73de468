"""Temporal train/val/test splitting: the tail time block is held out."""

from __future__ import annotations

import math

import numpy as np

from .config import SplitSpec
from .dataset import Item, TemporalDataset

__all__ = ["split"]


def split(ds: TemporalDataset, spec: SplitSpec) -> dict[str, list[Item]]:
    """Partition into {train, val, test}.

    Test takes the ceil(test_fraction * n) items with the largest timestamps;
    the remainder is shuffled by shuffle_seed and divided 4:1 into train and
    val (val rounded half up, never below 1).
    """
    ds.validate()
    spec.validate()
    n = len(ds.items)
    if n < 5:
        raise ValueError("dataset must have at least 5 items to split")
    n_test = math.ceil(spec.test_fraction * n)
    if n_test >= n:
        raise ValueError("test fraction leaves no items to train on")
    # items are already in timestamp order
    test = list(ds.items[n - n_test :])
    remaining = list(ds.items[: n - n_test])
    rng = np.random.default_rng(spec.shuffle_seed)
    perm = rng.permutation(len(remaining))
    shuffled = [remaining[i] for i in perm]
    n_val = max(1, int(math.floor(len(remaining) / 5.0 + 0.5)))
    return {"train": shuffled[n_val:], "val": shuffled[:n_val], "test": test}
