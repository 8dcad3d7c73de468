"""Configuration records for dataset generation and temporal splitting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

LABELS = ("F1", "F2")
DATASET_NAMES = ("A", "B")


def _default_counts() -> dict[str, dict[str, int]]:
    # desk-scale defaults: roughly 1/10 of the reference corpus sizes,
    # keeping A larger and earlier than B
    return {"A": {"F1": 295, "F2": 295}, "B": {"F1": 155, "F2": 155}}


def _default_time_bias() -> dict[str, float]:
    # positive bias concentrates F1 late in the timeline, negative F2
    return {"A": 0.8, "B": -0.5}


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the procedural dot-matrix corpus.

    `drift` shifts dataset B's pattern parameters away from A's and scales
    its noise; 0 reproduces A's generating distribution under new seeds.
    `time_bias` skews where each label mass sits along the timeline so the
    temporal test block is label-imbalanced, as in real drifting streams.
    """

    seed: int = 0
    counts: Mapping[str, Mapping[str, int]] = field(default_factory=_default_counts)
    height_range: tuple[int, int] = (24, 40)
    aspect_range: tuple[float, float] = (4.0, 8.0)
    drift: float = 1.0
    noise_level: float = 12.0
    blur_radius: int = 1
    illumination_range: tuple[float, float] = (0.9, 1.1)
    time_bias: Mapping[str, float] = field(default_factory=_default_time_bias)

    def validate(self) -> None:
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")
        if set(self.counts) != set(DATASET_NAMES):
            raise ValueError(f"counts must cover exactly {DATASET_NAMES}")
        for name in DATASET_NAMES:
            per_label = self.counts[name]
            if set(per_label) != set(LABELS):
                raise ValueError(f"counts[{name!r}] must cover exactly {LABELS}")
            for label in LABELS:
                if int(per_label[label]) < 5:
                    raise ValueError(f"counts[{name!r}][{label!r}] must be >= 5")
        h_lo, h_hi = self.height_range
        if not (8 <= h_lo <= h_hi):
            raise ValueError("height_range must satisfy 8 <= lo <= hi")
        a_lo, a_hi = self.aspect_range
        if not (1.0 < a_lo <= a_hi):
            raise ValueError("aspect_range must satisfy 1 < lo <= hi")
        if self.drift < 0:
            raise ValueError("drift must be >= 0")
        if self.noise_level < 0:
            raise ValueError("noise_level must be >= 0")
        if self.blur_radius < 0:
            raise ValueError("blur_radius must be >= 0")
        g_lo, g_hi = self.illumination_range
        if not (0.0 < g_lo <= g_hi):
            raise ValueError("illumination_range must satisfy 0 < lo <= hi")
        if set(self.time_bias) != set(DATASET_NAMES):
            raise ValueError(f"time_bias must cover exactly {DATASET_NAMES}")


@dataclass(frozen=True)
class SplitSpec:
    """Temporal split: the tail time block is the test set, the rest is
    shuffled and divided 4:1 into train and validation."""

    test_fraction: float
    shuffle_seed: int = 0

    def validate(self) -> None:
        if not (0.0 < self.test_fraction < 1.0):
            raise ValueError("test_fraction must lie in (0, 1)")
        if not isinstance(self.shuffle_seed, int):
            raise ValueError("shuffle_seed must be an integer")
