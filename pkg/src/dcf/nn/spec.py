"""Architecture and training-run configuration records."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_CLASSES = 2

_DTYPES = {"float32": np.float32, "float64": np.float64}


@dataclass(frozen=True)
class ModelSpec:
    """Mini residual net: stem conv, stages of two-conv residual blocks with
    stride-2 transitions, global average pool, dense 2-way head."""

    input_side: int = 64
    stem_channels: int = 8
    stage_channels: tuple[int, ...] = (8, 16, 32)
    blocks_per_stage: int = 1
    dtype: str = "float64"

    def validate(self) -> None:
        if self.input_side < 4:
            raise ValueError("input_side must be >= 4")
        if self.stem_channels < 1:
            raise ValueError("stem_channels must be >= 1")
        if len(self.stage_channels) < 1:
            raise ValueError("at least one stage is required")
        if any(c < 1 for c in self.stage_channels):
            raise ValueError("stage channels must be >= 1")
        if self.blocks_per_stage < 1:
            raise ValueError("blocks_per_stage must be >= 1")
        if self.dtype not in _DTYPES:
            raise ValueError(f"dtype must be one of {sorted(_DTYPES)}")

    @property
    def np_dtype(self):
        return _DTYPES[self.dtype]

    @property
    def n_blocks(self) -> int:
        return len(self.stage_channels) * self.blocks_per_stage

    def block_units(self) -> list[str]:
        return [
            f"s{i}b{j}"
            for i in range(len(self.stage_channels))
            for j in range(self.blocks_per_stage)
        ]

    def units(self) -> list[str]:
        return ["stem", *self.block_units(), "head"]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-4
    weight_decay: float = 0.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 32
    epochs: int = 30
    augment: bool = True
    seed: int = 0

    def validate(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be >= 0")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("betas must lie in [0, 1)")
        if self.eps <= 0:
            raise ValueError("eps must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
