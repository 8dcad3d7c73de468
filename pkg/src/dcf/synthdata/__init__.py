"""Procedural drifting-glyph datasets with temporal splits."""

from .config import DATASET_NAMES, LABELS, GenConfig, SplitSpec
from .dataset import Item, TemporalDataset, load_dataset, save_dataset
from .generate import dataset_rng, generate, item_rng
from .glyphs import (
    noise_sigma,
    pattern_divergence,
    pattern_jitter_std,
    pattern_mean,
    render_glyph,
)
from .split import split

__all__ = [
    "DATASET_NAMES",
    "GenConfig",
    "Item",
    "LABELS",
    "SplitSpec",
    "TemporalDataset",
    "dataset_rng",
    "generate",
    "item_rng",
    "load_dataset",
    "noise_sigma",
    "pattern_divergence",
    "pattern_jitter_std",
    "pattern_mean",
    "render_glyph",
    "save_dataset",
    "split",
]
