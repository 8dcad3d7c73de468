"""Deterministic generation of the two temporally continued datasets."""

from __future__ import annotations

import math

import numpy as np

from .config import DATASET_NAMES, GenConfig
from .dataset import Item, TemporalDataset
from .glyphs import noise_sigma, pattern_jitter_std, pattern_mean, render_glyph

__all__ = ["generate", "dataset_rng", "item_rng"]

# SeedSequence stream tags: 0 = dataset-level draws, 1 = per-item draws
_DS_STREAM = 0
_ITEM_STREAM = 1


def dataset_rng(seed: int, ds_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, ds_index, _DS_STREAM])


def item_rng(seed: int, ds_index: int, item_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, ds_index, _ITEM_STREAM, item_index])


def _label_order(n_f1: int, n_f2: int, bias: float, rng: np.random.Generator) -> list[str]:
    """Interleave the fixed label multiset along the timeline.

    Each item draws a latent position in [0, 1] and the sequence is the
    labels sorted by position. Positive bias pushes F1 late (power-law
    toward 1) and F2 early, negative bias the reverse, zero is a uniform
    shuffle of the multiset.
    """
    shape = 1.0 + abs(bias)
    u1 = rng.random(n_f1)
    u2 = rng.random(n_f2)
    if bias >= 0:
        pos1 = u1 ** (1.0 / shape)
        pos2 = 1.0 - u2 ** (1.0 / shape)
    else:
        pos1 = 1.0 - u1 ** (1.0 / shape)
        pos2 = u2 ** (1.0 / shape)
    pos = np.concatenate([pos1, pos2])
    labels = ["F1"] * n_f1 + ["F2"] * n_f2
    return [labels[i] for i in np.argsort(pos, kind="stable")]


def _render_item(cfg: GenConfig, ds_index: int, name: str, item_index: int, label: str) -> np.ndarray:
    rng = item_rng(cfg.seed, ds_index, item_index)
    h = int(rng.integers(cfg.height_range[0], cfg.height_range[1] + 1))
    aspect = rng.uniform(cfg.aspect_range[0], cfg.aspect_range[1])
    w = int(math.floor(h * aspect + 0.5))
    drift = cfg.drift if name == "B" else 0.0
    mean_p, mean_r = pattern_mean(label, drift)
    std_p, std_r = pattern_jitter_std()
    pitch = max(2.0, mean_p + rng.normal(0.0, std_p))
    # dots must stay disjoint on the grid
    radius = float(np.clip(mean_r + rng.normal(0.0, std_r), 0.5, 0.45 * pitch))
    return render_glyph(
        rng,
        h,
        w,
        pitch,
        radius,
        noise=noise_sigma(cfg.noise_level, drift),
        blur_radius=cfg.blur_radius,
        gain_range=cfg.illumination_range,
    )


def _build(cfg: GenConfig, name: str, start_timestamp: int) -> TemporalDataset:
    ds_index = DATASET_NAMES.index(name)
    rng = dataset_rng(cfg.seed, ds_index)
    counts = cfg.counts[name]
    order = _label_order(counts["F1"], counts["F2"], cfg.time_bias[name], rng)
    gaps = rng.integers(1, 4, size=len(order))
    items = []
    ts = start_timestamp
    for i, label in enumerate(order):
        ts += int(gaps[i])
        items.append(Item(image=_render_item(cfg, ds_index, name, i, label), label=label, timestamp=ts))
    ds = TemporalDataset(name=name, seed=cfg.seed, items=items)
    ds.validate()
    return ds


def generate(cfg: GenConfig) -> tuple[TemporalDataset, TemporalDataset]:
    """Build datasets A and B; B continues A's timeline under drifted patterns."""
    cfg.validate()
    a = _build(cfg, "A", start_timestamp=0)
    b = _build(cfg, "B", start_timestamp=a.items[-1].timestamp)
    return a, b
