"""Per-label pixel-value distributions of padded test images."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..imaging import histogram, pad_square
from ..synthdata import LABELS


def padding_profile(items, scheme: str, bins: int = 256) -> dict[str, np.ndarray]:
    """Sum of per-image histograms of the padded (pre-resize) images.

    Returns one int64 count vector of length ``bins`` per label; labels
    absent from ``items`` get all-zero counts.
    """
    profile = {label: np.zeros(bins, dtype=np.int64) for label in LABELS}
    for item in items:
        profile[item.label] += histogram(pad_square(item.image, scheme), bins)
    return profile


def write_profile_csv(path, profile: dict) -> Path:
    """Columns: bin index, then one count column per label."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sizes = {len(counts) for counts in profile.values()}
    if len(sizes) != 1:
        raise ValueError(f"label histograms disagree on bin count: {sorted(sizes)}")
    bins = sizes.pop()
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["bin"] + [f"count_{label}" for label in LABELS])
        for b in range(bins):
            writer.writerow([b] + [int(profile[label][b]) for label in LABELS])
    return path


def read_profile_csv(path) -> dict[str, np.ndarray]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        expected = ("bin",) + tuple(f"count_{label}" for label in LABELS)
        if tuple(reader.fieldnames or ()) != expected:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        rows = list(reader)
    profile = {}
    for label in LABELS:
        profile[label] = np.array([int(r[f"count_{label}"]) for r in rows], dtype=np.int64)
    return profile
