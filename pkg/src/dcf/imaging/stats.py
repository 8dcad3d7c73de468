"""Per-image pixel statistics used by the explanation reports."""

from __future__ import annotations

import numpy as np

from .image import validate_image_u8

__all__ = ["mean_pixel", "histogram"]


def mean_pixel(img: np.ndarray) -> float:
    """Mean of all channel values normalized to [0, 1] (double precision)."""
    validate_image_u8(img)
    return float(img.sum(dtype=np.float64) / (img.size * 255.0))


def histogram(img: np.ndarray, bins: int = 256) -> np.ndarray:
    """Counts of all H*W*3 channel values over `bins` equal-width bins.

    `bins` must divide 256; the counts sum to H*W*3.
    """
    validate_image_u8(img)
    if bins < 1 or 256 % bins != 0:
        raise ValueError(f"bins must divide 256, got {bins}")
    width = 256 // bins
    return np.bincount(img.reshape(-1).astype(np.int64) // width, minlength=bins).astype(np.int64)
