"""Resizing and rotation with half-pixel-center bilinear sampling.

Sampling is edge-clamped: coordinates outside the source raster read the
nearest border pixel, so rotation never introduces a fill color of its own.
8-bit outputs are quantized by rounding half away from zero.
"""

from __future__ import annotations

import numpy as np

from .image import validate_image_u8

__all__ = ["resize_bilinear", "resize_bilinear_float", "rotate", "random_rotation"]


def _sample_bilinear(channels: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Sample (H, W, C) float data at fractional (ys, xs), edge-clamped."""
    h, w = channels.shape[:2]
    ys = np.clip(ys, 0.0, h - 1.0)
    xs = np.clip(xs, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = (ys - y0)[..., None]
    wx = (xs - x0)[..., None]
    top = channels[y0, x0] * (1.0 - wx) + channels[y0, x1] * wx
    bottom = channels[y1, x0] * (1.0 - wx) + channels[y1, x1] * wx
    return top * (1.0 - wy) + bottom * wy


def resize_bilinear_float(data: np.ndarray, side: int) -> np.ndarray:
    """Resize square (H, H) or (H, H, C) float data to side x side."""
    if side < 1:
        raise ValueError("side must be >= 1")
    squeeze = data.ndim == 2
    if squeeze:
        data = data[..., None]
    h = data.shape[0]
    if data.shape[1] != h:
        raise ValueError(f"resize expects a square input, got {data.shape[:2]}")
    coords = (np.arange(side, dtype=np.float64) + 0.5) * (h / side) - 0.5
    ys = np.repeat(coords, side).reshape(side, side)
    xs = np.tile(coords, side).reshape(side, side)
    out = _sample_bilinear(data.astype(np.float64, copy=False), ys, xs)
    return out[..., 0] if squeeze else out


def resize_bilinear(img: np.ndarray, side: int) -> np.ndarray:
    """Resize a square H x H x 3 uint8 image to side x side.

    side == H returns a bit-identical copy.
    """
    validate_image_u8(img)
    h, w = img.shape[:2]
    if h != w:
        raise ValueError(f"resize expects a square input, got {(h, w)}")
    if side == h:
        return img.copy()
    out = resize_bilinear_float(img.astype(np.float64), side)
    return np.floor(out + 0.5).astype(np.uint8)


def rotate(img: np.ndarray, angle_degrees: float) -> np.ndarray:
    """Rotate about the image center with bilinear, edge-clamped sampling.

    angle == 0 returns a bit-identical copy; a constant image stays constant
    for any angle.
    """
    validate_image_u8(img)
    if angle_degrees == 0.0:
        return img.copy()
    h, w = img.shape[:2]
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    theta = np.deg2rad(angle_degrees)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    # Inverse mapping: rotate each destination pixel back into the source.
    dy = np.arange(h, dtype=np.float64)[:, None] - cy
    dx = np.arange(w, dtype=np.float64)[None, :] - cx
    ys = cy + dy * cos_t - dx * sin_t
    xs = cx + dy * sin_t + dx * cos_t
    out = _sample_bilinear(img.astype(np.float64), ys, xs)
    return np.floor(out + 0.5).astype(np.uint8)


def random_rotation(img: np.ndarray, rng: np.random.Generator, max_degrees: float = 15.0) -> np.ndarray:
    """Rotate by an angle drawn uniformly from [-max_degrees, +max_degrees]."""
    return rotate(img, float(rng.uniform(-max_degrees, max_degrees)))
