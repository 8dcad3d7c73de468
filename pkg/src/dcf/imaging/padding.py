"""Square padding of rectangular crops under six fill schemes.

A crop of shape (H, W, 3) is extended along its shorter axis to S x S with
S = max(H, W). The original pixels occupy the centered band; the bands on
either side are filled according to the scheme:

    zero        (0, 0, 0)
    rgb-mean    per-channel mean of the crop, rounded to 8 bits
    lab-mean    per-channel mean taken in CIELAB, converted back to sRGB
    white       (255, 255, 255)
    grey        (128, 128, 128)
    reflection  rows mirrored across the crop borders, folding repeatedly
                when the band is taller than the crop

When the side difference is odd the extra pixel goes to the bottom/right
band (pad_before = floor(diff / 2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .colorspace import lab_to_rgb_array, rgb_to_lab_array
from .image import validate_image_u8

__all__ = [
    "PADDING_SCHEMES",
    "PadGeometry",
    "pad_geometry",
    "reflect_index",
    "fill_value",
    "pad_square",
]

PADDING_SCHEMES = ("zero", "rgb-mean", "lab-mean", "white", "grey", "reflection")

_CONSTANT_FILLS = {
    "zero": (0, 0, 0),
    "white": (255, 255, 255),
    "grey": (128, 128, 128),
}


@dataclass(frozen=True)
class PadGeometry:
    """Band sizes and orientation of a square-padding operation."""

    pad_before: int
    pad_after: int
    axis: str  # "vertical" (rows added), "horizontal" (columns added), or "none"

    @property
    def total(self) -> int:
        return self.pad_before + self.pad_after


def pad_geometry(height: int, width: int) -> PadGeometry:
    """Compute the padding bands that square an H x W crop."""
    diff = abs(width - height)
    before = diff // 2
    after = diff - before
    if height < width:
        axis = "vertical"
    elif width < height:
        axis = "horizontal"
    else:
        axis = "none"
    return PadGeometry(before, after, axis)


def reflect_index(k: int, height: int) -> int:
    """Map a signed row offset to a source row under symmetric extension.

    The extension mirrors the rows at both borders without repeating the
    edge row (... 2 1 0 | 0 1 2 | 2 1 0 ...), so the map has period
    2 * height and satisfies reflect_index(k) == reflect_index(-1 - k).
    """
    if height < 1:
        raise ValueError("height must be >= 1")
    m = k % (2 * height)
    return m if m < height else 2 * height - 1 - m


def _check_scheme(scheme: str) -> None:
    if scheme not in PADDING_SCHEMES:
        raise ValueError(f"unknown padding scheme {scheme!r}; expected one of {PADDING_SCHEMES}")


def fill_value(img: np.ndarray, scheme: str) -> tuple[int, int, int]:
    """The constant fill color a non-reflection scheme pads with.

    rgb-mean rounds the per-channel mean half away from zero; lab-mean
    averages in CIELAB and converts the mean back to clamped 8-bit sRGB.
    """
    _check_scheme(scheme)
    if scheme in _CONSTANT_FILLS:
        return _CONSTANT_FILLS[scheme]
    if scheme == "rgb-mean":
        mean = img.reshape(-1, 3).mean(axis=0, dtype=np.float64)
        rounded = np.floor(mean + 0.5).astype(np.int64)
        return tuple(int(v) for v in np.clip(rounded, 0, 255))
    if scheme == "lab-mean":
        lab_mean = rgb_to_lab_array(img.reshape(-1, 3)).mean(axis=0)
        rgb = lab_to_rgb_array(lab_mean)
        return (int(rgb[0]), int(rgb[1]), int(rgb[2]))
    raise ValueError(f"scheme {scheme!r} has no constant fill")


def pad_square(img: np.ndarray, scheme: str) -> np.ndarray:
    """Pad a crop to S x S with S = max(H, W) under the given scheme.

    The input band is copied bit-exactly; square inputs are returned as an
    identical copy for every scheme.
    """
    validate_image_u8(img)
    _check_scheme(scheme)
    h, w = img.shape[:2]
    if h == w:
        return img.copy()
    if w < h:
        # Pad columns by padding rows of the transposed image.
        return pad_square(np.ascontiguousarray(img.transpose(1, 0, 2)), scheme).transpose(1, 0, 2)

    geom = pad_geometry(h, w)
    side = w
    if scheme == "reflection":
        src = np.array([reflect_index(i - geom.pad_before, h) for i in range(side)])
        return img[src, :, :].copy()

    out = np.empty((side, side, 3), dtype=np.uint8)
    out[:] = np.asarray(fill_value(img, scheme), dtype=np.uint8)
    out[geom.pad_before : geom.pad_before + h, :, :] = img
    return out
