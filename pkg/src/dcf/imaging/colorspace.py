"""sRGB <-> CIELAB conversion (D65, 2-degree observer).

The forward chain is sRGB gamma expansion (threshold 0.04045, exponent 2.4),
a linear-RGB -> XYZ matrix, then the CIELAB f(t) compander with delta = 6/29.
The matrix rows are normalized so that linear (1, 1, 1) lands exactly on the
D65 white point; this makes white map to L = 100 and every grey to a = b = 0
up to float rounding, which the round-trip guarantees below rely on.
"""

from __future__ import annotations

import numpy as np

__all__ = ["rgb_to_lab", "lab_to_rgb", "rgb_to_lab_array", "lab_to_rgb_array"]

WHITE_POINT = np.array([0.95047, 1.0, 1.08883])

_M_RAW = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# Row-renormalized so linear (1,1,1) maps exactly to WHITE_POINT.
_RGB_TO_XYZ = _M_RAW * (WHITE_POINT / _M_RAW.sum(axis=1))[:, None]
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)

_DELTA = 6.0 / 29.0
_DELTA3 = _DELTA**3


def _srgb_to_linear(c: np.ndarray) -> np.ndarray:
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def _linear_to_srgb(c: np.ndarray) -> np.ndarray:
    c = np.clip(c, 0.0, None)
    return np.where(c <= 0.0031308, c * 12.92, 1.055 * c ** (1.0 / 2.4) - 0.055)


def _f(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA3, np.cbrt(t), t / (3.0 * _DELTA**2) + 4.0 / 29.0)


def _f_inv(ft: np.ndarray) -> np.ndarray:
    return np.where(ft > _DELTA, ft**3, 3.0 * _DELTA**2 * (ft - 4.0 / 29.0))


def rgb_to_lab_array(rgb: np.ndarray) -> np.ndarray:
    """Convert an (..., 3) array of 8-bit sRGB values to CIELAB (float64).

    L lies in [0, 100]; a and b are unbounded reals (approximately
    [-128, 128] for in-gamut inputs).
    """
    c = np.asarray(rgb, dtype=np.float64) / 255.0
    linear = _srgb_to_linear(c)
    xyz = linear @ _RGB_TO_XYZ.T
    ft = _f(xyz / WHITE_POINT)
    fx, fy, fz = ft[..., 0], ft[..., 1], ft[..., 2]
    lab = np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)
    return lab


def lab_to_rgb_array(lab: np.ndarray) -> np.ndarray:
    """Convert an (..., 3) CIELAB array to 8-bit sRGB.

    Out-of-gamut values are clamped to [0, 255]; the final quantization
    rounds half away from zero, so 8-bit greys round-trip exactly.
    """
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    xyz = _f_inv(np.stack([fx, fy, fz], axis=-1)) * WHITE_POINT
    linear = xyz @ _XYZ_TO_RGB.T
    c = np.clip(_linear_to_srgb(linear) * 255.0, 0.0, 255.0)
    return np.floor(c + 0.5).astype(np.uint8)


def rgb_to_lab(pixel) -> tuple[float, float, float]:
    """Convert one 8-bit (r, g, b) triple to (L, a, b)."""
    lab = rgb_to_lab_array(np.asarray(pixel, dtype=np.float64))
    return (float(lab[0]), float(lab[1]), float(lab[2]))


def lab_to_rgb(lab) -> tuple[int, int, int]:
    """Convert one (L, a, b) triple to a clamped 8-bit (r, g, b) triple."""
    rgb = lab_to_rgb_array(np.asarray(lab, dtype=np.float64))
    return (int(rgb[0]), int(rgb[1]), int(rgb[2]))
