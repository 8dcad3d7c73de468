"""Dot-matrix glyph rendering and the drifting pattern-parameter model.

A glyph crop is a light paper band carrying a regular grid of dark dots.
The class identity lives in the grid geometry: F1 prints a tight pitch with
thin dots, F2 a wide pitch with thick dots. Dataset B shifts both classes'
(pitch, radius) means along fixed drift directions and inflates the sensor
noise, which is the distribution shift the selection machinery must absorb.
"""

from __future__ import annotations

import numpy as np

from .config import LABELS

# per-class (pitch, radius) means at drift 0
_BASE_PARAMS = {"F1": (5.0, 1.1), "F2": (7.0, 2.2)}
# direction each class mean moves per unit drift
_DRIFT_VEC = {"F1": (1.6, 0.5), "F2": (1.9, 0.5)}
# per-image jitter applied to (pitch, radius)
_JITTER_STD = (0.35, 0.12)

__all__ = [
    "pattern_mean",
    "pattern_jitter_std",
    "noise_sigma",
    "pattern_divergence",
    "render_glyph",
]


def pattern_mean(label: str, drift: float) -> tuple[float, float]:
    """Mean (pitch, radius) of `label` after `drift` units of shift."""
    if label not in LABELS:
        raise ValueError(f"unknown label {label!r}")
    base = _BASE_PARAMS[label]
    vec = _DRIFT_VEC[label]
    return (base[0] + drift * vec[0], base[1] + drift * vec[1])


def pattern_jitter_std() -> tuple[float, float]:
    return _JITTER_STD


def noise_sigma(noise_level: float, drift: float) -> float:
    return noise_level * (1.0 + 0.5 * drift)


def pattern_divergence(drift: float) -> float:
    """Symmetric KL between the drift-0 and drift-d pattern distributions.

    Per class the (pitch, radius) law is Gaussian with a fixed diagonal
    covariance, so the symmetric KL reduces to the squared Mahalanobis
    distance between the means; classes are averaged.
    """
    if drift < 0:
        raise ValueError("drift must be >= 0")
    var = np.array(_JITTER_STD, dtype=np.float64) ** 2
    total = 0.0
    for label in LABELS:
        a = np.array(pattern_mean(label, 0.0))
        b = np.array(pattern_mean(label, drift))
        total += float((((a - b) ** 2) / var).sum())
    return total / len(LABELS)


def _box_blur_axis(data: np.ndarray, radius: int, axis: int) -> np.ndarray:
    k = 2 * radius + 1
    pad = [(0, 0)] * data.ndim
    pad[axis] = (radius + 1, radius)
    c = np.cumsum(np.pad(data, pad, mode="edge"), axis=axis, dtype=np.float64)
    hi = [slice(None)] * data.ndim
    lo = [slice(None)] * data.ndim
    hi[axis] = slice(k, None)
    lo[axis] = slice(0, -k)
    return (c[tuple(hi)] - c[tuple(lo)]) / k


def _box_blur(data: np.ndarray, radius: int) -> np.ndarray:
    out = _box_blur_axis(data, radius, 0)
    return _box_blur_axis(out, radius, 1)


def render_glyph(
    rng: np.random.Generator,
    height: int,
    width: int,
    pitch: float,
    radius: float,
    noise: float,
    blur_radius: int,
    gain_range: tuple[float, float],
) -> np.ndarray:
    """Render one (height, width, 3) uint8 crop from explicit parameters."""
    if height < 1 or width < 1:
        raise ValueError("glyph dimensions must be >= 1")
    if pitch <= 0 or radius <= 0:
        raise ValueError("pitch and radius must be positive")
    paper = rng.uniform(200.0, 230.0)
    ink = rng.uniform(25.0, 55.0)
    phase_y = rng.uniform(0.0, pitch)
    phase_x = rng.uniform(0.0, pitch)
    ys = np.arange(height, dtype=np.float64)[:, None]
    xs = np.arange(width, dtype=np.float64)[None, :]
    # distance to the nearest dot centre of the wrapped grid
    dy = (ys - phase_y) % pitch - pitch / 2.0
    dx = (xs - phase_x) % pitch - pitch / 2.0
    dist = np.hypot(dy, dx)
    coverage = np.clip(radius + 0.5 - dist, 0.0, 1.0)
    field = paper - (paper - ink) * coverage
    tint = rng.uniform(0.96, 1.04, size=3)
    img = field[:, :, None] * tint[None, None, :]
    g0 = rng.uniform(gain_range[0], gain_range[1])
    g1 = rng.uniform(gain_range[0], gain_range[1])
    img = img * np.linspace(g0, g1, width)[None, :, None]
    if blur_radius > 0:
        img = _box_blur(img, blur_radius)
    if noise > 0:
        img = img + rng.normal(0.0, noise, size=img.shape)
    return np.clip(np.floor(img + 0.5), 0.0, 255.0).astype(np.uint8)
