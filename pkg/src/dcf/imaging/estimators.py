"""Stateless sklearn-style transformers over lists of 8-bit images.

These wrap the functional imaging ops so preprocessing composes with
sklearn pipelines; X is a list (or object array) of (H, W, 3) uint8 arrays
of possibly different sizes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .image import validate_image_u8
from .padding import PADDING_SCHEMES, pad_square
from .transforms import random_rotation, resize_bilinear

__all__ = ["SquarePad", "BilinearResize", "RandomRotation", "prepare_model_input"]


def _as_image_list(X) -> list[np.ndarray]:
    if isinstance(X, np.ndarray) and X.ndim == 4:
        imgs = [X[i] for i in range(X.shape[0])]
    else:
        imgs = list(X)
    for img in imgs:
        validate_image_u8(img)
    return imgs


class SquarePad(BaseEstimator, TransformerMixin):
    """Pad every image to a square under one of the six fill schemes."""

    def __init__(self, scheme: str = "reflection"):
        self.scheme = scheme

    def fit(self, X, y=None):
        if self.scheme not in PADDING_SCHEMES:
            raise ValueError(f"unknown padding scheme {self.scheme!r}")
        return self

    def transform(self, X):
        self.fit(X)
        return [pad_square(img, self.scheme) for img in _as_image_list(X)]


class BilinearResize(BaseEstimator, TransformerMixin):
    """Resize square images to a fixed side; stacks the result to (N, S, S, 3)."""

    def __init__(self, side: int = 64):
        self.side = side

    def fit(self, X, y=None):
        if self.side < 1:
            raise ValueError("side must be >= 1")
        return self

    def transform(self, X):
        self.fit(X)
        return np.stack([resize_bilinear(img, self.side) for img in _as_image_list(X)])


class RandomRotation(BaseEstimator, TransformerMixin):
    """Seeded random rotation augmentation, uniform in [-max_degrees, +max_degrees]."""

    def __init__(self, max_degrees: float = 15.0, seed: int = 0):
        self.max_degrees = max_degrees
        self.seed = seed

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        rng = np.random.default_rng(self.seed)
        return [random_rotation(img, rng, self.max_degrees) for img in _as_image_list(X)]


def prepare_model_input(img: np.ndarray, scheme: str, side: int) -> np.ndarray:
    """Pad a crop square under `scheme` and resize it to the classifier side."""
    return resize_bilinear(pad_square(img, scheme), side)
