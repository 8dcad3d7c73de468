"""Crop-to-tensor plumbing shared by training, evaluation, and explanation."""

from __future__ import annotations

import numpy as np

from ..imaging import prepare_model_input

__all__ = ["image_to_tensor", "batch_from_images", "LABEL_TO_INDEX", "INDEX_TO_LABEL"]

LABEL_TO_INDEX = {"F1": 0, "F2": 1}
INDEX_TO_LABEL = {v: k for k, v in LABEL_TO_INDEX.items()}


def image_to_tensor(img: np.ndarray, scheme: str, side: int, dtype) -> np.ndarray:
    """uint8 crop -> padded, resized, [0,1]-scaled (3, side, side) tensor."""
    square = prepare_model_input(img, scheme, side)
    return (square.astype(dtype) / dtype(255.0)).transpose(2, 0, 1)


def batch_from_images(images, scheme: str, side: int, dtype) -> np.ndarray:
    return np.stack([image_to_tensor(img, scheme, side, dtype) for img in images])
