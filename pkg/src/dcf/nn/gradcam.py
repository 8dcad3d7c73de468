"""Class activation heatmaps from gradient-weighted feature maps."""

from __future__ import annotations

import numpy as np

from ..imaging import resize_bilinear_float
from .network import backprop_to_unit, forward
from .pipeline import image_to_tensor
from .state import ModelState

__all__ = ["gradcam", "default_target_unit"]


def default_target_unit(state: ModelState) -> str:
    """Output of the last residual block (the final convolutional stage)."""
    return state.spec.block_units()[-1]


def gradcam(
    state: ModelState,
    img: np.ndarray,
    scheme: str,
    target_class: int,
    unit: str | None = None,
) -> np.ndarray:
    """Heatmap in [0, 1] of shape (input_side, input_side).

    Channel weights are the spatial means of d(logit_target)/d(activation);
    the map is the ReLU of the weighted activation sum, min-max normalized
    (an all-zero map stays zero) and bilinearly upsampled to the input side.
    """
    spec = state.spec
    if target_class not in (0, 1):
        raise ValueError("target_class must be 0 (F1) or 1 (F2)")
    if unit is None:
        unit = default_target_unit(state)
    conv_units = ["stem", *spec.block_units()]
    if unit not in conv_units:
        raise ValueError(f"unit {unit!r} is not a convolutional unit of this model")

    batch = image_to_tensor(img, scheme, spec.input_side, spec.np_dtype)[None]
    _, cache = forward(state, batch, mode="eval")

    acts = cache.unit_outputs[unit][0]  # (C, h, w)
    dlogits = np.zeros((1, 2), dtype=spec.np_dtype)
    dlogits[0, target_class] = 1.0
    dacts = backprop_to_unit(state, cache, dlogits, unit)[0]

    alpha = dacts.mean(axis=(1, 2))  # (C,)
    cam = np.maximum((alpha[:, None, None] * acts).sum(axis=0), 0.0).astype(np.float64)
    lo, hi = cam.min(), cam.max()
    if hi > lo:
        cam = (cam - lo) / (hi - lo)
    else:
        cam = np.zeros_like(cam)
    return np.clip(resize_bilinear_float(cam, spec.input_side), 0.0, 1.0)
