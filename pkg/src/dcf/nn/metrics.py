"""Balanced evaluation and per-image confidence."""

from __future__ import annotations

import numpy as np

from .layers import softmax
from .network import forward
from .pipeline import INDEX_TO_LABEL, LABEL_TO_INDEX, batch_from_images
from .state import ModelState

__all__ = ["evaluate", "confidence", "predict_batch"]

_EVAL_CHUNK = 64


def predict_batch(state: ModelState, images, scheme: str) -> np.ndarray:
    """Class probabilities, (N, 2), evaluated in fixed-size chunks."""
    spec = state.spec
    probs = []
    for lo in range(0, len(images), _EVAL_CHUNK):
        chunk = images[lo : lo + _EVAL_CHUNK]
        batch = batch_from_images(chunk, scheme, spec.input_side, spec.np_dtype)
        logits, _ = forward(state, batch, mode="eval")
        probs.append(softmax(logits.astype(np.float64)))
    return np.concatenate(probs, axis=0)


def evaluate(state: ModelState, testset, scheme: str) -> tuple[float, float, float]:
    """(acc_F1 %, acc_F2 %, balanced %) over a list of labelled items.

    Balanced is the unweighted mean of the per-label accuracies, so class
    imbalance in the test block does not tilt the headline number.
    """
    if not testset:
        raise ValueError("test set is empty")
    labels = np.array([LABEL_TO_INDEX[item.label] for item in testset], dtype=np.int64)
    present = set(labels.tolist())
    if present != {0, 1}:
        missing = INDEX_TO_LABEL[({0, 1} - present).pop()]
        raise ValueError(f"test set lacks label {missing}")
    probs = predict_batch(state, [item.image for item in testset], scheme)
    # argmax with ties resolved to F1 (index 0)
    pred = (probs[:, 1] > probs[:, 0]).astype(np.int64)
    accs = []
    for cls in (0, 1):
        mask = labels == cls
        accs.append(100.0 * float((pred[mask] == cls).mean()))
    balanced = (accs[0] + accs[1]) / 2.0
    return accs[0], accs[1], balanced


def confidence(state: ModelState, img: np.ndarray, scheme: str) -> tuple[str, float]:
    """(predicted label, softmax probability of that label)."""
    probs = predict_batch(state, [img], scheme)[0]
    idx = 1 if probs[1] > probs[0] else 0
    return INDEX_TO_LABEL[idx], float(probs[idx])
