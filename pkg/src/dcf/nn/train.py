"""Single training run with shuffled mini-batches and best-val selection."""

from __future__ import annotations

import numpy as np

from ..imaging import random_rotation
from .layers import cross_entropy
from .metrics import evaluate
from .network import backward, forward
from .optim import adam_step
from .pipeline import LABEL_TO_INDEX, image_to_tensor
from .spec import ModelSpec, TrainConfig
from .state import AUGMENT_STREAM, SHUFFLE_STREAM, ModelState, init_state

__all__ = ["train_run"]


def train_run(
    init,
    train_items,
    val_items,
    cfg: TrainConfig,
    scheme: str,
    seed: int | None = None,
) -> tuple[ModelState, list[dict]]:
    """Train from `init` (a ModelState to continue, or a ModelSpec for a
    fresh net) and return the epoch snapshot with the best validation
    balanced accuracy (ties keep the earlier epoch) plus per-epoch history.

    The caller's `init` is never mutated. `seed` defaults to cfg.seed and
    drives initialization (fresh nets), shuffling, and augmentation.
    """
    cfg.validate()
    if not train_items or not val_items:
        raise ValueError("train and val sets must be non-empty")
    if seed is None:
        seed = cfg.seed

    if isinstance(init, ModelSpec):
        state = init_state(init, seed)
    elif isinstance(init, ModelState):
        state = init.copy()
    else:
        raise TypeError("init must be a ModelSpec or a ModelState")
    spec = state.spec
    side = spec.input_side
    dtype = spec.np_dtype

    if cfg.epochs == 0:
        return state, []

    labels = np.array([LABEL_TO_INDEX[item.label] for item in train_items], dtype=np.int64)
    raw = [item.image for item in train_items]
    # without augmentation the tensors never change: build them once
    fixed = None
    if not cfg.augment:
        fixed = np.stack([image_to_tensor(img, scheme, side, dtype) for img in raw])

    best_state = None
    best_val = -1.0
    history = []
    n = len(raw)

    for epoch in range(cfg.epochs):
        order = np.random.default_rng([seed, SHUFFLE_STREAM, epoch]).permutation(n)
        losses = []
        for lo in range(0, n, cfg.batch_size):
            idx = order[lo : lo + cfg.batch_size]
            if fixed is not None:
                batch = fixed[idx]
            else:
                tensors = []
                for i in idx:
                    rng = np.random.default_rng([seed, AUGMENT_STREAM, epoch, int(i)])
                    tensors.append(image_to_tensor(random_rotation(raw[i], rng), scheme, side, dtype))
                batch = np.stack(tensors)
            logits, cache = forward(state, batch, mode="train")
            losses.append(cross_entropy(logits, labels[idx]))
            grads = backward(state, cache, labels[idx])
            adam_step(state, grads, cfg)
        val_f1, val_f2, val_bal = evaluate(state, val_items, scheme)
        history.append(
            {
                "epoch": epoch,
                "train_loss": float(np.mean(losses)),
                "val_acc_f1": val_f1,
                "val_acc_f2": val_f2,
                "val_balanced": val_bal,
            }
        )
        if val_bal > best_val:
            best_val = val_bal
            best_state = state.copy()

    return best_state, history
