"""sklearn-style classifier facade over the training loop."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .metrics import predict_batch
from .pipeline import INDEX_TO_LABEL, LABEL_TO_INDEX
from .spec import ModelSpec, TrainConfig
from .train import train_run

__all__ = ["ResidualNetClassifier"]


class _XItem:
    __slots__ = ("image", "label")

    def __init__(self, image, label):
        self.image = image
        self.label = label


class ResidualNetClassifier(BaseEstimator, ClassifierMixin):
    """Residual-net classifier for variable-size uint8 crops.

    X is a sequence of (H, W, 3) uint8 arrays; y holds "F1"/"F2" labels.
    A validation slice is carved from the end of X for epoch selection.
    """

    def __init__(
        self,
        input_side: int = 64,
        stem_channels: int = 8,
        stage_channels: tuple[int, ...] = (8, 16, 32),
        blocks_per_stage: int = 1,
        dtype: str = "float32",
        padding: str = "reflection",
        learning_rate: float = 1e-3,
        batch_size: int = 32,
        epochs: int = 10,
        augment: bool = True,
        val_fraction: float = 0.2,
        seed: int = 0,
    ):
        self.input_side = input_side
        self.stem_channels = stem_channels
        self.stage_channels = stage_channels
        self.blocks_per_stage = blocks_per_stage
        self.dtype = dtype
        self.padding = padding
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.epochs = epochs
        self.augment = augment
        self.val_fraction = val_fraction
        self.seed = seed

    def _spec(self) -> ModelSpec:
        return ModelSpec(
            input_side=self.input_side,
            stem_channels=self.stem_channels,
            stage_channels=tuple(self.stage_channels),
            blocks_per_stage=self.blocks_per_stage,
            dtype=self.dtype,
        )

    def fit(self, X, y):
        labels = [str(v) for v in y]
        if any(v not in LABEL_TO_INDEX for v in labels):
            raise ValueError(f"labels must be in {sorted(LABEL_TO_INDEX)}")
        items = [_XItem(img, lab) for img, lab in zip(X, labels)]
        if len(items) < 5:
            raise ValueError("need at least 5 samples")
        if not (0.0 < self.val_fraction < 1.0):
            raise ValueError("val_fraction must lie in (0, 1)")
        n_val = max(1, int(round(len(items) * self.val_fraction)))
        if n_val >= len(items):
            raise ValueError("val_fraction leaves nothing to train on")
        train_items, val_items = items[:-n_val], items[-n_val:]
        if len({i.label for i in val_items}) < 2 or len({i.label for i in train_items}) < 2:
            raise ValueError("train and val slices must each contain both labels")
        cfg = TrainConfig(
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            epochs=self.epochs,
            augment=self.augment,
            seed=self.seed,
        )
        self.state_, self.history_ = train_run(
            self._spec(), train_items, val_items, cfg, self.padding
        )
        self.classes_ = np.array(["F1", "F2"])
        return self

    def predict_proba(self, X):
        self._check_fitted()
        return predict_batch(self.state_, list(X), self.padding)

    def predict(self, X):
        probs = self.predict_proba(X)
        idx = (probs[:, 1] > probs[:, 0]).astype(int)
        return np.array([INDEX_TO_LABEL[i] for i in idx])

    def score(self, X, y):
        """Balanced accuracy in [0, 1]."""
        self._check_fitted()
        pred = self.predict(X)
        truth = np.array([str(v) for v in y])
        accs = []
        for label in ("F1", "F2"):
            mask = truth == label
            if not mask.any():
                raise ValueError(f"scoring set lacks label {label}")
            accs.append(float((pred[mask] == label).mean()))
        return sum(accs) / len(accs)

    def _check_fitted(self):
        if not hasattr(self, "state_"):
            raise RuntimeError("classifier is not fitted")
