"""Mean-pixel/confidence tables over correctly predicted samples."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..imaging import mean_pixel, prepare_model_input
from ..nn import LABEL_TO_INDEX, predict_batch
from ..synthdata import LABELS

CSV_COLUMNS = (
    "testset",
    "scheme",
    "label",
    "avg_mean_pixel",
    "avg_confidence",
    "accuracy",
    "n_correct",
)


@dataclass(frozen=True)
class QuantRow:
    """One (test set, scheme, label) cell of the quantitative table.

    Averages cover only the correctly predicted samples of that label;
    ``accuracy`` is the set's balanced accuracy under the scheme, repeated
    on both label rows.  Averages are None when nothing was correct.
    """

    testset: str
    scheme: str
    label: str
    avg_mean_pixel: float | None
    avg_confidence: float | None
    accuracy: float
    n_correct: int

    def to_dict(self) -> dict:
        return {
            "testset": self.testset,
            "scheme": self.scheme,
            "label": self.label,
            "avg_mean_pixel": self.avg_mean_pixel,
            "avg_confidence": self.avg_confidence,
            "accuracy": self.accuracy,
            "n_correct": self.n_correct,
        }


def quant_table(state, testsets: dict, schemes) -> list[QuantRow]:
    """Rows ordered (test set, scheme, label).

    ``testsets`` maps a set id to its labelled items.  The mean pixel of a
    sample is taken on the padded-and-resized image the model actually saw,
    normalized to [0, 1]; confidence is the predicted-class probability.
    """
    schemes = tuple(schemes)
    side = state.spec.input_side
    rows = []
    for set_id, items in testsets.items():
        items = list(items)
        if not items:
            raise ValueError(f"test set {set_id!r} is empty")
        labels = np.array([LABEL_TO_INDEX[it.label] for it in items], dtype=np.int64)
        if set(labels.tolist()) != {0, 1}:
            raise ValueError(f"test set {set_id!r} must contain both labels")
        for scheme in schemes:
            probs = predict_batch(state, [it.image for it in items], scheme)
            pred = (probs[:, 1] > probs[:, 0]).astype(np.int64)
            correct = pred == labels
            per_label_acc = [
                100.0 * float(correct[labels == cls].mean()) for cls in (0, 1)
            ]
            accuracy = (per_label_acc[0] + per_label_acc[1]) / 2.0
            mean_pixels = np.array(
                [mean_pixel(prepare_model_input(it.image, scheme, side)) for it in items]
            )
            conf = probs[np.arange(len(items)), pred]
            for label in LABELS:
                mask = correct & (labels == LABEL_TO_INDEX[label])
                n = int(mask.sum())
                rows.append(
                    QuantRow(
                        testset=set_id,
                        scheme=scheme,
                        label=label,
                        avg_mean_pixel=float(mean_pixels[mask].mean()) if n else None,
                        avg_confidence=float(conf[mask].mean()) if n else None,
                        accuracy=accuracy,
                        n_correct=n,
                    )
                )
    return rows


def write_quant_csv(path, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.testset,
                    r.scheme,
                    r.label,
                    "" if r.avg_mean_pixel is None else r.avg_mean_pixel,
                    "" if r.avg_confidence is None else r.avg_confidence,
                    r.accuracy,
                    r.n_correct,
                ]
            )
    return path


def read_quant_csv(path) -> list[QuantRow]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        rows = []
        for row in reader:
            rows.append(
                QuantRow(
                    testset=row["testset"],
                    scheme=row["scheme"],
                    label=row["label"],
                    avg_mean_pixel=float(row["avg_mean_pixel"]) if row["avg_mean_pixel"] else None,
                    avg_confidence=float(row["avg_confidence"]) if row["avg_confidence"] else None,
                    accuracy=float(row["accuracy"]),
                    n_correct=int(row["n_correct"]),
                )
            )
    return rows
