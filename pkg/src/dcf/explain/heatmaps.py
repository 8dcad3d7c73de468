"""Class-activation heatmap exports: input, heatmap, overlay, index."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..imaging import prepare_model_input, write_pgm, write_ppm
from ..nn import INDEX_TO_LABEL, gradcam, predict_batch


def colorize(heat: np.ndarray) -> np.ndarray:
    """Map activations in [0, 1] onto a red intensity ramp, (H, W, 3) u8."""
    heat = np.asarray(heat, dtype=np.float64)
    out = np.zeros(heat.shape + (3,), dtype=np.uint8)
    out[..., 0] = np.floor(heat * 255.0 + 0.5).astype(np.uint8)
    return out


def overlay(base: np.ndarray, heat: np.ndarray) -> np.ndarray:
    """Equal-parts blend of the input and the colorized heatmap."""
    blend = 0.5 * base.astype(np.float64) + 0.5 * colorize(heat).astype(np.float64)
    return np.floor(blend + 0.5).astype(np.uint8)


def gradcam_report(state, samples, scheme: str, out_dir, unit: str | None = None) -> Path:
    """Write input PPM, heatmap PGM and overlay PPM per sample, plus an index.

    The heatmap explains the predicted class.  Returns the index path; the
    JSON maps each file triple to the sample's position, true label,
    predicted label and confidence.  3 * len(samples) + 1 files in total.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("at least one sample is required")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    side = state.spec.input_side

    probs = predict_batch(state, [s.image for s in samples], scheme)
    preds = (probs[:, 1] > probs[:, 0]).astype(np.int64)

    entries = []
    for i, sample in enumerate(samples):
        pred = int(preds[i])
        heat = gradcam(state, sample.image, scheme, target_class=pred, unit=unit)
        base = prepare_model_input(sample.image, scheme, side)
        heat_u8 = np.floor(heat * 255.0 + 0.5).astype(np.uint8)

        names = {
            "input": f"sample_{i:03d}_input.ppm",
            "heatmap": f"sample_{i:03d}_heatmap.pgm",
            "overlay": f"sample_{i:03d}_overlay.ppm",
        }
        write_ppm(out / names["input"], base)
        write_pgm(out / names["heatmap"], heat_u8)
        write_ppm(out / names["overlay"], overlay(base, heat))
        entries.append(
            {
                "id": i,
                "true_label": sample.label,
                "predicted_label": INDEX_TO_LABEL[pred],
                "confidence": float(probs[i, pred]),
                **names,
            }
        )

    index_path = out / "index.json"
    with open(index_path, "w", encoding="utf-8") as f:
        json.dump({"scheme": scheme, "samples": entries}, f, indent=2)
        f.write("\n")
    return index_path
