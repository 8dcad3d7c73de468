"""Temporal dataset container and its on-disk manifest layout."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..imaging import read_ppm, validate_image_u8, write_ppm
from .config import LABELS

__all__ = ["Item", "TemporalDataset", "save_dataset", "load_dataset"]


@dataclass(frozen=True)
class Item:
    image: np.ndarray
    label: str
    timestamp: int


@dataclass
class TemporalDataset:
    name: str
    seed: int
    items: list[Item]

    def validate(self) -> None:
        if not self.items:
            raise ValueError("dataset has no items")
        seen = set()
        last = None
        for item in self.items:
            validate_image_u8(item.image)
            if item.label not in LABELS:
                raise ValueError(f"unknown label {item.label!r}")
            seen.add(item.label)
            if last is not None and item.timestamp <= last:
                raise ValueError("timestamps must be strictly increasing")
            last = item.timestamp
        if seen != set(LABELS):
            raise ValueError(f"dataset must contain every label in {LABELS}")

    def __len__(self) -> int:
        return len(self.items)


def save_dataset(ds: TemporalDataset, root) -> Path:
    """Write `<root>/<name>/img_<idx>.ppm` files plus `manifest.json`."""
    ds.validate()
    out = Path(root) / ds.name
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for idx, item in enumerate(ds.items):
        fname = f"img_{idx:05d}.ppm"
        write_ppm(out / fname, item.image)
        entries.append({"file": fname, "label": item.label, "timestamp": item.timestamp})
    manifest = {"name": ds.name, "seed": ds.seed, "items": entries}
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")
    return out


def load_dataset(root, name: str) -> TemporalDataset:
    """Read a dataset back; the manifest is the source of truth for order."""
    base = Path(root) / name
    manifest_path = base / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no manifest at {manifest_path}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("name") != name:
        raise ValueError(f"manifest name {manifest.get('name')!r} does not match {name!r}")
    items = [
        Item(
            image=read_ppm(base / entry["file"]),
            label=entry["label"],
            timestamp=int(entry["timestamp"]),
        )
        for entry in manifest["items"]
    ]
    ds = TemporalDataset(name=name, seed=int(manifest["seed"]), items=items)
    ds.validate()
    return ds
