"""Single-file binary checkpoints that restore training bit-exactly.

Layout: magic ``DCFM``, little-endian uint32 format version, uint32 header
length, a UTF-8 JSON header (architecture, counters, freeze mask, array
table), then every array as little-endian float64 in header order.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .spec import ModelSpec
from .state import ModelState, bn_names, param_names

__all__ = ["save_checkpoint", "load_checkpoint"]

_MAGIC = b"DCFM"
_VERSION = 1


def _array_table(state: ModelState) -> list[tuple[str, str]]:
    names = param_names(state.spec)
    table = [("params", n) for n in names]
    table += [("m", n) for n in names]
    table += [("v", n) for n in names]
    bns = bn_names(state.spec)
    table += [("bn_mean", n) for n in bns]
    table += [("bn_var", n) for n in bns]
    return table


def save_checkpoint(state: ModelState, path) -> Path:
    state.validate()
    spec = state.spec
    table = _array_table(state)
    header = {
        "spec": {
            "input_side": spec.input_side,
            "stem_channels": spec.stem_channels,
            "stage_channels": list(spec.stage_channels),
            "blocks_per_stage": spec.blocks_per_stage,
            "dtype": spec.dtype,
        },
        "t": state.t,
        "seed": state.seed,
        "frozen": state.frozen,
        "arrays": [
            {"table": tbl, "name": name, "shape": list(getattr(state, tbl)[name].shape)}
            for tbl, name in table
        ],
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", _VERSION, len(blob)))
        fh.write(blob)
        for tbl, name in table:
            fh.write(np.ascontiguousarray(getattr(state, tbl)[name], dtype="<f8").tobytes())
    return path


def load_checkpoint(path) -> ModelState:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError(f"{path} is not a model checkpoint")
        version, header_len = struct.unpack("<II", fh.read(8))
        if version != _VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        header = json.loads(fh.read(header_len).decode("utf-8"))
        spec = ModelSpec(
            input_side=header["spec"]["input_side"],
            stem_channels=header["spec"]["stem_channels"],
            stage_channels=tuple(header["spec"]["stage_channels"]),
            blocks_per_stage=header["spec"]["blocks_per_stage"],
            dtype=header["spec"]["dtype"],
        )
        dtype = spec.np_dtype
        tables: dict[str, dict[str, np.ndarray]] = {
            "params": {},
            "m": {},
            "v": {},
            "bn_mean": {},
            "bn_var": {},
        }
        for entry in header["arrays"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = fh.read(count * 8)
            if len(raw) != count * 8:
                raise ValueError("checkpoint truncated")
            arr = np.frombuffer(raw, dtype="<f8").reshape(shape).astype(dtype)
            tables[entry["table"]][entry["name"]] = arr
        trailing = fh.read(1)
        if trailing:
            raise ValueError("checkpoint has trailing bytes")
    state = ModelState(
        spec=spec,
        params=tables["params"],
        m=tables["m"],
        v=tables["v"],
        t=int(header["t"]),
        bn_mean=tables["bn_mean"],
        bn_var=tables["bn_var"],
        frozen={k: bool(v) for k, v in header["frozen"].items()},
        seed=int(header["seed"]),
    )
    state.validate()
    return state
