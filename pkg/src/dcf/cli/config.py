"""Versioned run-configuration document: schema, defaults, and identity."""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from ..imaging import PADDING_SCHEMES
from ..nn import ModelSpec, TrainConfig
from ..pathways import DEFAULT_FREEZE_TAIL, OBJECTIVES, SETTINGS
from ..synthdata import GenConfig, SplitSpec

__all__ = [
    "CONFIG_VERSION",
    "PAPER_SCALE_SIDE",
    "ConfigError",
    "RunConfig",
    "default_document",
    "load_config",
    "normalize_document",
    "run_id",
]

CONFIG_VERSION = 1
PAPER_SCALE_SIDE = 1024

_SCHEME_ENUM = list(PADDING_SCHEMES)
_SETTING_ENUM = list(SETTINGS)

# every object is closed: a key the schema does not know is a config error,
# not something to ignore
_SCHEMA: dict = {
    "type": "object",
    "additionalProperties": False,
    "required": ["version"],
    "properties": {
        "version": {"const": CONFIG_VERSION},
        "base_seed": {"type": "integer"},
        "output_dir": {"type": "string", "minLength": 1},
        "data": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "generate": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "seed": {"type": "integer"},
                        "counts": {
                            "type": "object",
                            "additionalProperties": False,
                            "properties": {
                                name: {
                                    "type": "object",
                                    "additionalProperties": False,
                                    "properties": {
                                        "F1": {"type": "integer", "minimum": 5},
                                        "F2": {"type": "integer", "minimum": 5},
                                    },
                                    "required": ["F1", "F2"],
                                }
                                for name in ("A", "B")
                            },
                            "required": ["A", "B"],
                        },
                        "height_range": {
                            "type": "array",
                            "items": {"type": "integer"},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                        "aspect_range": {
                            "type": "array",
                            "items": {"type": "number"},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                        "drift": {"type": "number", "minimum": 0},
                        "noise_level": {"type": "number", "minimum": 0},
                        "blur_radius": {"type": "integer", "minimum": 0},
                        "illumination_range": {
                            "type": "array",
                            "items": {"type": "number"},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                        "time_bias": {
                            "type": "object",
                            "additionalProperties": False,
                            "properties": {
                                "A": {"type": "number"},
                                "B": {"type": "number"},
                            },
                            "required": ["A", "B"],
                        },
                    },
                },
                "root": {"type": "string", "minLength": 1},
                "split": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "test_fraction": {
                            "type": "number",
                            "exclusiveMinimum": 0,
                            "exclusiveMaximum": 1,
                        },
                        "shuffle_seed": {"type": "integer"},
                    },
                },
            },
        },
        "model": {"$ref": "#/$defs/model"},
        "train": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "learning_rate": {"type": "number", "exclusiveMinimum": 0},
                "weight_decay": {"type": "number", "minimum": 0},
                "beta1": {"type": "number"},
                "beta2": {"type": "number"},
                "eps": {"type": "number", "exclusiveMinimum": 0},
                "batch_size": {"type": "integer", "minimum": 1},
                "epochs": {"type": "integer", "minimum": 0},
                "augment": {"type": "boolean"},
            },
        },
        "psa": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "enabled": {"type": "boolean"},
                "schemes": {
                    "type": "array",
                    "items": {"enum": _SCHEME_ENUM},
                    "minItems": 1,
                    "uniqueItems": True,
                },
                "train_per_scheme": {"type": "boolean"},
                "objective": {"enum": list(OBJECTIVES)},
            },
        },
        "tps": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "settings": {
                    "type": "array",
                    "items": {"enum": _SETTING_ENUM},
                    "minItems": 1,
                    "uniqueItems": True,
                },
                "architectures": {
                    "type": "object",
                    "minProperties": 1,
                    "propertyNames": {"pattern": "^[A-Za-z0-9][A-Za-z0-9_-]*$"},
                    "additionalProperties": {"$ref": "#/$defs/model"},
                },
                "freeze_tail": {"type": "integer", "minimum": 1},
                "scheme": {"enum": _SCHEME_ENUM},
                "scheme_overrides": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {s: {"enum": _SCHEME_ENUM} for s in _SETTING_ENUM},
                },
                "objective": {"enum": list(OBJECTIVES)},
            },
        },
    },
    "$defs": {
        "model": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "input_side": {"type": "integer", "minimum": 4},
                "stem_channels": {"type": "integer", "minimum": 1},
                "stage_channels": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 1},
                    "minItems": 1,
                },
                "blocks_per_stage": {"type": "integer", "minimum": 1},
                "dtype": {"enum": ["float32", "float64"]},
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(_SCHEMA)


class ConfigError(ValueError):
    """A run configuration that cannot be used."""


def default_document() -> dict:
    """Desk-scale defaults: small inputs, few epochs, one architecture."""
    return {
        "version": CONFIG_VERSION,
        "base_seed": 0,
        "output_dir": "runs",
        "data": {
            "generate": {},
            "split": {"test_fraction": 0.2, "shuffle_seed": 0},
        },
        "model": {
            "input_side": 64,
            "stem_channels": 8,
            "stage_channels": [8, 16, 32],
            "blocks_per_stage": 1,
            "dtype": "float32",
        },
        "train": {
            "learning_rate": 1e-3,
            "weight_decay": 0.0,
            "beta1": 0.9,
            "beta2": 0.999,
            "eps": 1e-8,
            "batch_size": 32,
            "epochs": 8,
            "augment": True,
        },
        "psa": {
            "enabled": True,
            "schemes": list(PADDING_SCHEMES),
            "train_per_scheme": False,
            "objective": "sum",
        },
        "tps": {
            "settings": list(SETTINGS),
            "architectures": {"mini": {}},
            "freeze_tail": DEFAULT_FREEZE_TAIL,
            "scheme_overrides": {},
            "objective": "sum",
        },
    }


def _merge(base: dict, override: Mapping) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def normalize_document(doc: Mapping, *, paper_scale: bool = False) -> dict:
    """Validate a raw document and fill every omitted key with its default.

    The result is the run's identity: `run_id` hashes it, so two documents
    that spell the same effective configuration land in the same run
    directory.  `paper_scale` rewrites every input side to the full-scale
    value and nothing else.
    """
    if not isinstance(doc, Mapping):
        raise ConfigError("config must be a JSON object")
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {first.message}")
    merged = _merge(default_document(), doc)
    data = merged["data"]
    if "root" in data and "generate" in data:
        # an explicit dataset root replaces generation outright
        if "generate" in doc.get("data", {}):
            raise ConfigError("data must use either 'generate' or 'root', not both")
        del data["generate"]
    arch_overrides = merged["tps"]["architectures"]
    merged["tps"]["architectures"] = {
        name: _merge(merged["model"], arch_overrides[name])
        for name in sorted(arch_overrides)
    }
    if paper_scale:
        merged["model"]["input_side"] = PAPER_SCALE_SIDE
        for spec in merged["tps"]["architectures"].values():
            spec["input_side"] = PAPER_SCALE_SIDE
    return merged


def run_id(doc: Mapping) -> str:
    """Content hash of the normalized document; the run-directory name."""
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def _model_spec(section: Mapping) -> ModelSpec:
    return ModelSpec(
        input_side=int(section["input_side"]),
        stem_channels=int(section["stem_channels"]),
        stage_channels=tuple(int(c) for c in section["stage_channels"]),
        blocks_per_stage=int(section["blocks_per_stage"]),
        dtype=section["dtype"],
    )


@dataclass(frozen=True)
class RunConfig:
    """A validated, fully defaulted run configuration."""

    document: dict
    run_id: str

    @property
    def base_seed(self) -> int:
        return int(self.document["base_seed"])

    @property
    def output_dir(self) -> Path:
        return Path(self.document["output_dir"])

    @property
    def run_dir(self) -> Path:
        return self.output_dir / self.run_id

    @property
    def generate(self) -> GenConfig | None:
        data = self.document["data"]
        if "generate" not in data:
            return None
        section = data["generate"]
        kwargs: dict[str, Any] = {}
        for key, value in section.items():
            if key in ("height_range", "illumination_range"):
                kwargs[key] = (value[0], value[1])
            elif key == "aspect_range":
                kwargs[key] = (float(value[0]), float(value[1]))
            else:
                kwargs[key] = value
        kwargs.setdefault("seed", self.base_seed)
        return GenConfig(**kwargs)

    @property
    def data_root(self) -> Path | None:
        """Explicit dataset root, when the config points at existing data."""
        root = self.document["data"].get("root")
        return None if root is None else Path(root)

    @property
    def split_spec(self) -> SplitSpec:
        section = self.document["data"]["split"]
        return SplitSpec(
            test_fraction=float(section["test_fraction"]),
            shuffle_seed=int(section["shuffle_seed"]),
        )

    @property
    def model(self) -> ModelSpec:
        return _model_spec(self.document["model"])

    @property
    def train(self) -> TrainConfig:
        section = self.document["train"]
        return TrainConfig(
            learning_rate=float(section["learning_rate"]),
            weight_decay=float(section["weight_decay"]),
            beta1=float(section["beta1"]),
            beta2=float(section["beta2"]),
            eps=float(section["eps"]),
            batch_size=int(section["batch_size"]),
            epochs=int(section["epochs"]),
            augment=bool(section["augment"]),
        )

    @property
    def psa(self) -> dict:
        return self.document["psa"]

    @property
    def tps(self) -> dict:
        return self.document["tps"]

    def architectures(self) -> dict[str, ModelSpec]:
        return {
            name: _model_spec(section)
            for name, section in self.document["tps"]["architectures"].items()
        }


def load_config(path, *, paper_scale: bool = False) -> RunConfig:
    """Read, validate, and normalize a config file."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        with open(p, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    normalized = normalize_document(doc, paper_scale=paper_scale)
    cfg = RunConfig(document=normalized, run_id=run_id(normalized))
    # dataclass-level validation catches what the schema cannot express
    try:
        gen = cfg.generate
        if gen is not None:
            gen.validate()
        cfg.split_spec.validate()
        cfg.model.validate()
        cfg.train.validate()
        for spec in cfg.architectures().values():
            spec.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg
