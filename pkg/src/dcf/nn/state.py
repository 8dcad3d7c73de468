"""Model state: parameters, optimizer moments, BN statistics, freeze mask."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spec import N_CLASSES, ModelSpec

# SeedSequence stream tags used by this package
INIT_STREAM = 0
SHUFFLE_STREAM = 1
AUGMENT_STREAM = 2

__all__ = [
    "ModelState",
    "init_state",
    "freeze",
    "param_names",
    "bn_names",
    "unit_of_param",
    "block_channel_plan",
]


def block_channel_plan(spec: ModelSpec) -> list[tuple[str, int, int, int]]:
    """Per block: (unit, in_channels, out_channels, stride)."""
    plan = []
    prev = spec.stem_channels
    for i, out_ch in enumerate(spec.stage_channels):
        for j in range(spec.blocks_per_stage):
            stride = 2 if (i > 0 and j == 0) else 1
            plan.append((f"s{i}b{j}", prev, out_ch, stride))
            prev = out_ch
    return plan


def _block_param_shapes(unit, in_ch, out_ch, stride):
    shapes = [
        (f"{unit}.conv1.w", (out_ch, in_ch, 3, 3)),
        (f"{unit}.bn1.gamma", (out_ch,)),
        (f"{unit}.bn1.beta", (out_ch,)),
        (f"{unit}.conv2.w", (out_ch, out_ch, 3, 3)),
        (f"{unit}.bn2.gamma", (out_ch,)),
        (f"{unit}.bn2.beta", (out_ch,)),
    ]
    if stride != 1 or in_ch != out_ch:
        shapes += [
            (f"{unit}.proj.w", (out_ch, in_ch, 1, 1)),
            (f"{unit}.bnp.gamma", (out_ch,)),
            (f"{unit}.bnp.beta", (out_ch,)),
        ]
    return shapes


def _param_shapes(spec: ModelSpec) -> list[tuple[str, tuple[int, ...]]]:
    shapes = [
        ("stem.conv.w", (spec.stem_channels, 3, 3, 3)),
        ("stem.bn.gamma", (spec.stem_channels,)),
        ("stem.bn.beta", (spec.stem_channels,)),
    ]
    for unit, in_ch, out_ch, stride in block_channel_plan(spec):
        shapes += _block_param_shapes(unit, in_ch, out_ch, stride)
    last = spec.stage_channels[-1]
    shapes += [("head.w", (last, N_CLASSES)), ("head.b", (N_CLASSES,))]
    return shapes


def param_names(spec: ModelSpec) -> list[str]:
    return [name for name, _ in _param_shapes(spec)]


def bn_names(spec: ModelSpec) -> list[str]:
    names = ["stem.bn"]
    for unit, in_ch, out_ch, stride in block_channel_plan(spec):
        names += [f"{unit}.bn1", f"{unit}.bn2"]
        if stride != 1 or in_ch != out_ch:
            names.append(f"{unit}.bnp")
    return names


def unit_of_param(name: str) -> str:
    return name.split(".", 1)[0]


@dataclass
class ModelState:
    spec: ModelSpec
    params: dict[str, np.ndarray]
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    t: int
    bn_mean: dict[str, np.ndarray]
    bn_var: dict[str, np.ndarray]
    frozen: dict[str, bool]
    seed: int = 0

    def validate(self) -> None:
        self.spec.validate()
        expected = dict(_param_shapes(self.spec))
        if set(self.params) != set(expected):
            raise ValueError("parameter table does not match the architecture")
        for name, shape in expected.items():
            for table, label in ((self.params, "param"), (self.m, "m"), (self.v, "v")):
                if name not in table or table[name].shape != shape:
                    raise ValueError(f"{label} {name!r} has wrong shape")
        for bn in bn_names(self.spec):
            if bn not in self.bn_mean or bn not in self.bn_var:
                raise ValueError(f"missing running stats for {bn!r}")
        if set(self.frozen) != set(self.spec.units()):
            raise ValueError("freeze mask must cover every unit")
        if self.t < 0:
            raise ValueError("step counter must be >= 0")

    def copy(self) -> "ModelState":
        return ModelState(
            spec=self.spec,
            params={k: a.copy() for k, a in self.params.items()},
            m={k: a.copy() for k, a in self.m.items()},
            v={k: a.copy() for k, a in self.v.items()},
            t=self.t,
            bn_mean={k: a.copy() for k, a in self.bn_mean.items()},
            bn_var={k: a.copy() for k, a in self.bn_var.items()},
            frozen=dict(self.frozen),
            seed=self.seed,
        )

    def trainable_params(self) -> list[str]:
        return [p for p in self.params if not self.frozen[unit_of_param(p)]]


def init_state(spec: ModelSpec, seed: int) -> ModelState:
    """He-normal conv/dense weights, identity BN, zeroed moments."""
    spec.validate()
    rng = np.random.default_rng([seed, INIT_STREAM])
    dtype = spec.np_dtype
    params: dict[str, np.ndarray] = {}
    for name, shape in _param_shapes(spec):
        leaf = name.rsplit(".", 1)[-1]
        if leaf == "gamma":
            arr = np.ones(shape, dtype)
        elif leaf in ("beta", "b"):
            arr = np.zeros(shape, dtype)
        elif name == "head.w":
            std = np.sqrt(2.0 / shape[0])
            arr = (rng.normal(0.0, std, size=shape)).astype(dtype)
        else:  # conv weight, fan_in = C*k*k
            fan_in = shape[1] * shape[2] * shape[3]
            std = np.sqrt(2.0 / fan_in)
            arr = (rng.normal(0.0, std, size=shape)).astype(dtype)
        params[name] = arr
    zeros = lambda: {k: np.zeros_like(a) for k, a in params.items()}
    state = ModelState(
        spec=spec,
        params=params,
        m=zeros(),
        v=zeros(),
        t=0,
        bn_mean={bn: np.zeros(params[f"{bn}.gamma"].shape, dtype) for bn in bn_names(spec)},
        bn_var={bn: np.ones(params[f"{bn}.gamma"].shape, dtype) for bn in bn_names(spec)},
        frozen={unit: False for unit in spec.units()},
        seed=seed,
    )
    state.validate()
    return state


def freeze(state: ModelState, trainable_tail: int) -> ModelState:
    """Freeze everything except the head and the last `trainable_tail - 1`
    units below it (blocks, then the stem). Mutates and returns `state`."""
    units = state.spec.units()
    depth = len(units) - 1  # stem + blocks
    if trainable_tail < 1:
        raise ValueError("trainable_tail must be >= 1 (the head always trains)")
    if trainable_tail > depth + 1:
        raise ValueError(f"trainable_tail {trainable_tail} exceeds model depth {depth}")
    n_below = trainable_tail - 1
    trainable = set(units[len(units) - 1 - n_below :])
    for unit in units:
        state.frozen[unit] = unit not in trainable
    return state
