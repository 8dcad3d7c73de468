"""Forward and backward passes over the residual graph."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .layers import (
    bn_backward,
    bn_forward,
    conv_backward,
    conv_forward,
    dense_backward,
    dense_forward,
    global_avg_pool_backward,
    global_avg_pool_forward,
    relu_backward,
    relu_forward,
    softmax_ce_backward,
)
from .state import ModelState, block_channel_plan, unit_of_param

__all__ = ["forward", "backward", "ForwardCache"]


@dataclass
class ForwardCache:
    mode: str
    step: int
    unit_caches: dict[str, dict]
    unit_outputs: dict[str, np.ndarray]
    logits: np.ndarray
    consumed: bool = field(default=False)


def _bn_apply(state: ModelState, name: str, x, mode: str, unit_frozen: bool):
    use_batch = mode == "train" and not unit_frozen
    update = use_batch
    out, cache, new_mean, new_var = bn_forward(
        x,
        state.params[f"{name}.gamma"],
        state.params[f"{name}.beta"],
        state.bn_mean[name],
        state.bn_var[name],
        use_batch_stats=use_batch,
        update_running=update,
    )
    if update:
        state.bn_mean[name] = new_mean
        state.bn_var[name] = new_var
    return out, cache


def _stem_forward(state, x, mode):
    frozen = state.frozen["stem"]
    h, conv_cache = conv_forward(x, state.params["stem.conv.w"], stride=1)
    b, bn_cache = _bn_apply(state, "stem.bn", h, mode, frozen)
    out, relu_mask = relu_forward(b)
    return out, {"conv": conv_cache, "bn": bn_cache, "relu": relu_mask}


def _stem_backward(state, dout, cache, grads):
    d = relu_backward(dout, cache["relu"])
    d, dgamma, dbeta = bn_backward(d, cache["bn"])
    if grads is not None and not state.frozen["stem"]:
        grads["stem.bn.gamma"] = dgamma
        grads["stem.bn.beta"] = dbeta
    d, dw = conv_backward(d, cache["conv"])
    if grads is not None and not state.frozen["stem"]:
        grads["stem.conv.w"] = dw
    return d


def _block_forward(state, unit, x, stride, mode):
    frozen = state.frozen[unit]
    has_proj = f"{unit}.proj.w" in state.params
    cache: dict = {"has_proj": has_proj}

    h1, cache["conv1"] = conv_forward(x, state.params[f"{unit}.conv1.w"], stride=stride)
    b1, cache["bn1"] = _bn_apply(state, f"{unit}.bn1", h1, mode, frozen)
    r1, cache["relu1"] = relu_forward(b1)
    h2, cache["conv2"] = conv_forward(r1, state.params[f"{unit}.conv2.w"], stride=1)
    b2, cache["bn2"] = _bn_apply(state, f"{unit}.bn2", h2, mode, frozen)

    if has_proj:
        sp, cache["proj"] = conv_forward(x, state.params[f"{unit}.proj.w"], stride=stride)
        skip, cache["bnp"] = _bn_apply(state, f"{unit}.bnp", sp, mode, frozen)
    else:
        skip = x

    out, cache["relu_out"] = relu_forward(b2 + skip)
    return out, cache


def _block_backward(state, unit, dout, cache, grads):
    frozen = state.frozen[unit]
    collect = grads is not None and not frozen

    dsum = relu_backward(dout, cache["relu_out"])

    d, dgamma, dbeta = bn_backward(dsum, cache["bn2"])
    if collect:
        grads[f"{unit}.bn2.gamma"] = dgamma
        grads[f"{unit}.bn2.beta"] = dbeta
    d, dw = conv_backward(d, cache["conv2"])
    if collect:
        grads[f"{unit}.conv2.w"] = dw
    d = relu_backward(d, cache["relu1"])
    d, dgamma, dbeta = bn_backward(d, cache["bn1"])
    if collect:
        grads[f"{unit}.bn1.gamma"] = dgamma
        grads[f"{unit}.bn1.beta"] = dbeta
    dx, dw = conv_backward(d, cache["conv1"])
    if collect:
        grads[f"{unit}.conv1.w"] = dw

    if cache["has_proj"]:
        dskip, dgamma, dbeta = bn_backward(dsum, cache["bnp"])
        if collect:
            grads[f"{unit}.bnp.gamma"] = dgamma
            grads[f"{unit}.bnp.beta"] = dbeta
        dskip, dw = conv_backward(dskip, cache["proj"])
        if collect:
            grads[f"{unit}.proj.w"] = dw
        dx = dx + dskip
    else:
        dx = dx + dsum
    return dx


def forward(state: ModelState, batch: np.ndarray, mode: str) -> tuple[np.ndarray, ForwardCache]:
    """Run the net on a (N, 3, S, S) batch; returns logits and the cache."""
    if mode not in ("train", "eval"):
        raise ValueError("mode must be 'train' or 'eval'")
    spec = state.spec
    batch = np.asarray(batch)
    if batch.ndim != 4 or batch.shape[1] != 3 or batch.shape[2:] != (spec.input_side,) * 2:
        raise ValueError(
            f"batch must have shape (N, 3, {spec.input_side}, {spec.input_side}), got {batch.shape}"
        )
    if batch.dtype != spec.np_dtype:
        batch = batch.astype(spec.np_dtype)

    unit_caches: dict[str, dict] = {}
    unit_outputs: dict[str, np.ndarray] = {}

    x, unit_caches["stem"] = _stem_forward(state, batch, mode)
    unit_outputs["stem"] = x
    for unit, _in_ch, _out_ch, stride in block_channel_plan(spec):
        x, unit_caches[unit] = _block_forward(state, unit, x, stride, mode)
        unit_outputs[unit] = x

    pooled, pool_cache = global_avg_pool_forward(x)
    logits, dense_cache = dense_forward(pooled, state.params["head.w"], state.params["head.b"])
    unit_caches["head"] = {"pool": pool_cache, "dense": dense_cache}

    return logits, ForwardCache(
        mode=mode,
        step=state.t,
        unit_caches=unit_caches,
        unit_outputs=unit_outputs,
        logits=logits,
    )


def _head_backward(state, dlogits, cache, grads):
    d, dw, db = dense_backward(dlogits, cache["dense"])
    if grads is not None and not state.frozen["head"]:
        grads["head.w"] = dw
        grads["head.b"] = db
    return global_avg_pool_backward(d, cache["pool"])


def backprop_to_unit(state: ModelState, cache: ForwardCache, dlogits, stop_unit: str):
    """Gradient of a scalar in logit space w.r.t. `stop_unit`'s output.

    Used by the activation-map machinery; collects no parameter gradients.
    """
    if stop_unit not in cache.unit_outputs:
        raise ValueError(f"unknown unit {stop_unit!r}")
    d = _head_backward(state, np.asarray(dlogits, dtype=state.spec.np_dtype), cache.unit_caches["head"], None)
    plan = block_channel_plan(state.spec)
    for unit, _i, _o, _s in reversed(plan):
        if unit == stop_unit:
            return d
        d = _block_backward(state, unit, d, cache.unit_caches[unit], None)
    if stop_unit == "stem":
        return d
    raise ValueError(f"unit {stop_unit!r} not reached in backward order")


def backward(state: ModelState, cache: ForwardCache, labels) -> dict[str, np.ndarray]:
    """Gradients of mean cross-entropy for every unfrozen parameter."""
    if cache.mode != "train":
        raise ValueError("backward needs a cache from a train-mode forward")
    if cache.consumed:
        raise ValueError("cache was already consumed by a previous backward")
    if cache.step != state.t:
        raise ValueError("stale cache: parameters changed since the forward pass")
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (cache.logits.shape[0],):
        raise ValueError("labels must be one int per batch row")
    cache.consumed = True

    grads: dict[str, np.ndarray] = {}
    dlogits = softmax_ce_backward(cache.logits, labels).astype(state.spec.np_dtype)
    d = _head_backward(state, dlogits, cache.unit_caches["head"], grads)

    plan = block_channel_plan(state.spec)
    # once every unit below is frozen there is nothing left to collect
    unfrozen_idx = [i for i, (u, *_r) in enumerate(plan) if not state.frozen[u]]
    lowest_needed = 0 if not state.frozen["stem"] else (min(unfrozen_idx) if unfrozen_idx else None)

    for idx in range(len(plan) - 1, -1, -1):
        if lowest_needed is None or idx < lowest_needed:
            break
        unit = plan[idx][0]
        d = _block_backward(state, unit, d, cache.unit_caches[unit], grads)
    if not state.frozen["stem"]:
        _stem_backward(state, d, cache.unit_caches["stem"], grads)

    expected = set(state.trainable_params())
    assert set(grads) == expected, "gradient table mismatch"
    return grads
