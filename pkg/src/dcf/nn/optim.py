"""Adam with bias correction and optional decoupled-from-nothing L2 term."""

from __future__ import annotations

import numpy as np

from .spec import TrainConfig
from .state import ModelState, unit_of_param

__all__ = ["adam_step"]


def adam_step(state: ModelState, grads: dict[str, np.ndarray], cfg: TrainConfig) -> ModelState:
    """One update: m, v moments, bias-corrected step on every unfrozen
    parameter; frozen parameters and their moments stay untouched."""
    cfg.validate()
    t = state.t + 1
    lr, b1, b2, eps = cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.eps
    for name in state.params:
        if state.frozen[unit_of_param(name)]:
            continue
        if name not in grads:
            raise ValueError(f"missing gradient for unfrozen parameter {name!r}")
        g = grads[name]
        if cfg.weight_decay != 0.0:
            g = g + cfg.weight_decay * state.params[name]
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1 - b1) * g
        v *= b2
        v += (1 - b2) * np.square(g)
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        state.params[name] -= lr * m_hat / (np.sqrt(v_hat) + eps)
    state.t = t
    return state
