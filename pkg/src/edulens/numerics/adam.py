"""Adam optimizer over a ParamTape."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .autodiff import ParamTape


@dataclass
class AdamState:
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    first_moment: dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(state: AdamState, tape: ParamTape) -> None:
    """One bias-corrected Adam update; clears gradients afterwards."""
    for name, tensor in tape.items():
        if tensor.grad is None:
            raise ValueError(f"parameter {name!r} has no gradient")
        if not np.all(np.isfinite(tensor.grad)):
            raise ValueError(f"parameter {name!r} has a non-finite gradient")
    state.step_count += 1
    t = state.step_count
    for name, tensor in tape.items():
        g = tensor.grad
        m = state.first_moment.get(name)
        v = state.second_moment.get(name)
        if m is None:
            m = np.zeros_like(tensor.value)
            v = np.zeros_like(tensor.value)
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * g * g
        state.first_moment[name] = m
        state.second_moment[name] = v
        m_hat = m / (1.0 - state.beta1**t)
        v_hat = v / (1.0 - state.beta2**t)
        tensor.value = tensor.value - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    tape.zero_grad()
