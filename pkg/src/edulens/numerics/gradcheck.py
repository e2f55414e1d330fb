"""Finite-difference verification of analytic gradients."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .autodiff import ParamTape, Tensor, backward


def grad_check(
    loss_fn: Callable[[ParamTape], Tensor],
    tape: ParamTape,
    probe_count: int,
    step: float = 1e-5,
    seed: int = 0,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Probes `probe_count` randomly chosen scalar parameter coordinates (all of
    them when probe_count covers the tape). The relative error for a probe is
    |g_analytic - g_fd| / max(1, |g_analytic|, |g_fd|).
    """
    tape.zero_grad()
    loss = loss_fn(tape)
    if not np.all(np.isfinite(loss.value)):
        raise ValueError("loss is not finite at the given parameters")
    backward(loss)
    analytic = {
        name: (t.grad.copy() if t.grad is not None else np.zeros_like(t.value))
        for name, t in tape.items()
    }

    coords = tape.coordinates()
    if probe_count < len(coords):
        rng = np.random.default_rng(seed)
        chosen = [coords[i] for i in rng.choice(len(coords), size=probe_count, replace=False)]
    else:
        chosen = coords

    max_rel_error = 0.0
    for name, idx in chosen:
        tensor = tape.get(name)
        original = tensor.value[idx]
        tensor.value[idx] = original + step
        loss_plus = float(loss_fn(tape).value)
        tensor.value[idx] = original - step
        loss_minus = float(loss_fn(tape).value)
        tensor.value[idx] = original
        if not (np.isfinite(loss_plus) and np.isfinite(loss_minus)):
            raise ValueError(f"loss not finite while probing {name}{list(idx)}")
        g_fd = (loss_plus - loss_minus) / (2.0 * step)
        g_an = float(analytic[name][idx])
        rel = abs(g_an - g_fd) / max(1.0, abs(g_an), abs(g_fd))
        max_rel_error = max(max_rel_error, rel)
    tape.zero_grad()
    return max_rel_error
