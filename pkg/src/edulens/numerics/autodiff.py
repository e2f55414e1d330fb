"""Reverse-mode differentiation over a fixed operator set on float64 arrays.

The encoder's computation graph is static per batch, so a minimal tape
suffices: each Tensor records its parents and one gradient closure per
parent. Operators cover exactly what the encoder, discriminator, and loss
need: matmul, broadcast add, elementwise multiply, relu, softplus, scaling,
transpose, concatenation, and reductions.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np


class Tensor:
    __slots__ = ("value", "grad", "_parents", "_grad_fns")

    def __init__(
        self,
        value,
        parents: tuple["Tensor", ...] = (),
        grad_fns: tuple[Callable[[np.ndarray], np.ndarray], ...] = (),
    ):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self._parents = parents
        self._grad_fns = grad_fns

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def __repr__(self) -> str:
        return f"Tensor(shape={self.value.shape})"


def constant(value) -> Tensor:
    return Tensor(value)


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to the original operand shape."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)


def add(a: Tensor, b: Tensor) -> Tensor:
    return Tensor(
        a.value + b.value,
        parents=(a, b),
        grad_fns=(
            lambda g: _unbroadcast(g, a.value.shape),
            lambda g: _unbroadcast(g, b.value.shape),
        ),
    )


def mul(a: Tensor, b: Tensor) -> Tensor:
    return Tensor(
        a.value * b.value,
        parents=(a, b),
        grad_fns=(
            lambda g: _unbroadcast(g * b.value, a.value.shape),
            lambda g: _unbroadcast(g * a.value, b.value.shape),
        ),
    )


def scale(a: Tensor, factor: float) -> Tensor:
    return Tensor(a.value * factor, parents=(a,), grad_fns=(lambda g: g * factor,))


def neg(a: Tensor) -> Tensor:
    return scale(a, -1.0)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    return Tensor(
        a.value @ b.value,
        parents=(a, b),
        grad_fns=(
            lambda g: g @ b.value.T,
            lambda g: a.value.T @ g,
        ),
    )


def transpose(a: Tensor) -> Tensor:
    return Tensor(a.value.T, parents=(a,), grad_fns=(lambda g: g.T,))


def relu(a: Tensor) -> Tensor:
    mask = a.value > 0
    return Tensor(np.where(mask, a.value, 0.0), parents=(a,), grad_fns=(lambda g: g * mask,))


def softplus(a: Tensor) -> Tensor:
    # log(1 + exp(x)), computed stably for large |x|.
    x = a.value
    out = np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))
    sig = _sigmoid(x)
    return Tensor(out, parents=(a,), grad_fns=(lambda g: g * sig,))


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def concat(parts: Sequence[Tensor], axis: int = 1) -> Tensor:
    values = [p.value for p in parts]
    offsets = np.cumsum([0] + [v.shape[axis] for v in values])

    def make_fn(i: int):
        lo, hi = offsets[i], offsets[i + 1]
        return lambda g: np.take(g, np.arange(lo, hi), axis=axis)

    return Tensor(
        np.concatenate(values, axis=axis),
        parents=tuple(parts),
        grad_fns=tuple(make_fn(i) for i in range(len(parts))),
    )


def sum_all(a: Tensor) -> Tensor:
    return Tensor(
        a.value.sum(),
        parents=(a,),
        grad_fns=(lambda g: np.broadcast_to(g, a.value.shape).copy(),),
    )


def mean_all(a: Tensor) -> Tensor:
    n = a.value.size
    return Tensor(
        a.value.mean(),
        parents=(a,),
        grad_fns=(lambda g: np.broadcast_to(g / n, a.value.shape).copy(),),
    )


def sum_rows(a: Tensor) -> Tensor:
    """Column-wise sum: (N, d) -> (d,). The sum READOUT."""
    return Tensor(
        a.value.sum(axis=0),
        parents=(a,),
        grad_fns=(lambda g: np.broadcast_to(g, a.value.shape).copy(),),
    )


def dot(a: Tensor, b: Tensor) -> Tensor:
    """Inner product of two 1-d tensors."""
    return sum_all(mul(a, b))


def backward(root: Tensor) -> None:
    """Accumulate gradients of a scalar root into every reachable tensor."""
    if root.value.size != 1:
        raise ValueError(f"backward requires a scalar root, got shape {root.value.shape}")
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in seen:
                stack.append((parent, False))
    root.grad = np.ones_like(root.value)
    for node in reversed(order):
        if node.grad is None:
            continue
        for parent, grad_fn in zip(node._parents, node._grad_fns):
            contribution = grad_fn(node.grad)
            if parent.grad is None:
                parent.grad = contribution
            else:
                parent.grad = parent.grad + contribution


class ParamTape:
    """Ordered registry of named parameter tensors and their gradients.

    Registration order is the deterministic iteration order used by the
    optimizer and the gradient checker.
    """

    def __init__(self):
        self._params: dict[str, Tensor] = {}

    def register(self, name: str, value) -> Tensor:
        if name in self._params:
            raise ValueError(f"parameter {name!r} already registered")
        tensor = Tensor(np.array(value, dtype=np.float64))
        self._params[name] = tensor
        return tensor

    def names(self) -> list[str]:
        return list(self._params)

    def get(self, name: str) -> Tensor:
        return self._params[name]

    def items(self):
        return self._params.items()

    def __len__(self) -> int:
        return len(self._params)

    def zero_grad(self) -> None:
        for tensor in self._params.values():
            tensor.grad = None

    def num_scalars(self) -> int:
        return sum(t.value.size for t in self._params.values())

    def coordinates(self) -> list[tuple[str, tuple[int, ...]]]:
        """Every scalar parameter coordinate, in registration order."""
        coords = []
        for name, tensor in self._params.items():
            for idx in np.ndindex(tensor.value.shape):
                coords.append((name, idx))
        return coords
