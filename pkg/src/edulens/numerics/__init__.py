"""Numeric substrate: reverse-mode autodiff, Adam, gradient checking, PCA."""

from .adam import AdamState, adam_step
from .autodiff import (
    ParamTape,
    Tensor,
    add,
    backward,
    concat,
    constant,
    dot,
    matmul,
    mean_all,
    mul,
    neg,
    relu,
    scale,
    softplus,
    sum_all,
    sum_rows,
    transpose,
)
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .gradcheck import grad_check
from .pca import PcaResult, pca_fit_transform

__all__ = [
    "AdamState",
    "CheckpointError",
    "ParamTape",
    "PcaResult",
    "Tensor",
    "adam_step",
    "add",
    "backward",
    "concat",
    "constant",
    "dot",
    "grad_check",
    "load_checkpoint",
    "matmul",
    "mean_all",
    "mul",
    "neg",
    "pca_fit_transform",
    "relu",
    "save_checkpoint",
    "scale",
    "softplus",
    "sum_all",
    "sum_rows",
    "transpose",
]
