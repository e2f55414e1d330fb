"""Versioned model checkpoint: named parameter matrices, scaler stats, config.

JSON with full-precision floats (Python's repr round-trips float64 exactly),
so load(save(x)) is lossless and byte-identical for identical inputs.
"""

from __future__ import annotations

import json

import numpy as np

from .autodiff import ParamTape

FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Unreadable or incompatible checkpoint file."""


def checkpoint_payload(config: dict, tape: ParamTape, scaler_stats: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "edulens-model",
        "config": config,
        "scaler": scaler_stats,
        "params": {
            name: {
                "shape": list(tensor.value.shape),
                "data": [float(x) for x in tensor.value.ravel()],
            }
            for name, tensor in tape.items()
        },
    }


def save_checkpoint(path, config: dict, tape: ParamTape, scaler_stats: dict) -> None:
    payload = checkpoint_payload(config, tape, scaler_stats)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def load_checkpoint(path) -> tuple[dict, ParamTape, dict]:
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"invalid checkpoint JSON: {exc}") from exc
    if payload.get("kind") != "edulens-model":
        raise CheckpointError("not an edulens model checkpoint")
    if payload.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint version {payload.get('format_version')!r}"
        )
    tape = ParamTape()
    for name, entry in payload["params"].items():
        value = np.array(entry["data"], dtype=np.float64).reshape(entry["shape"])
        tape.register(name, value)
    return payload["config"], tape, payload["scaler"]
