"""Graph-level encoder and local/global discriminator.

Each encoder layer updates a node by summing its neighbors' vectors plus
(1 + epsilon) times its own, then applying a two-linear-layer perceptron.
A node's patch representation concatenates its outputs from every layer;
the graph's global representation is the sum of all patch rows. The
discriminator projects a patch row and a global vector through separate
three-layer heads and scores the pair by dot product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import LearningGraph
from .numerics import (
    ParamTape,
    Tensor,
    add,
    concat,
    constant,
    matmul,
    relu,
    transpose,
)


class EncoderError(ValueError):
    """Invalid encoder configuration or input."""


@dataclass(frozen=True)
class EncoderConfig:
    num_layers: int = 3
    hidden_dim: int = 32
    input_dim: int = 3
    epsilon: float = 0.0
    # Message passing treats learning-graph edges as undirected by default;
    # set True to aggregate over incoming edges only.
    directed_aggregation: bool = False

    def __post_init__(self):
        if self.num_layers < 1:
            raise EncoderError("num_layers must be >= 1")
        if self.hidden_dim < 1:
            raise EncoderError("hidden_dim must be >= 1")
        if self.input_dim < 1:
            raise EncoderError("input_dim must be >= 1")

    @property
    def embed_dim(self) -> int:
        return self.num_layers * self.hidden_dim

    def to_dict(self) -> dict:
        return {
            "num_layers": self.num_layers,
            "hidden_dim": self.hidden_dim,
            "input_dim": self.input_dim,
            "epsilon": self.epsilon,
            "directed_aggregation": self.directed_aggregation,
        }

    @staticmethod
    def from_dict(doc: dict) -> "EncoderConfig":
        return EncoderConfig(
            num_layers=int(doc["num_layers"]),
            hidden_dim=int(doc["hidden_dim"]),
            input_dim=int(doc["input_dim"]),
            epsilon=float(doc.get("epsilon", 0.0)),
            directed_aggregation=bool(doc.get("directed_aggregation", False)),
        )


@dataclass
class GinLayer:
    w1: Tensor
    b1: Tensor
    w2: Tensor
    b2: Tensor


@dataclass
class GinParams:
    config: EncoderConfig
    layers: list[GinLayer]


@dataclass
class DiscriminatorParams:
    embed_dim: int
    local_head: list[tuple[Tensor, Tensor]]
    global_head: list[tuple[Tensor, Tensor]]


@dataclass
class GraphEncoding:
    """Inference-time encoding: per-node patch matrix and the global vector."""

    patch: np.ndarray  # (N, embed_dim)
    global_vec: np.ndarray  # (embed_dim,)


@dataclass
class BatchEncoding:
    """Training-time encoding of a disjoint batch of graphs, as tape tensors."""

    patch: Tensor  # (total_nodes, embed_dim)
    globals_: Tensor  # (num_graphs, embed_dim)
    node_graph: np.ndarray  # graph index of each node row
    sizes: tuple[int, ...]


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_params(
    config: EncoderConfig, seed: int, tape: ParamTape
) -> tuple[GinParams, DiscriminatorParams]:
    """Glorot-uniform weights and zero biases, reproducible from the seed."""
    rng = np.random.default_rng(seed)
    h = config.hidden_dim
    layers = []
    for k in range(config.num_layers):
        in_dim = config.input_dim if k == 0 else h
        layers.append(
            GinLayer(
                w1=tape.register(f"gin.{k}.w1", _glorot(rng, in_dim, h)),
                b1=tape.register(f"gin.{k}.b1", np.zeros(h)),
                w2=tape.register(f"gin.{k}.w2", _glorot(rng, h, h)),
                b2=tape.register(f"gin.{k}.b2", np.zeros(h)),
            )
        )
    d = config.embed_dim
    heads = {}
    for head_name in ("local", "global"):
        heads[head_name] = [
            (
                tape.register(f"disc.{head_name}.{i}.w", _glorot(rng, d, d)),
                tape.register(f"disc.{head_name}.{i}.b", np.zeros(d)),
            )
            for i in range(3)
        ]
    gin = GinParams(config=config, layers=layers)
    disc = DiscriminatorParams(embed_dim=d, local_head=heads["local"], global_head=heads["global"])
    return gin, disc


def bind_params(config: EncoderConfig, tape: ParamTape) -> tuple[GinParams, DiscriminatorParams]:
    """Rebuild parameter views over an existing tape (checkpoint loading)."""
    layers = [
        GinLayer(
            w1=tape.get(f"gin.{k}.w1"),
            b1=tape.get(f"gin.{k}.b1"),
            w2=tape.get(f"gin.{k}.w2"),
            b2=tape.get(f"gin.{k}.b2"),
        )
        for k in range(config.num_layers)
    ]
    heads = {
        head_name: [
            (tape.get(f"disc.{head_name}.{i}.w"), tape.get(f"disc.{head_name}.{i}.b"))
            for i in range(3)
        ]
        for head_name in ("local", "global")
    }
    gin = GinParams(config=config, layers=layers)
    disc = DiscriminatorParams(
        embed_dim=config.embed_dim, local_head=heads["local"], global_head=heads["global"]
    )
    return gin, disc


@dataclass
class EncoderModel:
    """GIN layer parameters plus discriminator parameters on one tape."""

    config: EncoderConfig
    tape: ParamTape
    gin: GinParams
    disc: DiscriminatorParams

    @classmethod
    def initialize(cls, config: EncoderConfig, seed: int) -> "EncoderModel":
        tape = ParamTape()
        gin, disc = init_params(config, seed, tape)
        return cls(config=config, tape=tape, gin=gin, disc=disc)

    @classmethod
    def from_tape(cls, config: EncoderConfig, tape: ParamTape) -> "EncoderModel":
        gin, disc = bind_params(config, tape)
        return cls(config=config, tape=tape, gin=gin, disc=disc)


def _aggregation_matrix(config: EncoderConfig, graphs: list[LearningGraph]) -> np.ndarray:
    """Block-diagonal neighbor-sum-plus-self matrix for a disjoint batch."""
    total = sum(g.num_nodes for g in graphs)
    agg = np.zeros((total, total))
    offset = 0
    for g in graphs:
        for a, b in g.edges:
            agg[offset + b, offset + a] = 1.0  # message along edge direction
            if not config.directed_aggregation:
                agg[offset + a, offset + b] = 1.0
        for i in range(g.num_nodes):
            agg[offset + i, offset + i] = 1.0 + config.epsilon
        offset += g.num_nodes
    return agg


def encode_batch(gin: GinParams, graphs: list[LearningGraph]) -> BatchEncoding:
    """Forward pass over a batch of graphs treated as one disjoint union."""
    config = gin.config
    for g in graphs:
        if g.features.shape[1] != config.input_dim:
            raise EncoderError(
                f"graph for student {g.student!r} has {g.features.shape[1]} attributes, "
                f"encoder expects {config.input_dim}"
            )
    features = np.vstack([g.features for g in graphs])
    agg = constant(_aggregation_matrix(config, graphs))

    hidden = constant(features)
    layer_outputs = []
    for layer in gin.layers:
        summed = matmul(agg, hidden)
        pre = relu(add(matmul(summed, layer.w1), layer.b1))
        hidden = add(matmul(pre, layer.w2), layer.b2)
        layer_outputs.append(hidden)
    patch = concat(layer_outputs, axis=1) if len(layer_outputs) > 1 else layer_outputs[0]

    sizes = tuple(g.num_nodes for g in graphs)
    node_graph = np.repeat(np.arange(len(graphs)), sizes)
    selector = np.zeros((len(graphs), sum(sizes)))
    selector[node_graph, np.arange(sum(sizes))] = 1.0
    globals_ = matmul(constant(selector), patch)
    return BatchEncoding(patch=patch, globals_=globals_, node_graph=node_graph, sizes=sizes)


def gin_forward(gin: GinParams, graph: LearningGraph) -> GraphEncoding:
    """Encode one graph; the global vector is the column sum of the patch rows."""
    enc = encode_batch(gin, [graph])
    return GraphEncoding(patch=enc.patch.value, global_vec=enc.globals_.value[0])


def _apply_head(head: list[tuple[Tensor, Tensor]], x: Tensor) -> Tensor:
    out = x
    for i, (w, b) in enumerate(head):
        out = add(matmul(out, w), b)
        if i < len(head) - 1:
            out = relu(out)
    return out


def score_pairs(disc: DiscriminatorParams, patch: Tensor, globals_: Tensor) -> Tensor:
    """Score every (node, graph) pair: rows index nodes, columns index graphs."""
    local = _apply_head(disc.local_head, patch)
    global_proj = _apply_head(disc.global_head, globals_)
    return matmul(local, transpose(global_proj))


def discriminate(disc: DiscriminatorParams, patch_row: np.ndarray, global_vec: np.ndarray) -> float:
    """Score for a single local/global pair."""
    patch_row = np.asarray(patch_row, dtype=np.float64)
    global_vec = np.asarray(global_vec, dtype=np.float64)
    if patch_row.shape != (disc.embed_dim,) or global_vec.shape != (disc.embed_dim,):
        raise EncoderError(
            f"discriminator expects {disc.embed_dim}-d vectors, got "
            f"{patch_row.shape} and {global_vec.shape}"
        )
    scores = score_pairs(
        disc, constant(patch_row.reshape(1, -1)), constant(global_vec.reshape(1, -1))
    )
    return float(scores.value[0, 0])
