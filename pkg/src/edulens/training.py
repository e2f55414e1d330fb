"""Contrastive training loop for the graph encoder.

Within a batch, every (node, own graph) pair is a positive and every
(node, other graph) pair a negative. The discriminator's scores enter a
Jensen-Shannon style objective: softplus(-score) on positives plus
softplus(score) on negatives, each term a weighted mean where a pair's
weight is the reciprocal of its source graph's node count. Minimizing this
pushes positive scores up, negative scores down; a constant-zero
discriminator sits at 2*ln(2).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .analysis import EmbeddingStore
from .encoder import EncoderConfig, EncoderModel, encode_batch, gin_forward, score_pairs
from .graphs import LearningGraph
from .numerics import AdamState, Tensor, adam_step, add, backward, constant, mul, neg, softplus, sum_all


class TrainingError(ValueError):
    """Invalid training configuration or corpus."""


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 128
    learning_rate: float = 0.01
    epochs: int = 20
    seed: int = 0
    encoder: EncoderConfig = field(default_factory=EncoderConfig)

    def __post_init__(self):
        if self.batch_size < 2:
            raise TrainingError("batch_size must be >= 2 (negatives need >= 2 graphs)")
        if self.epochs < 1:
            raise TrainingError("epochs must be >= 1")

    def to_dict(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "seed": self.seed,
            "encoder": self.encoder.to_dict(),
        }


@dataclass(frozen=True)
class BatchPairs:
    """Positive/negative pair bookkeeping for one batch."""

    sizes: tuple[int, ...]

    @property
    def num_graphs(self) -> int:
        return len(self.sizes)

    @property
    def positive_count(self) -> int:
        return sum(self.sizes)

    @property
    def negative_count(self) -> int:
        return sum(n * (self.num_graphs - 1) for n in self.sizes)

    def positive_mask(self) -> np.ndarray:
        """(total_nodes, num_graphs) boolean: node row versus its own graph."""
        node_graph = np.repeat(np.arange(self.num_graphs), self.sizes)
        mask = np.zeros((self.positive_count, self.num_graphs), dtype=bool)
        mask[np.arange(self.positive_count), node_graph] = True
        return mask


def batch_pairs(graphs: list[LearningGraph]) -> BatchPairs:
    return BatchPairs(sizes=tuple(g.num_nodes for g in graphs))


def pair_weights(pairs: BatchPairs) -> tuple[np.ndarray, np.ndarray]:
    """Normalized per-pair weights for the positive and negative terms.

    A pair's raw weight is 1/|G| for the node's source graph; each term's
    weights are normalized to sum to one, so the raw weights reduce to
    dividing by B and B*(B-1) respectively.
    """
    b = pairs.num_graphs
    inv_size = np.repeat(1.0 / np.array(pairs.sizes, dtype=np.float64), pairs.sizes)
    mask = pairs.positive_mask()
    w_pos = mask * inv_size[:, None] / b
    w_neg = (~mask) * inv_size[:, None] / (b * (b - 1))
    return w_pos, w_neg


def loss_from_scores(scores: Tensor, pairs: BatchPairs) -> Tensor:
    """softplus(-score) on positives plus softplus(score) on negatives, each
    a weighted mean per pair_weights."""
    w_pos, w_neg = pair_weights(pairs)
    positive_term = sum_all(mul(constant(w_pos), softplus(neg(scores))))
    negative_term = sum_all(mul(constant(w_neg), softplus(scores)))
    return add(positive_term, negative_term)


def infograph_loss(model: EncoderModel, graphs: list[LearningGraph]) -> Tensor:
    """Scalar contrastive loss over one batch (needs >= 2 graphs)."""
    if len(graphs) < 2:
        raise TrainingError("a batch needs at least 2 graphs to form negatives")
    enc = encode_batch(model.gin, graphs)
    scores = score_pairs(model.disc, enc.patch, enc.globals_)
    return loss_from_scores(scores, batch_pairs(graphs))


def _make_batches(order: np.ndarray, batch_size: int) -> list[np.ndarray]:
    batches = [order[i : i + batch_size] for i in range(0, len(order), batch_size)]
    if len(batches) > 1 and len(batches[-1]) < 2:
        batches[-2] = np.concatenate([batches[-2], batches[-1]])
        batches.pop()
    return batches


@dataclass
class TrainResult:
    model: EncoderModel
    epoch_losses: list[float]
    wall_time_seconds: float


def train(graphs: list[LearningGraph], config: TrainConfig) -> TrainResult:
    """Train encoder and discriminator; deterministic for a fixed seed."""
    if len(graphs) < 2:
        raise TrainingError(f"corpus of {len(graphs)} graphs is too small (need >= 2)")
    for g in graphs:
        if g.features.shape[1] != config.encoder.input_dim:
            raise TrainingError(
                f"graph for student {g.student!r} has {g.features.shape[1]} attributes, "
                f"config expects {config.encoder.input_dim}"
            )
    started = time.monotonic()
    model = EncoderModel.initialize(config.encoder, config.seed)
    optimizer = AdamState(lr=config.learning_rate)
    rng = np.random.default_rng(config.seed)

    epoch_losses: list[float] = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(graphs))
        batch_losses = []
        for batch_index, batch_ids in enumerate(_make_batches(order, config.batch_size)):
            batch = [graphs[i] for i in batch_ids]
            model.tape.zero_grad()
            loss = infograph_loss(model, batch)
            loss_value = float(loss.value)
            if not np.isfinite(loss_value):
                raise TrainingError(
                    f"non-finite loss {loss_value} at epoch {epoch}, batch {batch_index} "
                    f"(batch size {len(batch)})"
                )
            backward(loss)
            adam_step(optimizer, model.tape)
            batch_losses.append(loss_value)
        epoch_losses.append(float(np.mean(batch_losses)))
    return TrainResult(
        model=model,
        epoch_losses=epoch_losses,
        wall_time_seconds=time.monotonic() - started,
    )


def mean_pair_scores(model: EncoderModel, graphs: list[LearningGraph]) -> tuple[float, float]:
    """Mean discriminator score over positive and negative pairs (evaluation)."""
    if len(graphs) < 2:
        raise TrainingError("need >= 2 graphs to form negative pairs")
    enc = encode_batch(model.gin, graphs)
    scores = score_pairs(model.disc, enc.patch, enc.globals_).value
    mask = batch_pairs(graphs).positive_mask()
    return float(scores[mask].mean()), float(scores[~mask].mean())


def embed_all(model: EncoderModel, graphs: list[LearningGraph]) -> EmbeddingStore:
    """One global embedding per student, encoded graph by graph."""
    students = []
    rows = []
    topic = graphs[0].topic if graphs else ""
    for g in graphs:
        encoding = gin_forward(model.gin, g)
        students.append(g.student)
        rows.append(encoding.global_vec)
    matrix = (
        np.array(rows, dtype=np.float64)
        if rows
        else np.zeros((0, model.config.embed_dim))
    )
    return EmbeddingStore(topic=topic, students=tuple(students), matrix=matrix)


def run_manifest(config: TrainConfig, result: TrainResult, num_graphs: int) -> dict:
    """Structured summary of a training run, written alongside the checkpoint."""
    return {
        "config": config.to_dict(),
        "embed_dim": config.encoder.embed_dim,
        "num_graphs_trained": num_graphs,
        "epoch_losses": result.epoch_losses,
        "final_loss": result.epoch_losses[-1],
        "wall_time_seconds": result.wall_time_seconds,
    }
