"""Synthetic curricula and student populations with planted cluster structure.

Cluster labels are ground truth for evaluation only; they are returned
separately and never written into the trace rows, so training stays
self-supervised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curriculum import ConceptId, CurriculumGraph
from .traces import AttemptRecord, TraceLog


class SynthError(ValueError):
    """Invalid generator parameters."""


@dataclass(frozen=True)
class ClusterSpec:
    name: str
    size: int
    coverage: float  # fraction of the topic's concepts each student attempts
    accuracy_mean: float
    accuracy_spread: float
    attempts_mean: float
    week_window: tuple[int, int]

    def __post_init__(self):
        if self.size < 1:
            raise SynthError(f"cluster {self.name!r}: size must be >= 1")
        if not 0.0 < self.coverage <= 1.0:
            raise SynthError(f"cluster {self.name!r}: coverage must be in (0, 1]")
        if not 0.0 <= self.accuracy_mean <= 1.0:
            raise SynthError(f"cluster {self.name!r}: accuracy_mean must be in [0, 1]")
        if self.accuracy_spread < 0:
            raise SynthError(f"cluster {self.name!r}: accuracy_spread must be >= 0")
        if self.attempts_mean < 1:
            raise SynthError(f"cluster {self.name!r}: attempts_mean must be >= 1")
        lo, hi = self.week_window
        if not (1 <= lo <= hi):
            raise SynthError(f"cluster {self.name!r}: bad week window {self.week_window}")


@dataclass(frozen=True)
class PopulationSpec:
    clusters: tuple[ClusterSpec, ...]
    seed: int = 0


def two_cluster_spec(num_students: int, seed: int = 0) -> PopulationSpec:
    """Default population: a strong majority cluster plus a lagging cluster
    with lower accuracy and a late, disjoint week window."""
    majority = (2 * num_students) // 3
    return PopulationSpec(
        clusters=(
            ClusterSpec(
                name="core",
                size=majority,
                coverage=0.75,
                accuracy_mean=0.85,
                accuracy_spread=0.08,
                attempts_mean=4.0,
                week_window=(1, 10),
            ),
            ClusterSpec(
                name="lagging",
                size=num_students - majority,
                coverage=0.6,
                accuracy_mean=0.35,
                accuracy_spread=0.08,
                attempts_mean=3.0,
                week_window=(20, 30),
            ),
        ),
        seed=seed,
    )


def gen_curriculum(
    n_concepts: int, edge_density: float, seed: int, topic: str = "synth"
) -> CurriculumGraph:
    """Random concept DAG with edges from lower to higher ordinal.

    Every non-root node gets at least one predecessor; density 0 degenerates
    to a chain. Deterministic per seed.
    """
    if n_concepts < 1:
        raise SynthError("n_concepts must be >= 1")
    if not 0.0 <= edge_density <= 1.0:
        raise SynthError("edge_density must be in [0, 1]")
    rng = np.random.default_rng(seed)
    concepts = tuple(ConceptId(id=f"c{i + 1}", ordinal=i) for i in range(n_concepts))
    edges: set[tuple[int, int]] = set()
    for i in range(1, n_concepts):
        parent = i - 1 if edge_density == 0.0 else int(rng.integers(0, i))
        edges.add((parent, i))
    if edge_density > 0.0:
        for i in range(1, n_concepts):
            for j in range(i):
                if (j, i) not in edges and rng.random() < edge_density:
                    edges.add((j, i))
    return CurriculumGraph(topic=topic, concepts=concepts, edges=tuple(sorted(edges)))


def gen_population(
    curriculum: CurriculumGraph, spec: PopulationSpec
) -> tuple[TraceLog, dict[str, str]]:
    """Sample a TraceLog plus held-out {student: cluster name} labels."""
    rng = np.random.default_rng(spec.seed)
    total_concepts = curriculum.num_concepts
    records: list[AttemptRecord] = []
    labels: dict[str, str] = {}
    student_counter = 0
    for cluster in spec.clusters:
        for _ in range(cluster.size):
            student_counter += 1
            student = f"s{student_counter:04d}"
            labels[student] = cluster.name
            covered_count = max(1, round(cluster.coverage * total_concepts))
            covered = sorted(rng.choice(total_concepts, size=covered_count, replace=False))
            for ordinal in covered:
                concept = curriculum.concept(int(ordinal))
                attempts = max(1, int(rng.poisson(cluster.attempts_mean)))
                for j in range(attempts):
                    score = float(
                        np.clip(
                            rng.normal(cluster.accuracy_mean, cluster.accuracy_spread),
                            0.0,
                            1.0,
                        )
                    )
                    week = int(rng.integers(cluster.week_window[0], cluster.week_window[1] + 1))
                    records.append(
                        AttemptRecord(
                            student=student,
                            topic=curriculum.topic,
                            concept=concept.id,
                            question=f"q{concept.id}_{j}",
                            score=score,
                            week=week,
                        )
                    )
    return TraceLog(topic=curriculum.topic, records=records), labels
