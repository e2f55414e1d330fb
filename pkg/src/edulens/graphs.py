"""Per-student learning graphs built from the curriculum by node absorption.

A student's learning graph keeps only the concepts they attempted. Edges are
re-derived from the curriculum: covered concept a links to covered concept b
exactly when some curriculum path a -> ... -> b passes only through
unattempted concepts (direct prerequisite edges qualify with zero
intermediates). Parallel qualifying paths collapse to a single edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curriculum import CurriculumGraph, reachable_via_excluded
from .traces import FeatureScaler, TraceLog, TracingVector, extract_tracing_vector


class GraphBuildError(ValueError):
    """Invalid inputs to learning-graph construction."""


@dataclass(frozen=True)
class LearningGraph:
    """Node-absorbed, attribute-annotated graph for one student and topic.

    Nodes are ordered by curriculum ordinal; edges use local node indices.
    `features` is the N x dim matrix of standardized attributes fed to the
    encoder; raw values stay available on each TracingVector.
    """

    student: str
    topic: str
    ordinals: tuple[int, ...]
    concept_ids: tuple[str, ...]
    vectors: tuple[TracingVector, ...]
    edges: tuple[tuple[int, int], ...]
    features: np.ndarray

    @property
    def num_nodes(self) -> int:
        return len(self.ordinals)

    def to_dict(self) -> dict:
        return {
            "student": self.student,
            "topic": self.topic,
            "nodes": [
                {
                    "concept": cid,
                    "ordinal": o,
                    "raw": list(v.raw()),
                    "scaled": list(v.scaled) if v.scaled is not None else None,
                }
                for cid, o, v in zip(self.concept_ids, self.ordinals, self.vectors)
            ],
            "edges": [list(e) for e in self.edges],
        }

    @staticmethod
    def from_dict(doc: dict) -> "LearningGraph":
        vectors = []
        for node in doc["nodes"]:
            acc, count, week = node["raw"]
            scaled = tuple(node["scaled"]) if node["scaled"] is not None else None
            vectors.append(
                TracingVector(
                    avg_accuracy=acc,
                    attempt_count=int(count),
                    median_week=int(week),
                    scaled=scaled,
                )
            )
        features = np.array(
            [v.scaled if v.scaled is not None else v.raw() for v in vectors],
            dtype=np.float64,
        )
        return LearningGraph(
            student=doc["student"],
            topic=doc["topic"],
            ordinals=tuple(node["ordinal"] for node in doc["nodes"]),
            concept_ids=tuple(node["concept"] for node in doc["nodes"]),
            vectors=tuple(vectors),
            edges=tuple((int(a), int(b)) for a, b in doc["edges"]),
            features=features,
        )


def absorb_nodes(curriculum: CurriculumGraph, covered: set[int]) -> set[tuple[int, int]]:
    """Edge set over covered ordinals after absorbing uncovered nodes.

    (a, b) is an edge iff a directed curriculum path a -> ... -> b exists
    whose intermediate nodes are all uncovered.
    """
    if not covered:
        raise GraphBuildError("covered set must be non-empty")
    for o in covered:
        if not 0 <= o < curriculum.num_concepts:
            raise GraphBuildError(f"covered ordinal {o} out of range")
    uncovered = set(range(curriculum.num_concepts)) - covered
    edges: set[tuple[int, int]] = set()
    for a in covered:
        for b in reachable_via_excluded(curriculum, a, uncovered):
            if b in covered:
                edges.add((a, b))
    return edges


def build_learning_graph(
    curriculum: CurriculumGraph,
    log: TraceLog,
    scaler: FeatureScaler,
    student: str,
) -> LearningGraph:
    """Assemble one student's learning graph with standardized node features."""
    attempted = log.concepts_attempted(student)
    if not attempted:
        raise GraphBuildError(f"student {student!r} has no attempts in topic {curriculum.topic!r}")
    covered = sorted(curriculum.id_to_ordinal[c] for c in attempted)
    local_index = {o: i for i, o in enumerate(covered)}

    vectors = []
    for o in covered:
        concept = curriculum.concept(o)
        vectors.append(scaler.apply(extract_tracing_vector(log, student, concept.id)))
    edges = sorted(
        (local_index[a], local_index[b]) for a, b in absorb_nodes(curriculum, set(covered))
    )
    features = np.array([v.scaled for v in vectors], dtype=np.float64)
    return LearningGraph(
        student=student,
        topic=curriculum.topic,
        ordinals=tuple(covered),
        concept_ids=tuple(curriculum.concept(o).id for o in covered),
        vectors=tuple(vectors),
        edges=tuple(edges),
        features=features,
    )
