"""Latent-space analytics: neighbors, cohorts, outliers, 3-d projection.

All queries are exhaustive scans over the store (student counts are small)
with deterministic tie-breaking by student id, so results are exactly
reproducible and easy to verify against brute force.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .numerics import pca_fit_transform
from .traces import TraceLog, lower_median


class AnalysisError(ValueError):
    """Invalid query against an embedding store."""


class EmbeddingStore:
    """Per-student global embeddings for one topic, in a fixed student order."""

    def __init__(self, topic: str, students: tuple[str, ...], matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(students):
            raise AnalysisError("matrix shape does not match student list")
        if len(set(students)) != len(students):
            raise AnalysisError("duplicate student ids in store")
        if matrix.size and not np.all(np.isfinite(matrix)):
            raise AnalysisError("non-finite embedding values")
        self.topic = topic
        self.students = tuple(students)
        self.matrix = matrix

    def __len__(self) -> int:
        return len(self.students)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.students)}

    def __contains__(self, student: str) -> bool:
        return student in self._index

    def vector(self, student: str) -> np.ndarray:
        try:
            return self.matrix[self._index[student]]
        except KeyError:
            raise AnalysisError(f"unknown student {student!r}") from None

    def to_dict(self) -> dict:
        return {
            "topic": self.topic,
            "dim": self.dim,
            "students": list(self.students),
            "embeddings": [[float(x) for x in row] for row in self.matrix],
        }

    @staticmethod
    def from_dict(doc: dict) -> "EmbeddingStore":
        return EmbeddingStore(
            topic=doc["topic"],
            students=tuple(doc["students"]),
            matrix=np.array(doc["embeddings"], dtype=np.float64).reshape(
                len(doc["students"]), doc["dim"]
            ),
        )


@dataclass(frozen=True)
class CohortQuery:
    start: str
    end: str
    k: int


@dataclass(frozen=True)
class StudentAggregate:
    """Per-student topic-level summary of the raw tracing attributes."""

    avg_accuracy: float  # attempt-weighted over all attempts
    concept_count: int
    total_attempts: int
    median_week: int  # lower median of per-concept median weeks

    def to_dict(self) -> dict:
        return {
            "avg_accuracy": self.avg_accuracy,
            "concept_count": self.concept_count,
            "total_attempts": self.total_attempts,
            "median_week": self.median_week,
        }


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - cos(angle between a and b); lies in [0, 2]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise AnalysisError("cosine distance undefined for zero-norm vectors")
    return float(1.0 - np.dot(a, b) / (norm_a * norm_b))


def k_nearest(store: EmbeddingStore, student: str, k: int) -> list[tuple[str, float]]:
    """The k other students closest in cosine distance, ascending; ties break
    by student id."""
    query = store.vector(student)
    if not 1 <= k < len(store):
        raise AnalysisError(f"k={k} out of range [1, {len(store) - 1}]")
    scored = [
        (cosine_distance(query, store.vector(other)), other)
        for other in store.students
        if other != student
    ]
    scored.sort()
    return [(other, dist) for dist, other in scored[:k]]


def cohort(store: EmbeddingStore, query: CohortQuery) -> list[tuple[str, float | None]]:
    """Cohort along the direction from end to start in the latent space.

    Ranks every other student by cosine distance between their embedding and
    the difference vector start - end; returns the start student, the top-k
    interior members with their distances, then the end student.
    """
    if query.start == query.end:
        raise AnalysisError("cohort endpoints must be distinct students")
    start_vec = store.vector(query.start)
    end_vec = store.vector(query.end)
    if not 1 <= query.k <= len(store) - 2:
        raise AnalysisError(f"k={query.k} out of range [1, {len(store) - 2}]")
    direction = start_vec - end_vec
    if np.linalg.norm(direction) == 0.0:
        raise AnalysisError("endpoint embeddings are identical; cohort direction undefined")
    scored = [
        (cosine_distance(store.vector(other), direction), other)
        for other in store.students
        if other not in (query.start, query.end)
    ]
    scored.sort()
    members: list[tuple[str, float | None]] = [(query.start, None)]
    members.extend((other, dist) for dist, other in scored[: query.k])
    members.append((query.end, None))
    return members


def outlier_scores(store: EmbeddingStore, k: int) -> dict[str, float]:
    """Mean cosine distance to each student's k nearest neighbors; higher
    means more isolated."""
    if not 1 <= k < len(store):
        raise AnalysisError(f"k={k} out of range [1, {len(store) - 1}]")
    return {
        student: float(np.mean([dist for _, dist in k_nearest(store, student, k)]))
        for student in store.students
    }


def project_3d(store: EmbeddingStore) -> tuple[np.ndarray, np.ndarray]:
    """(M, 3) PCA coordinates plus the three explained variances."""
    if len(store) < 4:
        raise AnalysisError(f"need at least 4 students to project, got {len(store)}")
    result = pca_fit_transform(store.matrix, k=3)
    return result.projection, result.explained_variance


def student_aggregate(log: TraceLog, student: str, topic: str) -> StudentAggregate:
    records = log.by_student.get(student, ())
    records = [r for r in records if r.topic == topic]
    if not records:
        raise AnalysisError(f"student {student!r} has no attempts in topic {topic!r}")
    by_concept: dict[str, list[int]] = {}
    for rec in records:
        by_concept.setdefault(rec.concept, []).append(rec.week)
    concept_medians = [lower_median(weeks) for weeks in by_concept.values()]
    return StudentAggregate(
        avg_accuracy=sum(r.score for r in records) / len(records),
        concept_count=len(by_concept),
        total_attempts=len(records),
        median_week=lower_median(concept_medians),
    )
