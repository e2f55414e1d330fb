"""Query result payloads shared verbatim by the CLI and the HTTP API."""

from __future__ import annotations

import numpy as np

from .analysis import (
    CohortQuery,
    EmbeddingStore,
    cohort,
    k_nearest,
    outlier_scores,
    project_3d,
)


def neighbors_payload(store: EmbeddingStore, student: str, k: int) -> dict:
    neighbors = k_nearest(store, student, k)
    return {
        "topic": store.topic,
        "student": student,
        "k": k,
        "neighbors": [{"student": s, "distance": d} for s, d in neighbors],
    }


def cohort_payload(store: EmbeddingStore, query: CohortQuery) -> dict:
    members = cohort(store, query)
    rows = []
    for i, (student, distance) in enumerate(members):
        role = "start" if i == 0 else ("end" if i == len(members) - 1 else "interior")
        rows.append({"student": student, "distance": distance, "role": role})
    return {
        "topic": store.topic,
        "start": query.start,
        "end": query.end,
        "k": query.k,
        "members": rows,
    }


def outliers_payload(store: EmbeddingStore, k: int) -> dict:
    scores = outlier_scores(store, k)
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return {
        "topic": store.topic,
        "k": k,
        "scores": [{"student": s, "score": v} for s, v in ranked],
    }


def projection_payload(store: EmbeddingStore) -> dict:
    coords, variance = project_3d(store)
    return {
        "topic": store.topic,
        "students": list(store.students),
        "coordinates": [[float(x) for x in row] for row in coords],
        "explained_variance": [float(v) for v in np.asarray(variance)],
    }
