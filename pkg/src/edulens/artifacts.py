"""On-disk artifact formats for the pipeline stages.

Stages communicate through files in a run directory so every step is
resumable and inspectable:

    curriculum.json   concept DAG (canonical form)
    traces.csv        raw attempts
    labels.json       held-out cluster labels (synthetic corpora only)
    graphs.json       learning graphs + scaler for the selected students
    checkpoint.json   trained model parameters
    manifest.json     training run summary
    embeddings.json   per-student global embeddings
    projection.json   3-d PCA coordinates

All JSON is written with a fixed layout so identical inputs yield
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .graphs import LearningGraph
from .traces import FeatureScaler

CURRICULUM_FILE = "curriculum.json"
TRACES_FILE = "traces.csv"
LABELS_FILE = "labels.json"
GRAPHS_FILE = "graphs.json"
CHECKPOINT_FILE = "checkpoint.json"
MANIFEST_FILE = "manifest.json"
EMBEDDINGS_FILE = "embeddings.json"
PROJECTION_FILE = "projection.json"
AGGREGATES_FILE = "aggregates.json"


class ArtifactError(ValueError):
    """Missing or inconsistent pipeline artifact."""


def write_json(path, payload: dict) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def read_json(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"missing artifact: {path}")
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def scaler_to_dict(scaler: FeatureScaler) -> dict:
    return {"mean": list(scaler.mean), "std": list(scaler.std)}


def scaler_from_dict(doc: dict) -> FeatureScaler:
    return FeatureScaler(mean=tuple(doc["mean"]), std=tuple(doc["std"]))


def graphs_bundle(
    topic: str, threshold: float, scaler: FeatureScaler, graphs: list[LearningGraph]
) -> dict:
    return {
        "topic": topic,
        "threshold": threshold,
        "scaler": scaler_to_dict(scaler),
        "students": [g.student for g in graphs],
        "graphs": [g.to_dict() for g in graphs],
    }


def load_graphs_bundle(path) -> tuple[str, float, FeatureScaler, list[LearningGraph]]:
    doc = read_json(path)
    graphs = [LearningGraph.from_dict(entry) for entry in doc["graphs"]]
    return doc["topic"], doc["threshold"], scaler_from_dict(doc["scaler"]), graphs
