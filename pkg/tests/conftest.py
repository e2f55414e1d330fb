import json

import numpy as np
import pytest
from click.testing import CliRunner

from edulens.cli import main as cli_main
from edulens.curriculum import CurriculumGraph, parse_curriculum
from edulens.graphs import LearningGraph
from edulens.traces import TracingVector


def run_cli(*args):
    result = CliRunner().invoke(cli_main, [str(a) for a in args])
    if result.exception is not None and not isinstance(result.exception, SystemExit):
        raise result.exception
    return result


@pytest.fixture(scope="session")
def mini_run(tmp_path_factory):
    """A complete small pipeline run: synth -> build -> train -> embed -> project."""
    out = tmp_path_factory.mktemp("mini-run")
    steps = [
        ["synth", "--out", out, "--concepts", 8, "--students", 20, "--seed", 3],
        [
            "build",
            "--curriculum", out / "curriculum.json",
            "--traces", out / "traces.csv",
            "--out", out,
        ],
        [
            "train",
            "--out", out,
            "--epochs", 3,
            "--batch-size", 8,
            "--layers", 2,
            "--hidden-dim", 4,
            "--seed", 1,
        ],
        ["embed", "--out", out],
        ["project", "--out", out],
    ]
    for step in steps:
        result = run_cli(*step)
        assert result.exit_code == 0, f"{step[0]} failed: {result.output}"
    return out


def curriculum_json(topic, concept_ids, edge_id_pairs):
    return json.dumps(
        {
            "topic": topic,
            "concepts": [{"id": c} for c in concept_ids],
            "edges": [list(pair) for pair in edge_id_pairs],
        }
    )


@pytest.fixture
def chain3() -> CurriculumGraph:
    return parse_curriculum(
        curriculum_json("T", ["c1", "c2", "c3"], [("c1", "c2"), ("c2", "c3")])
    )


@pytest.fixture
def dag6() -> CurriculumGraph:
    """Six concepts: c1->c2->c3->c5 and c2->c4->c6."""
    return parse_curriculum(
        curriculum_json(
            "T",
            ["c1", "c2", "c3", "c4", "c5", "c6"],
            [("c1", "c2"), ("c2", "c3"), ("c3", "c5"), ("c2", "c4"), ("c4", "c6")],
        )
    )


def random_dag(rng: np.random.Generator, max_nodes: int = 10):
    """Random DAG with edges oriented low ordinal -> high ordinal."""
    n = int(rng.integers(1, max_nodes + 1))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.35:
                edges.append((i, j))
    return n, edges


def make_curriculum(n: int, edges, topic: str = "T") -> CurriculumGraph:
    return parse_curriculum(
        curriculum_json(topic, [f"c{i}" for i in range(n)], [(f"c{a}", f"c{b}") for a, b in edges])
    )


def make_learning_graph(student, features, edges, topic="T") -> LearningGraph:
    """Learning graph straight from a feature matrix, for encoder tests."""
    features = np.asarray(features, dtype=np.float64)
    n = features.shape[0]
    vectors = tuple(
        TracingVector(
            avg_accuracy=0.5,
            attempt_count=1,
            median_week=1,
            scaled=tuple(float(x) for x in row),
        )
        for row in features
    )
    return LearningGraph(
        student=student,
        topic=topic,
        ordinals=tuple(range(n)),
        concept_ids=tuple(f"c{i}" for i in range(n)),
        vectors=vectors,
        edges=tuple(tuple(e) for e in edges),
        features=features,
    )


def random_learning_graphs(rng: np.random.Generator, count: int, min_nodes=3, max_nodes=5, dim=3):
    graphs = []
    for g in range(count):
        n = int(rng.integers(min_nodes, max_nodes + 1))
        features = rng.normal(size=(n, dim))
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        graphs.append(make_learning_graph(f"s{g}", features, edges))
    return graphs
