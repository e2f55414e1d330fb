"""Read-only HTTP/JSON API over a trained run's artifacts.

The snapshot is loaded once at startup and never mutated, so every response
is a pure function of (snapshot, request). Query payloads are built by the
same functions the CLI uses, keeping the two surfaces value-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import artifacts
from .analysis import AnalysisError, CohortQuery, EmbeddingStore
from .curriculum import CurriculumGraph, load_curriculum
from .graphs import LearningGraph
from .reports import cohort_payload, neighbors_payload, outliers_payload


class SnapshotError(ValueError):
    """Run artifacts are missing or mutually inconsistent."""


@dataclass
class RunSnapshot:
    topic: str
    curriculum: CurriculumGraph
    graphs: dict[str, LearningGraph]
    aggregates: dict[str, dict]
    store: EmbeddingStore
    projection: dict

    @classmethod
    def load(cls, run_dir) -> "RunSnapshot":
        run_dir = Path(run_dir)
        curriculum = load_curriculum(run_dir / artifacts.CURRICULUM_FILE)
        topic, _, _, graph_list = artifacts.load_graphs_bundle(run_dir / artifacts.GRAPHS_FILE)
        aggregates_doc = artifacts.read_json(run_dir / artifacts.AGGREGATES_FILE)
        store = EmbeddingStore.from_dict(artifacts.read_json(run_dir / artifacts.EMBEDDINGS_FILE))
        projection = artifacts.read_json(run_dir / artifacts.PROJECTION_FILE)

        topics = {curriculum.topic, topic, aggregates_doc["topic"], store.topic, projection["topic"]}
        if len(topics) != 1:
            raise SnapshotError(f"artifacts disagree on topic: {sorted(topics)}")
        graphs = {g.student: g for g in graph_list}
        student_sets = {
            "graphs": set(graphs),
            "aggregates": set(aggregates_doc["aggregates"]),
            "embeddings": set(store.students),
            "projection": set(projection["students"]),
        }
        reference = student_sets["graphs"]
        for name, students in student_sets.items():
            if students != reference:
                raise SnapshotError(
                    f"student sets disagree between graphs and {name} "
                    f"({len(reference)} vs {len(students)} students)"
                )
        return cls(
            topic=curriculum.topic,
            curriculum=curriculum,
            graphs=graphs,
            aggregates=aggregates_doc["aggregates"],
            store=store,
            projection=projection,
        )


class CohortRequest(BaseModel):
    start: str
    end: str
    k: int


def create_app(
    snapshot: RunSnapshot,
    cors_origins: list[str] | None = None,
    static_dir=None,
) -> FastAPI:
    app = FastAPI(title="edulens", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def check_topic(topic: str | None) -> None:
        if topic is not None and topic != snapshot.topic:
            raise HTTPException(status_code=404, detail=f"unknown topic {topic!r}")

    def known_student(student: str) -> None:
        if student not in snapshot.store:
            raise HTTPException(status_code=404, detail=f"unknown student {student!r}")

    @app.get("/topics")
    def topics() -> dict:
        return {"topics": [snapshot.topic]}

    @app.get("/students")
    def students(topic: str | None = None) -> dict:
        check_topic(topic)
        return {
            "topic": snapshot.topic,
            "students": [
                {"id": s, "aggregate": snapshot.aggregates[s]} for s in snapshot.store.students
            ],
        }

    @app.get("/students/{student}/graph")
    def student_graph(student: str) -> dict:
        known_student(student)
        return snapshot.graphs[student].to_dict()

    @app.get("/students/{student}/aggregate")
    def student_aggregate(student: str) -> dict:
        known_student(student)
        return {
            "topic": snapshot.topic,
            "student": student,
            "aggregate": snapshot.aggregates[student],
        }

    @app.get("/projection")
    def projection(topic: str | None = None) -> dict:
        check_topic(topic)
        return snapshot.projection

    @app.get("/neighbors")
    def neighbors(student: str, k: int = 5) -> dict:
        known_student(student)
        try:
            return neighbors_payload(snapshot.store, student, k)
        except AnalysisError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/cohort")
    def cohort(request: CohortRequest) -> dict:
        known_student(request.start)
        known_student(request.end)
        try:
            return cohort_payload(
                snapshot.store,
                CohortQuery(start=request.start, end=request.end, k=request.k),
            )
        except AnalysisError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/outliers")
    def outliers(k: int = 5) -> dict:
        try:
            return outliers_payload(snapshot.store, k)
        except AnalysisError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="explorer")

    return app
