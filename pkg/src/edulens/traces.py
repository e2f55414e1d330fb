"""Learning-trace ingestion and per-(student, concept) tracing vectors.

A tracing vector holds three behavioral attributes for one student on one
concept: average accuracy over attempts, attempt count, and the median
academic-calendar week of the attempts (lower median, so the value is always
a week that actually occurred).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, datetime
from functools import cached_property

import numpy as np

from .curriculum import CurriculumGraph

ATTRIBUTE_NAMES = ("avg_accuracy", "attempt_count", "median_week")


class TraceError(ValueError):
    """Malformed or inconsistent trace data."""


@dataclass(frozen=True)
class AttemptRecord:
    student: str
    topic: str
    concept: str
    question: str
    score: float  # in [0, 1]
    week: int  # 1-based academic week


@dataclass(frozen=True)
class TracingVector:
    """Raw attributes plus, once a scaler has been applied, their z-scores."""

    avg_accuracy: float
    attempt_count: int
    median_week: int
    scaled: tuple[float, ...] | None = None

    def raw(self) -> tuple[float, ...]:
        return (self.avg_accuracy, float(self.attempt_count), float(self.median_week))


class TraceLog:
    """Validated attempt records for one topic, indexed by student and concept."""

    def __init__(self, topic: str, records: list[AttemptRecord]):
        self.topic = topic
        self.records = tuple(records)

    @cached_property
    def by_student(self) -> dict[str, tuple[AttemptRecord, ...]]:
        grouped: dict[str, list[AttemptRecord]] = {}
        for rec in self.records:
            grouped.setdefault(rec.student, []).append(rec)
        return {s: tuple(rs) for s, rs in grouped.items()}

    @cached_property
    def by_student_concept(self) -> dict[tuple[str, str], tuple[AttemptRecord, ...]]:
        grouped: dict[tuple[str, str], list[AttemptRecord]] = {}
        for rec in self.records:
            grouped.setdefault((rec.student, rec.concept), []).append(rec)
        return {k: tuple(rs) for k, rs in grouped.items()}

    def students(self) -> list[str]:
        return sorted(self.by_student)

    def concepts_attempted(self, student: str) -> set[str]:
        return {rec.concept for rec in self.by_student.get(student, ())}


def week_from_timestamp(timestamp: datetime, academic_start: date) -> int:
    """1-based week number: floor(days since academic start / 7) + 1."""
    days = (timestamp.date() - academic_start).days
    if days < 0:
        raise TraceError(
            f"timestamp {timestamp.isoformat()} precedes academic start {academic_start.isoformat()}"
        )
    return days // 7 + 1


def ingest_traces(
    text: str,
    curriculum: CurriculumGraph,
    academic_start: date | None = None,
) -> TraceLog:
    """Parse a delimited trace file into a validated TraceLog.

    Expected header: student_id, topic_id, concept_id, question_id, score,
    and either week or timestamp (week wins if both are present; timestamps
    require academic_start). Errors name the offending file line.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise TraceError("empty trace file (missing header)") from None
    header = [h.strip() for h in header]
    required = ["student_id", "topic_id", "concept_id", "question_id", "score"]
    for col in required:
        if col not in header:
            raise TraceError(f"missing required column {col!r}")
    has_week = "week" in header
    has_timestamp = "timestamp" in header
    if not has_week and not has_timestamp:
        raise TraceError("trace file needs a 'week' or 'timestamp' column")
    if not has_week and academic_start is None:
        raise TraceError("timestamp column requires an academic start date")
    col = {name: header.index(name) for name in header}

    records: list[AttemptRecord] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise TraceError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        student = row[col["student_id"]].strip()
        topic = row[col["topic_id"]].strip()
        concept = row[col["concept_id"]].strip()
        question = row[col["question_id"]].strip()
        if not student or not concept:
            raise TraceError(f"line {lineno}: empty student_id or concept_id")
        if topic != curriculum.topic:
            raise TraceError(
                f"line {lineno}: topic {topic!r} does not match curriculum topic "
                f"{curriculum.topic!r}"
            )
        if concept not in curriculum.id_to_ordinal:
            raise TraceError(f"line {lineno}: unknown concept {concept!r}")
        try:
            score = float(row[col["score"]])
        except ValueError:
            raise TraceError(f"line {lineno}: score {row[col['score']]!r} is not a number") from None
        if not 0.0 <= score <= 1.0:
            raise TraceError(f"line {lineno}: score {score} outside [0, 1]")
        if has_week and row[col["week"]].strip():
            try:
                week = int(row[col["week"]])
            except ValueError:
                raise TraceError(f"line {lineno}: week {row[col['week']]!r} is not an integer") from None
        elif has_timestamp:
            raw_ts = row[col["timestamp"]].strip()
            try:
                ts = datetime.fromisoformat(raw_ts)
            except ValueError:
                raise TraceError(f"line {lineno}: invalid timestamp {raw_ts!r}") from None
            if academic_start is None:
                raise TraceError(f"line {lineno}: timestamp given but no academic start configured")
            try:
                week = week_from_timestamp(ts, academic_start)
            except TraceError as exc:
                raise TraceError(f"line {lineno}: {exc}") from None
        else:
            raise TraceError(f"line {lineno}: missing week value")
        if week < 1:
            raise TraceError(f"line {lineno}: week {week} must be >= 1")
        records.append(
            AttemptRecord(
                student=student,
                topic=topic,
                concept=concept,
                question=question,
                score=score,
                week=week,
            )
        )
    return TraceLog(topic=curriculum.topic, records=records)


def load_traces(path, curriculum: CurriculumGraph, academic_start: date | None = None) -> TraceLog:
    with open(path, encoding="utf-8") as f:
        return ingest_traces(f.read(), curriculum, academic_start=academic_start)


def format_traces(log: TraceLog) -> str:
    """Render a TraceLog back to the delimited trace-file format."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["student_id", "topic_id", "concept_id", "question_id", "score", "week"])
    for rec in log.records:
        writer.writerow([rec.student, rec.topic, rec.concept, rec.question, repr(rec.score), rec.week])
    return out.getvalue()


def lower_median(values) -> int:
    """Median that resolves even counts downward, so the result is always an
    element of the input multiset."""
    ordered = sorted(values)
    if not ordered:
        raise TraceError("lower_median of empty sequence")
    return ordered[(len(ordered) - 1) // 2]


def extract_tracing_vector(log: TraceLog, student: str, concept: str) -> TracingVector:
    attempts = log.by_student_concept.get((student, concept))
    if not attempts:
        raise TraceError(f"no attempts for student {student!r} on concept {concept!r}")
    scores = [rec.score for rec in attempts]
    weeks = [rec.week for rec in attempts]
    return TracingVector(
        avg_accuracy=sum(scores) / len(scores),
        attempt_count=len(attempts),
        median_week=lower_median(weeks),
    )


def select_students(log: TraceLog, curriculum: CurriculumGraph, threshold: float) -> set[str]:
    """Students whose attempted concepts cover at least `threshold` of the
    topic's concepts (boundary inclusive)."""
    if not 0.0 < threshold <= 1.0:
        raise TraceError(f"threshold {threshold} must be in (0, 1]")
    total = curriculum.num_concepts
    return {
        student
        for student in log.by_student
        if len(log.concepts_attempted(student)) / total >= threshold
    }


@dataclass(frozen=True)
class FeatureScaler:
    """Per-attribute population mean/std over a selected student population."""

    mean: tuple[float, ...]
    std: tuple[float, ...]

    def transform(self, raw) -> np.ndarray:
        raw = np.asarray(raw, dtype=np.float64)
        mean = np.asarray(self.mean)
        std = np.asarray(self.std)
        out = np.zeros_like(raw)
        nonzero = std > 0
        out[..., nonzero] = (raw[..., nonzero] - mean[nonzero]) / std[nonzero]
        return out

    def inverse_transform(self, scaled) -> np.ndarray:
        # Constant attributes (std 0) cannot be recovered; they map back to the mean.
        scaled = np.asarray(scaled, dtype=np.float64)
        return scaled * np.asarray(self.std) + np.asarray(self.mean)

    def apply(self, vector: TracingVector) -> TracingVector:
        scaled = tuple(float(v) for v in self.transform(vector.raw()))
        return TracingVector(
            avg_accuracy=vector.avg_accuracy,
            attempt_count=vector.attempt_count,
            median_week=vector.median_week,
            scaled=scaled,
        )


def fit_scaler(vectors: list[TracingVector]) -> FeatureScaler:
    if not vectors:
        raise TraceError("cannot fit a scaler on zero tracing vectors")
    data = np.array([v.raw() for v in vectors], dtype=np.float64)
    mean = data.mean(axis=0)
    std = data.std(axis=0)  # population std
    return FeatureScaler(mean=tuple(float(m) for m in mean), std=tuple(float(s) for s in std))
