"""Command-line pipeline driver.

Stages communicate through files in a run directory (see artifacts module),
so each command can be run, inspected, and re-run independently. All
randomness is seeded; identical inputs and seeds give identical outputs.
"""

from __future__ import annotations

import functools
import json
import sys
from datetime import date
from pathlib import Path

import click

from . import artifacts
from .analysis import CohortQuery, EmbeddingStore, student_aggregate
from .curriculum import load_curriculum, serialize_curriculum
from .encoder import EncoderConfig, EncoderModel
from .graphs import build_learning_graph
from .numerics import load_checkpoint, save_checkpoint
from .reports import cohort_payload, neighbors_payload, outliers_payload, projection_payload
from .synth import gen_curriculum, gen_population, two_cluster_spec
from .traces import fit_scaler, format_traces, load_traces, select_students
from .training import TrainConfig, embed_all, run_manifest, train


def _fail_cleanly(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, OSError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


out_option = click.option(
    "--out",
    envvar="EDULENS_OUT",
    required=True,
    type=click.Path(path_type=Path),
    help="Run directory holding pipeline artifacts (env: EDULENS_OUT).",
)


@click.group()
def main():
    """Profile students from curriculum learning traces via graph embeddings."""


@main.command()
@out_option
@click.option("--concepts", default=15, show_default=True, help="Number of concepts.")
@click.option("--density", default=0.25, show_default=True, help="Extra-edge probability.")
@click.option("--students", default=300, show_default=True, help="Population size.")
@click.option("--topic", default="synth", show_default=True)
@click.option("--seed", default=0, show_default=True)
@_fail_cleanly
def synth(out: Path, concepts: int, density: float, students: int, topic: str, seed: int):
    """Generate a synthetic curriculum, trace log, and held-out labels."""
    curriculum = gen_curriculum(concepts, density, seed, topic=topic)
    log, labels = gen_population(curriculum, two_cluster_spec(students, seed=seed))
    out.mkdir(parents=True, exist_ok=True)
    (out / artifacts.CURRICULUM_FILE).write_text(serialize_curriculum(curriculum))
    (out / artifacts.TRACES_FILE).write_text(format_traces(log))
    artifacts.write_json(out / artifacts.LABELS_FILE, {"topic": topic, "labels": labels})
    click.echo(
        f"wrote {artifacts.CURRICULUM_FILE}, {artifacts.TRACES_FILE}, "
        f"{artifacts.LABELS_FILE} to {out} "
        f"({concepts} concepts, {students} students, {len(log.records)} attempts)"
    )


def _academic_start_option(fn):
    return click.option(
        "--academic-start",
        type=click.DateTime(formats=["%Y-%m-%d"]),
        default=None,
        help="Academic year start date, required when traces carry timestamps.",
    )(fn)


@main.command()
@click.option("--curriculum", "curriculum_path", required=True, type=click.Path(exists=True))
@click.option("--traces", "traces_path", required=True, type=click.Path(exists=True))
@_academic_start_option
@_fail_cleanly
def ingest(curriculum_path, traces_path, academic_start):
    """Validate a trace file against a curriculum and print a summary."""
    curriculum = load_curriculum(curriculum_path)
    start = academic_start.date() if academic_start else None
    log = load_traces(traces_path, curriculum, academic_start=start)
    summary = {
        "topic": curriculum.topic,
        "concepts": curriculum.num_concepts,
        "records": len(log.records),
        "students": len(log.by_student),
    }
    click.echo(json.dumps(summary, indent=2))


@main.command()
@click.option("--curriculum", "curriculum_path", required=True, type=click.Path(exists=True))
@click.option("--traces", "traces_path", required=True, type=click.Path(exists=True))
@out_option
@click.option("--threshold", default=0.5, show_default=True, help="Concept coverage cutoff.")
@_academic_start_option
@_fail_cleanly
def build(curriculum_path, traces_path, out: Path, threshold: float, academic_start):
    """Select students by coverage and build their learning graphs."""
    curriculum = load_curriculum(curriculum_path)
    start = academic_start.date() if academic_start else None
    log = load_traces(traces_path, curriculum, academic_start=start)
    selected = sorted(select_students(log, curriculum, threshold))
    if not selected:
        raise click.ClickException(f"no students reach coverage threshold {threshold}")

    from .traces import extract_tracing_vector

    vectors = []
    for student in selected:
        for concept in sorted(
            log.concepts_attempted(student), key=curriculum.id_to_ordinal.get
        ):
            vectors.append(extract_tracing_vector(log, student, concept))
    scaler = fit_scaler(vectors)
    graphs = [build_learning_graph(curriculum, log, scaler, s) for s in selected]
    artifacts.write_json(
        out / artifacts.GRAPHS_FILE,
        artifacts.graphs_bundle(curriculum.topic, threshold, scaler, graphs),
    )
    aggregates = {
        s: student_aggregate(log, s, curriculum.topic).to_dict() for s in selected
    }
    artifacts.write_json(
        out / artifacts.AGGREGATES_FILE,
        {"topic": curriculum.topic, "aggregates": aggregates},
    )
    click.echo(
        f"selected {len(selected)}/{len(log.by_student)} students at threshold "
        f"{threshold}; wrote {artifacts.GRAPHS_FILE}, {artifacts.AGGREGATES_FILE}"
    )


@main.command("train")
@out_option
@click.option("--epochs", default=20, show_default=True)
@click.option("--batch-size", default=128, show_default=True)
@click.option("--lr", default=0.01, show_default=True)
@click.option("--layers", default=3, show_default=True)
@click.option("--hidden-dim", default=32, show_default=True)
@click.option("--seed", default=0, show_default=True)
@_fail_cleanly
def train_cmd(out: Path, epochs, batch_size, lr, layers, hidden_dim, seed):
    """Train the encoder on the built learning graphs."""
    topic, _, scaler, graphs = artifacts.load_graphs_bundle(out / artifacts.GRAPHS_FILE)
    input_dim = graphs[0].features.shape[1] if graphs else 3
    config = TrainConfig(
        batch_size=batch_size,
        learning_rate=lr,
        epochs=epochs,
        seed=seed,
        encoder=EncoderConfig(num_layers=layers, hidden_dim=hidden_dim, input_dim=input_dim),
    )
    result = train(graphs, config)
    save_checkpoint(
        out / artifacts.CHECKPOINT_FILE,
        config.to_dict(),
        result.model.tape,
        artifacts.scaler_to_dict(scaler),
    )
    manifest = run_manifest(config, result, num_graphs=len(graphs))
    manifest["topic"] = topic
    artifacts.write_json(out / artifacts.MANIFEST_FILE, manifest)
    click.echo(
        f"trained {config.epochs} epochs on {len(graphs)} graphs "
        f"(loss {result.epoch_losses[0]:.4f} -> {result.epoch_losses[-1]:.4f}); "
        f"wrote {artifacts.CHECKPOINT_FILE}, {artifacts.MANIFEST_FILE}"
    )


@main.command()
@out_option
@_fail_cleanly
def embed(out: Path):
    """Embed every built learning graph with the trained encoder."""
    topic, _, _, graphs = artifacts.load_graphs_bundle(out / artifacts.GRAPHS_FILE)
    config_doc, tape, _ = load_checkpoint(out / artifacts.CHECKPOINT_FILE)
    model = EncoderModel.from_tape(EncoderConfig.from_dict(config_doc["encoder"]), tape)
    store = embed_all(model, graphs)
    artifacts.write_json(out / artifacts.EMBEDDINGS_FILE, store.to_dict())
    click.echo(f"embedded {len(store)} students at dim {store.dim}; wrote {artifacts.EMBEDDINGS_FILE}")


def _load_store(out: Path) -> EmbeddingStore:
    return EmbeddingStore.from_dict(artifacts.read_json(out / artifacts.EMBEDDINGS_FILE))


@main.command()
@out_option
@click.option("--student", required=True)
@click.option("--k", default=5, show_default=True)
@_fail_cleanly
def neighbors(out: Path, student: str, k: int):
    """Rank the k nearest students by cosine distance."""
    click.echo(json.dumps(neighbors_payload(_load_store(out), student, k), indent=2))


@main.command()
@out_option
@click.option("--start", required=True)
@click.option("--end", required=True)
@click.option("--k", default=5, show_default=True)
@_fail_cleanly
def cohort(out: Path, start: str, end: str, k: int):
    """Build a cohort group along the start-to-end direction vector."""
    payload = cohort_payload(_load_store(out), CohortQuery(start=start, end=end, k=k))
    click.echo(json.dumps(payload, indent=2))


@main.command()
@out_option
@click.option("--k", default=5, show_default=True)
@_fail_cleanly
def outliers(out: Path, k: int):
    """Score students by mean cosine distance to their k nearest neighbors."""
    click.echo(json.dumps(outliers_payload(_load_store(out), k), indent=2))


@main.command()
@out_option
@_fail_cleanly
def project(out: Path):
    """Project the embedding store to 3-d PCA coordinates."""
    payload = projection_payload(_load_store(out))
    artifacts.write_json(out / artifacts.PROJECTION_FILE, payload)
    click.echo(f"wrote {artifacts.PROJECTION_FILE} ({len(payload['students'])} students)")


@main.command()
@out_option
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static", "static_dir", type=click.Path(path_type=Path), default=None,
              help="Directory of built explorer assets to serve at /.")
@click.option("--cors-origin", "cors_origins", multiple=True,
              help="Allowed CORS origin (repeatable; default allows all).")
@_fail_cleanly
def serve(out: Path, port: int, host: str, static_dir, cors_origins):
    """Serve the run's artifacts over a read-only HTTP/JSON API."""
    import uvicorn

    from .service import RunSnapshot, create_app

    snapshot = RunSnapshot.load(out)
    app = create_app(
        snapshot,
        cors_origins=list(cors_origins) or ["*"],
        static_dir=static_dir,
    )
    click.echo(f"serving topic {snapshot.topic!r} ({len(snapshot.store)} students) on {host}:{port}")
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits on bind failure
        sys.exit(exc.code or 1)


if __name__ == "__main__":
    main()
