"""Student profiling via self-supervised graph-level embeddings.

Pipeline: parse a curriculum concept DAG, derive per-student learning graphs
from trace logs (node absorption, standardized tracing attributes), train a
graph encoder with a local/global contrastive objective, then analyze the
latent space: nearest neighbors, cohort groups, outliers, 3-d projection.
"""

from .analysis import CohortQuery, EmbeddingStore, StudentAggregate
from .curriculum import CurriculumGraph, parse_curriculum, validate_dag
from .encoder import EncoderConfig, EncoderModel, gin_forward
from .graphs import LearningGraph, absorb_nodes, build_learning_graph
from .synth import PopulationSpec, gen_curriculum, gen_population
from .traces import TraceLog, TracingVector, ingest_traces, select_students
from .training import TrainConfig, embed_all, infograph_loss, train

__version__ = "0.1.0"

__all__ = [
    "CohortQuery",
    "CurriculumGraph",
    "EmbeddingStore",
    "EncoderConfig",
    "EncoderModel",
    "LearningGraph",
    "PopulationSpec",
    "StudentAggregate",
    "TraceLog",
    "TracingVector",
    "TrainConfig",
    "absorb_nodes",
    "build_learning_graph",
    "embed_all",
    "gen_curriculum",
    "gen_population",
    "gin_forward",
    "infograph_loss",
    "ingest_traces",
    "parse_curriculum",
    "select_students",
    "train",
    "validate_dag",
]
