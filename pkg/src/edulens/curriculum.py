"""Curriculum-structure graphs: per-topic concept DAGs with prerequisite edges."""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from functools import cached_property


class CurriculumError(ValueError):
    """Malformed or inconsistent curriculum document."""


@dataclass(frozen=True)
class ConceptId:
    """A concept within a topic: opaque id plus dense 0-based ordinal."""

    id: str
    ordinal: int
    name: str = ""


@dataclass(frozen=True)
class CurriculumGraph:
    """Immutable concept DAG for one topic.

    Concept ordinals follow document order; edges are (from_ordinal,
    to_ordinal) pairs meaning "from is a prerequisite of to".
    """

    topic: str
    concepts: tuple[ConceptId, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def num_concepts(self) -> int:
        return len(self.concepts)

    @cached_property
    def id_to_ordinal(self) -> dict[str, int]:
        return {c.id: c.ordinal for c in self.concepts}

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.concepts]
        for a, b in self.edges:
            out[a].append(b)
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.concepts]
        for a, b in self.edges:
            inc[b].append(a)
        return tuple(tuple(sorted(p)) for p in inc)

    def concept(self, ordinal: int) -> ConceptId:
        return self.concepts[ordinal]


def parse_curriculum(text: str) -> CurriculumGraph:
    """Parse and validate a curriculum document (JSON, one topic per file).

    Ordinals are assigned in document order. Raises CurriculumError on
    malformed structure, duplicate concept ids, edges referencing unknown
    concepts, self-loops, duplicate edges, or cycles.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CurriculumError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CurriculumError("document root must be an object")
    topic = doc.get("topic")
    if not isinstance(topic, str) or not topic:
        raise CurriculumError("missing or empty 'topic'")
    raw_concepts = doc.get("concepts")
    if not isinstance(raw_concepts, list) or not raw_concepts:
        raise CurriculumError("'concepts' must be a non-empty array")

    concepts: list[ConceptId] = []
    seen: set[str] = set()
    for i, entry in enumerate(raw_concepts):
        if isinstance(entry, str):
            cid, name = entry, ""
        elif isinstance(entry, dict) and isinstance(entry.get("id"), str):
            cid, name = entry["id"], str(entry.get("name", ""))
        else:
            raise CurriculumError(f"concept #{i} must be a string id or an object with 'id'")
        if not cid:
            raise CurriculumError(f"concept #{i} has an empty id")
        if cid in seen:
            raise CurriculumError(f"duplicate concept id {cid!r}")
        seen.add(cid)
        concepts.append(ConceptId(id=cid, ordinal=i, name=name))
    by_id = {c.id: c.ordinal for c in concepts}

    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise CurriculumError("'edges' must be an array")
    edges: list[tuple[int, int]] = []
    edge_set: set[tuple[int, int]] = set()
    for i, pair in enumerate(raw_edges):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise CurriculumError(f"edge #{i} must be a [from_id, to_id] pair")
        src, dst = pair
        for cid in (src, dst):
            if cid not in by_id:
                raise CurriculumError(f"edge #{i} references unknown concept {cid!r}")
        a, b = by_id[src], by_id[dst]
        if a == b:
            raise CurriculumError(f"edge #{i} is a self-loop on {src!r}")
        if (a, b) in edge_set:
            raise CurriculumError(f"duplicate edge {src!r} -> {dst!r}")
        edge_set.add((a, b))
        edges.append((a, b))

    graph = CurriculumGraph(topic=topic, concepts=tuple(concepts), edges=tuple(edges))
    validate_dag(graph)  # raises on cycles
    return graph


def serialize_curriculum(graph: CurriculumGraph) -> str:
    """Canonical serialization; parse followed by serialize is a fixed point."""
    doc = {
        "topic": graph.topic,
        "concepts": [
            {"id": c.id, "name": c.name} if c.name else {"id": c.id}
            for c in graph.concepts
        ],
        "edges": [
            [graph.concepts[a].id, graph.concepts[b].id]
            for a, b in sorted(graph.edges)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_curriculum(path) -> CurriculumGraph:
    with open(path, encoding="utf-8") as f:
        return parse_curriculum(f.read())


def validate_dag(graph: CurriculumGraph) -> list[int]:
    """Deterministic topological order via Kahn's algorithm (min-ordinal first).

    Raises CurriculumError naming one offending edge if the graph has a cycle.
    """
    n = graph.num_concepts
    indegree = [0] * n
    for _, b in graph.edges:
        indegree[b] += 1
    ready = [i for i in range(n) if indegree[i] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for succ in graph.successors[node]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, succ)
    if len(order) < n:
        remaining = {i for i in range(n) if i not in set(order)}
        edge = _find_cycle_edge(graph, remaining)
        a, b = edge
        raise CurriculumError(
            f"curriculum contains a cycle through edge "
            f"{graph.concepts[a].id!r} -> {graph.concepts[b].id!r}"
        )
    return order


def _find_cycle_edge(graph: CurriculumGraph, remaining: set[int]) -> tuple[int, int]:
    # Every node Kahn's algorithm left behind still has an in-edge from
    # another remaining node, so walking predecessors must revisit one.
    start = min(remaining)
    path: list[int] = [start]
    on_path = {start}
    while True:
        node = path[-1]
        pred = min(p for p in graph.predecessors[node] if p in remaining)
        if pred in on_path:
            return (pred, node)
        path.append(pred)
        on_path.add(pred)


def reachable_via_excluded(
    graph: CurriculumGraph, source: int, excluded_ok: set[int]
) -> set[int]:
    """Nodes reachable from source along paths whose intermediate nodes all
    belong to excluded_ok (endpoints are unconstrained)."""
    if not 0 <= source < graph.num_concepts:
        raise CurriculumError(f"source ordinal {source} out of range")
    reached: set[int] = set()
    frontier = list(graph.successors[source])
    visited: set[int] = set()
    while frontier:
        node = frontier.pop()
        if node in visited:
            continue
        visited.add(node)
        if node != source:
            reached.add(node)
        # Only nodes allowed as intermediates may be expanded further.
        if node in excluded_ok:
            frontier.extend(graph.successors[node])
    return reached
