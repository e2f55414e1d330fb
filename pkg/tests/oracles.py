"""Independent brute-force oracles used to verify the production code.

These deliberately take the dumbest correct route (path enumeration,
Floyd-Warshall, exhaustive scans) and never share logic with the modules
they check beyond elementary float arithmetic.
"""

from __future__ import annotations

import numpy as np


def has_cycle_dfs(n: int, edges: list[tuple[int, int]]) -> bool:
    """DFS three-color cycle detection over every start node."""
    adjacency = [[] for _ in range(n)]
    for a, b in edges:
        adjacency[a].append(b)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * n

    def visit(u: int) -> bool:
        color[u] = GRAY
        for v in adjacency[u]:
            if color[v] == GRAY:
                return True
            if color[v] == WHITE and visit(v):
                return True
        color[u] = BLACK
        return False

    return any(color[u] == WHITE and visit(u) for u in range(n))


def floyd_warshall_reach(n: int, edges: list[tuple[int, int]]) -> np.ndarray:
    """Boolean reachability closure (no self-reachability unless on a cycle)."""
    reach = np.zeros((n, n), dtype=bool)
    for a, b in edges:
        reach[a, b] = True
    for k in range(n):
        for i in range(n):
            if reach[i, k]:
                reach[i] |= reach[k]
    return reach


def all_simple_paths(n: int, edges: list[tuple[int, int]], src: int, dst: int):
    """Every simple directed path src -> ... -> dst, as node lists."""
    adjacency = [[] for _ in range(n)]
    for a, b in edges:
        adjacency[a].append(b)
    paths = []

    def extend(path):
        node = path[-1]
        if node == dst and len(path) > 1:
            paths.append(list(path))
            return
        for nxt in adjacency[node]:
            if nxt not in path:
                path.append(nxt)
                extend(path)
                path.pop()

    extend([src])
    return paths


def reachable_via_oracle(
    n: int, edges: list[tuple[int, int]], src: int, allowed_intermediates: set[int]
) -> set[int]:
    """Path enumeration: dst reachable iff some simple path's interior nodes
    all lie in allowed_intermediates."""
    reachable = set()
    for dst in range(n):
        if dst == src:
            continue
        for path in all_simple_paths(n, edges, src, dst):
            if all(node in allowed_intermediates for node in path[1:-1]):
                reachable.add(dst)
                break
    return reachable


def absorb_oracle(
    n: int, edges: list[tuple[int, int]], covered: set[int]
) -> set[tuple[int, int]]:
    """Edge (a, b) over covered nodes iff some simple path a -> b has every
    intermediate node uncovered."""
    result = set()
    for a in covered:
        for b in covered:
            if a == b:
                continue
            for path in all_simple_paths(n, edges, a, b):
                if all(node not in covered for node in path[1:-1]):
                    result.add((a, b))
                    break
    return result


def cosine_distance_oracle(a: np.ndarray, b: np.ndarray) -> float:
    return float(1.0 - np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def knn_oracle(students, matrix, query_student, k):
    """Full scan and sort; ties broken by student id."""
    qi = students.index(query_student)
    scored = []
    for i, s in enumerate(students):
        if s == query_student:
            continue
        scored.append((cosine_distance_oracle(matrix[qi], matrix[i]), s))
    scored.sort()
    return [(s, d) for d, s in scored[:k]]


def cohort_oracle(students, matrix, start, end, k):
    direction = matrix[students.index(start)] - matrix[students.index(end)]
    scored = []
    for i, s in enumerate(students):
        if s in (start, end):
            continue
        scored.append((cosine_distance_oracle(matrix[i], direction), s))
    scored.sort()
    return [start] + [s for _, s in scored[:k]] + [end]


def outlier_oracle(students, matrix, k):
    return {
        s: float(np.mean([d for _, d in knn_oracle(students, matrix, s, k)]))
        for s in students
    }
