import json

import numpy as np
import pytest

from edulens.curriculum import (
    CurriculumError,
    parse_curriculum,
    reachable_via_excluded,
    serialize_curriculum,
    validate_dag,
)

from .conftest import curriculum_json, make_curriculum, random_dag
from .oracles import floyd_warshall_reach, has_cycle_dfs, reachable_via_oracle


class TestParse:
    def test_smallest_valid_graph(self):
        g = parse_curriculum(curriculum_json("T", ["c1"], []))
        assert g.topic == "T"
        assert g.num_concepts == 1
        assert g.edges == ()
        assert g.concepts[0].ordinal == 0

    def test_two_cycle_rejected(self):
        doc = curriculum_json("T", ["c1", "c2"], [("c1", "c2"), ("c2", "c1")])
        with pytest.raises(CurriculumError, match="cycle"):
            parse_curriculum(doc)

    def test_six_node_dag(self, dag6):
        assert dag6.num_concepts == 6
        assert set(dag6.edges) == {(0, 1), (1, 2), (2, 4), (1, 3), (3, 5)}
        # oracle: the parsed structure has no cycle
        assert not has_cycle_dfs(6, list(dag6.edges))

    def test_ordinals_follow_document_order(self):
        g = parse_curriculum(curriculum_json("T", ["z", "a", "m"], []))
        assert [c.id for c in g.concepts] == ["z", "a", "m"]
        assert [c.ordinal for c in g.concepts] == [0, 1, 2]

    def test_duplicate_concept_id(self):
        with pytest.raises(CurriculumError, match="duplicate concept"):
            parse_curriculum(curriculum_json("T", ["c1", "c1"], []))

    def test_unknown_edge_endpoint(self):
        with pytest.raises(CurriculumError, match="unknown concept"):
            parse_curriculum(curriculum_json("T", ["c1"], [("c1", "zzz")]))

    def test_self_loop_rejected(self):
        with pytest.raises(CurriculumError, match="self-loop"):
            parse_curriculum(curriculum_json("T", ["c1", "c2"], [("c1", "c1")]))

    def test_duplicate_edge_rejected(self):
        with pytest.raises(CurriculumError, match="duplicate edge"):
            parse_curriculum(curriculum_json("T", ["c1", "c2"], [("c1", "c2"), ("c1", "c2")]))

    def test_malformed_json(self):
        with pytest.raises(CurriculumError, match="invalid JSON"):
            parse_curriculum("{not json")

    def test_missing_topic(self):
        with pytest.raises(CurriculumError, match="topic"):
            parse_curriculum(json.dumps({"concepts": [{"id": "c1"}]}))

    def test_serialize_is_fixed_point(self, dag6):
        once = serialize_curriculum(dag6)
        again = serialize_curriculum(parse_curriculum(once))
        assert once == again

    def test_serialize_fixed_point_random(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            n, edges = random_dag(rng)
            g = make_curriculum(n, edges)
            once = serialize_curriculum(g)
            assert serialize_curriculum(parse_curriculum(once)) == once


class TestValidateDag:
    def test_empty_edges(self):
        g = parse_curriculum(curriculum_json("T", ["c1"], []))
        assert validate_dag(g) == [0]

    def test_chain_order_forced(self, chain3):
        assert validate_dag(chain3) == [0, 1, 2]

    def test_six_node_dag_order(self, dag6):
        order = validate_dag(dag6)
        assert order == [0, 1, 2, 3, 4, 5]
        # oracle: every edge goes forward in the returned order
        position = {node: i for i, node in enumerate(order)}
        assert all(position[a] < position[b] for a, b in dag6.edges)

    def test_agrees_with_dfs_cycle_oracle(self):
        # validate_dag succeeds iff brute-force DFS finds no cycle
        rng = np.random.default_rng(11)
        for _ in range(100):
            n, edges = random_dag(rng)
            # randomly flip some edges to sometimes create cycles
            flipped = [
                (b, a) if rng.random() < 0.25 else (a, b) for a, b in edges
            ]
            from edulens.curriculum import ConceptId, CurriculumGraph

            graph = CurriculumGraph(
                topic="T",
                concepts=tuple(ConceptId(id=f"c{i}", ordinal=i) for i in range(n)),
                edges=tuple(flipped),
            )
            if has_cycle_dfs(n, flipped):
                with pytest.raises(CurriculumError):
                    validate_dag(graph)
            else:
                order = validate_dag(graph)
                position = {node: i for i, node in enumerate(order)}
                assert sorted(order) == list(range(n))
                assert all(position[a] < position[b] for a, b in flipped)


class TestReachableViaExcluded:
    def test_chain_no_intermediates_allowed(self, chain3):
        assert reachable_via_excluded(chain3, 0, set()) == {1}

    def test_chain_with_allowed_middle(self, chain3):
        expected = reachable_via_oracle(3, list(chain3.edges), 0, {1})
        assert expected == {1, 2}
        assert reachable_via_excluded(chain3, 0, {1}) == expected

    def test_six_node_dag(self, dag6):
        # source c2 (ordinal 1), c3/c4 (ordinals 2, 3) usable as intermediates
        expected = reachable_via_oracle(6, list(dag6.edges), 1, {2, 3})
        assert expected == {2, 3, 4, 5}
        assert reachable_via_excluded(dag6, 1, {2, 3}) == expected

    def test_all_nodes_allowed_equals_transitive_closure(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n, edges = random_dag(rng)
            g = make_curriculum(n, edges)
            closure = floyd_warshall_reach(n, edges)
            everything = set(range(n))
            for src in range(n):
                expected = {dst for dst in range(n) if closure[src, dst]}
                assert reachable_via_excluded(g, src, everything) == expected

    def test_matches_path_enumeration_on_random_dags(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            n, edges = random_dag(rng)
            g = make_curriculum(n, edges)
            src = int(rng.integers(0, n))
            allowed = {int(i) for i in range(n) if rng.random() < 0.5}
            assert reachable_via_excluded(g, src, allowed) == reachable_via_oracle(
                n, edges, src, allowed
            )

    def test_bad_source(self, chain3):
        with pytest.raises(CurriculumError, match="out of range"):
            reachable_via_excluded(chain3, 99, set())
