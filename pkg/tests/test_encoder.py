import numpy as np
import pytest

from edulens.encoder import (
    DiscriminatorParams,
    EncoderConfig,
    EncoderError,
    EncoderModel,
    discriminate,
    encode_batch,
    gin_forward,
    init_params,
)
from edulens.graphs import LearningGraph
from edulens.numerics import ParamTape, grad_check, softplus, sum_all

from .conftest import make_learning_graph, random_learning_graphs


def permute_graph(graph: LearningGraph, perm: np.ndarray) -> LearningGraph:
    """Reorder node rows by perm (new row i = old row perm[i])."""
    inverse = np.empty_like(perm)
    inverse[perm] = np.arange(len(perm))
    return make_learning_graph(
        graph.student,
        graph.features[perm],
        [(int(inverse[a]), int(inverse[b])) for a, b in graph.edges],
    )


def zero_params(model: EncoderModel) -> None:
    for _, tensor in model.tape.items():
        tensor.value = np.zeros_like(tensor.value)


class TestConfig:
    def test_paper_defaults_give_96(self):
        config = EncoderConfig()
        assert (config.num_layers, config.hidden_dim) == (3, 32)
        assert config.embed_dim == 96

    def test_embed_dim_is_layers_times_hidden(self):
        assert EncoderConfig(num_layers=2, hidden_dim=5).embed_dim == 10

    def test_invalid_config_rejected(self):
        with pytest.raises(EncoderError):
            EncoderConfig(num_layers=0)
        with pytest.raises(EncoderError):
            EncoderConfig(hidden_dim=0)


class TestInitParams:
    def test_same_seed_bit_identical(self):
        config = EncoderConfig(num_layers=2, hidden_dim=4)
        a = EncoderModel.initialize(config, seed=9)
        b = EncoderModel.initialize(config, seed=9)
        assert a.tape.names() == b.tape.names()
        for name in a.tape.names():
            assert np.array_equal(a.tape.get(name).value, b.tape.get(name).value)

    def test_different_seeds_differ(self):
        config = EncoderConfig(num_layers=2, hidden_dim=4)
        a = EncoderModel.initialize(config, seed=1)
        b = EncoderModel.initialize(config, seed=2)
        assert any(
            not np.array_equal(a.tape.get(n).value, b.tape.get(n).value)
            for n in a.tape.names()
        )

    def test_glorot_bounds_and_zero_biases(self):
        config = EncoderConfig(num_layers=3, hidden_dim=8)
        model = EncoderModel.initialize(config, seed=3)
        for name, tensor in model.tape.items():
            if name.endswith(".b") or ".b" in name.rsplit(".", 1)[-1]:
                np.testing.assert_array_equal(tensor.value, 0.0)
            elif tensor.value.ndim == 2:
                m, n = tensor.value.shape
                limit = np.sqrt(6.0 / (m + n))
                assert np.all(np.abs(tensor.value) <= limit)


class TestGinForward:
    def test_zero_params_zero_global(self):
        rng = np.random.default_rng(0)
        model = EncoderModel.initialize(EncoderConfig(num_layers=2, hidden_dim=4), seed=0)
        zero_params(model)
        graph = random_learning_graphs(rng, 1)[0]
        enc = gin_forward(model.gin, graph)
        np.testing.assert_array_equal(enc.global_vec, np.zeros(8))
        np.testing.assert_array_equal(enc.patch, np.zeros((graph.num_nodes, 8)))

    def test_single_node_is_pure_mlp_stack(self):
        config = EncoderConfig(num_layers=2, hidden_dim=3)
        model = EncoderModel.initialize(config, seed=4)
        x = np.array([0.3, -0.7, 1.1])
        graph = make_learning_graph("s", x.reshape(1, 3), [])
        enc = gin_forward(model.gin, graph)
        # no neighbors: each layer sees exactly its input vector
        h = x
        expected = []
        for layer in model.gin.layers:
            pre = np.maximum(h @ layer.w1.value + layer.b1.value, 0.0)
            h = pre @ layer.w2.value + layer.b2.value
            expected.append(h)
        np.testing.assert_allclose(enc.patch[0], np.concatenate(expected), atol=1e-12)
        np.testing.assert_allclose(enc.global_vec, np.concatenate(expected), atol=1e-12)

    def test_two_node_path_hand_computed(self):
        # K=1, hidden 2, hand-set weights; oracle is plain scalar arithmetic
        config = EncoderConfig(num_layers=1, hidden_dim=2, input_dim=2)
        model = EncoderModel.initialize(config, seed=0)
        w1 = [[0.5, -1.0], [0.25, 1.5]]
        b1 = [0.1, -0.2]
        w2 = [[2.0, 0.0], [1.0, -1.0]]
        b2 = [0.05, 0.3]
        model.gin.layers[0].w1.value = np.array(w1)
        model.gin.layers[0].b1.value = np.array(b1)
        model.gin.layers[0].w2.value = np.array(w2)
        model.gin.layers[0].b2.value = np.array(b2)
        x = [[1.0, 2.0], [-3.0, 0.5]]
        graph = make_learning_graph("s", np.array(x), [(0, 1)])

        # neighborhoods are symmetric: each node aggregates self + other
        agg = [
            [x[0][0] + x[1][0], x[0][1] + x[1][1]],
            [x[1][0] + x[0][0], x[1][1] + x[0][1]],
        ]
        expected_patch = []
        for row in agg:
            hidden = []
            for j in range(2):
                pre = row[0] * w1[0][j] + row[1] * w1[1][j] + b1[j]
                hidden.append(pre if pre > 0 else 0.0)
            out = []
            for j in range(2):
                out.append(hidden[0] * w2[0][j] + hidden[1] * w2[1][j] + b2[j])
            expected_patch.append(out)
        expected_global = [
            expected_patch[0][0] + expected_patch[1][0],
            expected_patch[0][1] + expected_patch[1][1],
        ]

        enc = gin_forward(model.gin, graph)
        np.testing.assert_allclose(enc.patch, expected_patch, atol=1e-12)
        np.testing.assert_allclose(enc.global_vec, expected_global, atol=1e-12)

    def test_global_is_column_sum_of_patch(self):
        rng = np.random.default_rng(5)
        model = EncoderModel.initialize(EncoderConfig(num_layers=3, hidden_dim=4), seed=5)
        for graph in random_learning_graphs(rng, 5):
            enc = gin_forward(model.gin, graph)
            np.testing.assert_allclose(enc.global_vec, enc.patch.sum(axis=0), atol=1e-12)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(6)
        model = EncoderModel.initialize(EncoderConfig(num_layers=3, hidden_dim=8), seed=6)
        for graph in random_learning_graphs(rng, 10, min_nodes=3, max_nodes=7):
            base = gin_forward(model.gin, graph)
            for _ in range(10):
                perm = rng.permutation(graph.num_nodes)
                permuted = gin_forward(model.gin, permute_graph(graph, perm))
                np.testing.assert_allclose(permuted.global_vec, base.global_vec, atol=1e-9)
                np.testing.assert_allclose(permuted.patch, base.patch[perm], atol=1e-9)

    def test_zeroed_layer_zeroes_its_patch_slice(self):
        rng = np.random.default_rng(7)
        config = EncoderConfig(num_layers=3, hidden_dim=4)
        graph = random_learning_graphs(rng, 1)[0]
        for k in range(3):
            model = EncoderModel.initialize(config, seed=8)
            for name, tensor in model.tape.items():
                if name.startswith("gin") and name.endswith(("b1", "b2")):
                    tensor.value = rng.normal(size=tensor.value.shape)
            layer = model.gin.layers[k]
            for tensor in (layer.w1, layer.b1, layer.w2, layer.b2):
                tensor.value = np.zeros_like(tensor.value)
            patch = gin_forward(model.gin, graph).patch
            lo, hi = k * 4, (k + 1) * 4
            np.testing.assert_array_equal(patch[:, lo:hi], 0.0)
            others = np.delete(patch, np.s_[lo:hi], axis=1)
            assert np.any(others != 0.0)  # nonzero biases keep other slices alive

    def test_dimension_mismatch_rejected(self):
        model = EncoderModel.initialize(EncoderConfig(num_layers=1, hidden_dim=2), seed=0)
        graph = make_learning_graph("s", np.ones((2, 5)), [])
        with pytest.raises(EncoderError, match="attributes"):
            gin_forward(model.gin, graph)

    def test_directed_aggregation_uses_in_edges_only(self):
        config = EncoderConfig(num_layers=1, hidden_dim=2, input_dim=2, directed_aggregation=True)
        model = EncoderModel.initialize(config, seed=1)
        x = np.array([[1.0, 0.5], [2.0, -1.0]])
        graph = make_learning_graph("s", x, [(0, 1)])
        enc = gin_forward(model.gin, graph)
        layer = model.gin.layers[0]

        def mlp(v):
            pre = np.maximum(v @ layer.w1.value + layer.b1.value, 0.0)
            return pre @ layer.w2.value + layer.b2.value

        np.testing.assert_allclose(enc.patch[0], mlp(x[0]), atol=1e-12)  # no in-neighbor
        np.testing.assert_allclose(enc.patch[1], mlp(x[1] + x[0]), atol=1e-12)

    def test_gradients_pass_finite_difference_check(self):
        rng = np.random.default_rng(9)
        config = EncoderConfig(num_layers=2, hidden_dim=4)
        model = EncoderModel.initialize(config, seed=10)
        graphs = random_learning_graphs(rng, 3)

        def loss(tape):
            enc = encode_batch(model.gin, graphs)
            return sum_all(softplus(enc.globals_))

        error = grad_check(loss, model.tape, probe_count=10_000)
        assert error <= 1e-4


class TestDiscriminator:
    def test_zero_params_score_zero(self):
        model = EncoderModel.initialize(EncoderConfig(num_layers=1, hidden_dim=2), seed=0)
        zero_params(model)
        assert discriminate(model.disc, np.ones(2), np.ones(2)) == 0.0

    def test_identity_projections_orthogonal_inputs(self):
        model = EncoderModel.initialize(EncoderConfig(num_layers=1, hidden_dim=2), seed=0)
        for head in (model.disc.local_head, model.disc.global_head):
            for w, b in head:
                w.value = np.eye(2)
                b.value = np.zeros(2)
        # non-negative inputs pass relu unchanged, so projections are identities
        assert discriminate(model.disc, np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0
        assert discriminate(model.disc, np.array([2.0, 0.0]), np.array([2.0, 0.0])) == 4.0

    def test_fixed_small_params_hand_computed(self):
        model = EncoderModel.initialize(EncoderConfig(num_layers=1, hidden_dim=2), seed=0)
        lw = [[0.5, -0.5], [1.0, 0.25]]
        gw = [[0.2, 0.4], [-0.3, 0.6]]
        for w, b in model.disc.local_head:
            w.value = np.array(lw)
            b.value = np.array([0.1, 0.2])
        for w, b in model.disc.global_head:
            w.value = np.array(gw)
            b.value = np.array([-0.1, 0.3])
        local_in = [0.7, -0.2]
        global_in = [0.5, 1.5]

        def head_oracle(weights, bias, v):
            out = list(v)
            for layer in range(3):
                nxt = [
                    out[0] * weights[0][j] + out[1] * weights[1][j] + bias[j]
                    for j in range(2)
                ]
                if layer < 2:
                    nxt = [max(t, 0.0) for t in nxt]
                out = nxt
            return out

        lp = head_oracle(lw, [0.1, 0.2], local_in)
        gp = head_oracle(gw, [-0.1, 0.3], global_in)
        expected = lp[0] * gp[0] + lp[1] * gp[1]
        got = discriminate(model.disc, np.array(local_in), np.array(global_in))
        assert got == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch(self):
        model = EncoderModel.initialize(EncoderConfig(num_layers=1, hidden_dim=2), seed=0)
        with pytest.raises(EncoderError, match="expects 2-d"):
            discriminate(model.disc, np.ones(3), np.ones(2))
