import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from linmann.applications import (
    DirectedWeightedGraph,
    ZeroSumGame,
    consensus_operator,
    game_iteration_operator,
    is_consensus,
    laplacian,
    three_node_digraph,
    pseudogradient_matrix,
)
from linmann.classify import classify
from linmann.errors import InputError, ModelError
from linmann.matrix_core import eigenvalues

from conftest import THREE_NODE_L


def _same_multiset(got, want, tol=1e-9):
    got = sorted(np.round(got, 9), key=lambda z: (z.real, z.imag))
    want = sorted(np.round(np.asarray(want, complex), 9), key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(got, want, atol=tol)


class TestGraphs:
    def test_three_node_laplacian(self):
        np.testing.assert_array_equal(laplacian(three_node_digraph()), THREE_NODE_L)

    def test_empty_and_pair(self):
        np.testing.assert_array_equal(laplacian(DirectedWeightedGraph(np.zeros((3, 3)))), np.zeros((3, 3)))
        pair = DirectedWeightedGraph.from_edges(2, [(0, 1, 1.0), (1, 0, 1.0)])
        np.testing.assert_array_equal(laplacian(pair), [[1, -1], [-1, 1]])

    def test_consensus_operator_examples(self):
        np.testing.assert_array_equal(consensus_operator(np.zeros((2, 2))), np.eye(2))
        np.testing.assert_array_equal(consensus_operator([[1, -1], [-1, 1]]), [[0, 1], [1, 0]])
        _same_multiset(eigenvalues(consensus_operator(THREE_NODE_L)), [1, -0.5 + 0.5j, -0.5 - 0.5j])

    def test_connectivity(self):
        assert three_node_digraph().is_strongly_connected()
        chain = DirectedWeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
        assert not chain.is_strongly_connected()
        assert DirectedWeightedGraph(np.zeros((1, 1))).is_strongly_connected()

    def test_validation(self):
        with pytest.raises(InputError):
            DirectedWeightedGraph([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(InputError):
            DirectedWeightedGraph([[0.0, -1.0], [0.0, 0.0]])
        with pytest.raises(InputError):
            DirectedWeightedGraph.from_edges(2, [(0, 2, 1.0)])

    @settings(max_examples=60)
    @given(arrays(float, (4, 4), elements=st.floats(0, 5)))
    def test_laplacian_rows_sum_to_zero(self, W):
        np.fill_diagonal(W, 0.0)
        L = laplacian(DirectedWeightedGraph(W))
        np.testing.assert_allclose(L.sum(axis=1), 0, atol=1e-12)
        assert np.all(L - np.diag(np.diag(L)) <= 0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_strongly_connected_graphs_give_spc_consensus_map(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        W = rng.uniform(0.1, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < 0.5)
        for i in range(n):
            W[i, (i + 1) % n] = rng.uniform(0.1, 1.0)  # a directed ring keeps it strongly connected
        np.fill_diagonal(W, 0.0)
        scale = 1.0 / np.max(W.sum(axis=1))  # Gershgorin: eigenvalues of I - L with Re < 1 except 1
        r = classify(consensus_operator(laplacian(DirectedWeightedGraph(W * scale))), certify=False)
        assert r.is_spc


class TestConsensusPredicate:
    def test_examples(self):
        assert is_consensus([3, 3, 3], 1e-9)
        assert not is_consensus([1, 0, 0], 1e-9)


class TestGame:
    def test_scalar_game(self):
        np.testing.assert_array_equal(pseudogradient_matrix(ZeroSumGame([[1.0]])), [[0, 1], [-1, 0]])
        M = game_iteration_operator(ZeroSumGame([[1.0]]))
        np.testing.assert_array_equal(M, [[1, -1], [1, 1]])
        _same_multiset(eigenvalues(M), [1 + 1j, 1 - 1j])

    def test_identity_cost(self):
        F = pseudogradient_matrix(ZeroSumGame(np.eye(2)))
        np.testing.assert_array_equal(F, [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
        _same_multiset(eigenvalues(np.eye(4) - F), [1 + 1j, 1 + 1j, 1 - 1j, 1 - 1j])

    def test_kronecker_spectrum(self):
        M = game_iteration_operator(ZeroSumGame(np.diag([1.0, 2.0])))
        _same_multiset(eigenvalues(M), [1 + 1j, 1 - 1j, 1 + 2j, 1 - 2j])

    @settings(max_examples=40, deadline=None)
    @given(arrays(float, (3, 3), elements=st.floats(-3, 3)))
    def test_never_spc(self, M):
        C = M + M.T
        if np.max(np.abs(C)) < 1e-3 or np.min(np.abs(np.linalg.eigvalsh(C))) < 1e-3:
            return
        assert not classify(game_iteration_operator(ZeroSumGame(C)), certify=False).is_spc

    @pytest.mark.parametrize("C", [np.zeros((2, 2)), [[1.0, 2.0], [0.0, 1.0]], [[np.nan]]])
    def test_model_errors(self, C):
        with pytest.raises(ModelError):
            ZeroSumGame(C)
