"""Builders for the two case studies: Laplacian consensus and the zero-sum LQ game."""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ModelError
from .matrix_core import as_matrix


@dataclass(frozen=True)
class DirectedWeightedGraph:
    """Weighted digraph; ``weights[i, j]`` is the weight of edge i -> j."""

    weights: np.ndarray

    def __post_init__(self):
        W = np.array(self.weights, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] == 0:
            raise InputError(f"weight matrix must be square and non-empty, got shape {W.shape}")
        if not np.all(np.isfinite(W)) or np.any(W < 0):
            raise InputError("edge weights must be finite and non-negative")
        if np.any(np.diag(W) != 0):
            raise InputError("self-loops are not allowed (diagonal must be zero)")
        object.__setattr__(self, "weights", W)

    @property
    def n_nodes(self):
        return self.weights.shape[0]

    @classmethod
    def from_edges(cls, n_nodes, edges):
        """Build from ``(i, j, w)`` triples with 0-based node indices."""
        W = np.zeros((n_nodes, n_nodes))
        for i, j, w in edges:
            if not (0 <= i < n_nodes and 0 <= j < n_nodes):
                raise InputError(f"edge ({i}, {j}) references a node outside 0..{n_nodes - 1}")
            W[i, j] += w
        return cls(W)

    def is_strongly_connected(self):
        adj = self.weights > 0

        def reaches_all(M):
            seen = {0}
            todo = deque([0])
            while todo:
                u = todo.popleft()
                for v in np.flatnonzero(M[u]):
                    if v not in seen:
                        seen.add(int(v))
                        todo.append(int(v))
            return len(seen) == self.n_nodes

        return reaches_all(adj) and reaches_all(adj.T)


def three_node_digraph():
    """Three-node digraph with a12 = a13 = 1/2 and a23 = a31 = 1."""
    return DirectedWeightedGraph.from_edges(3, [(0, 1, 0.5), (0, 2, 0.5), (1, 2, 1.0), (2, 0, 1.0)])


def laplacian(g):
    """``L = D_out - W`` with out-degrees on the diagonal; rows sum to zero."""
    W = g.weights
    return np.diag(W.sum(axis=1)) - W


def consensus_operator(L):
    L = as_matrix(L)
    return np.eye(L.shape[0]) - L


def is_consensus(x, tol=1e-9):
    x = np.asarray(x, dtype=float).reshape(-1)
    if tol <= 0:
        raise InputError("tol must be positive")
    mean = float(np.mean(x))
    return bool(np.max(np.abs(x - mean)) <= tol * (1.0 + abs(mean)))


@dataclass(frozen=True)
class ZeroSumGame:
    """Two players with costs ``x1^T C x2`` and ``-x2^T C^T x1``; ``C`` symmetric and nonzero."""

    C: np.ndarray

    def __post_init__(self):
        try:
            C = as_matrix(self.C)
        except InputError as exc:
            raise ModelError(f"invalid game matrix: {exc}") from None
        if not np.any(C != 0):
            raise ModelError("game matrix C must be nonzero")
        if np.max(np.abs(C - C.T)) > 1e-12 * np.max(np.abs(C)):
            raise ModelError("game matrix C must be symmetric")
        object.__setattr__(self, "C", C)

    @property
    def n(self):
        return self.C.shape[0]


def pseudogradient_matrix(game):
    """``F = [[0, 1], [-1, 0]] kron C = [[0, C], [-C, 0]]``."""
    if not isinstance(game, ZeroSumGame):
        game = ZeroSumGame(game)
    return np.kron(np.array([[0.0, 1.0], [-1.0, 0.0]]), game.C)


def game_iteration_operator(game):
    F = pseudogradient_matrix(game)
    return np.eye(F.shape[0]) - F
