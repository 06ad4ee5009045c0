import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from linmann.errors import InputError, RankDeficiencyError
from linmann.matrix_core import eigenvalues, is_positive_definite, rank, solve_linear

from conftest import THREE_NODE_L


def _multiset_close(got, want, tol=1e-9):
    got = list(got)
    for w in want:
        i = int(np.argmin([abs(g - w) for g in got]))
        assert abs(got[i] - w) <= tol, (got, want)
        got.pop(i)
    assert not got


class TestEigenvalues:
    def test_identity(self):
        _multiset_close(eigenvalues(np.eye(2)), [1, 1])

    def test_rotation(self):
        _multiset_close(eigenvalues([[0, 1], [-1, 0]]), [1j, -1j])

    def test_three_node_laplacian(self):
        # exact values from the characteristic polynomial (sympy: 0, 3/2 +- j/2)
        _multiset_close(eigenvalues(THREE_NODE_L), [0, 1.5 + 0.5j, 1.5 - 0.5j])

    def test_matches_characteristic_polynomial_roots(self, rng):
        for _ in range(20):
            A = rng.standard_normal((5, 5))
            _multiset_close(eigenvalues(A), np.roots(np.poly(A)), tol=1e-7)

    def test_rejects_nonfinite(self):
        with pytest.raises(InputError):
            eigenvalues([[np.nan, 0], [0, 1]])
        with pytest.raises(InputError):
            eigenvalues([[1, 2, 3]])


@settings(max_examples=60, deadline=None)
@given(arrays(float, (4, 4), elements=st.floats(-5, 5, allow_nan=False)))
def test_conjugate_closure_trace_det(A):
    ev = eigenvalues(A)
    scale = max(1.0, np.max(np.abs(ev)))
    for z in ev:
        if z.imag != 0:
            assert np.min(np.abs(ev - np.conj(z))) <= 1e-9 * scale
    assert abs(np.sum(ev) - np.trace(A)) <= 4 * 1e-9 * scale
    assert abs(np.prod(ev) - np.linalg.det(A)) <= 1e-8 * scale**4


class TestRank:
    def test_examples(self):
        assert rank([[1, 0], [0, 0]], 1e-10) == 1
        assert rank(np.array([[1.0, 1], [0, 1]]) - np.eye(2), 1e-10) == 1
        assert rank(THREE_NODE_L, 1e-10) == 2
        assert rank(np.zeros((3, 3)), 1e-10) == 0

    def test_zero_padding_invariant(self, rng):
        A = rng.standard_normal((3, 2)) @ rng.standard_normal((2, 3))
        padded = np.zeros((5, 5))
        padded[:3, :3] = A
        assert rank(A) == rank(padded) == 2

    def test_tol_must_be_positive(self):
        with pytest.raises(InputError):
            rank(np.eye(2), 0.0)


class TestSolve:
    def test_examples(self):
        np.testing.assert_allclose(solve_linear(np.eye(2), [1, 2]), [1, 2])
        np.testing.assert_allclose(solve_linear([[2, 0], [0, 4]], [2, 8]), [1, 2])

    def test_singular(self):
        with pytest.raises(RankDeficiencyError) as exc:
            solve_linear([[1, 1], [1, 1]], [1, 0])
        assert exc.value.rank == 1

    def test_residual_bound(self, rng):
        for _ in range(20):
            A = rng.standard_normal((6, 6))
            b = rng.standard_normal(6)
            x = solve_linear(A, b)
            bound = 1e-10 * (np.linalg.norm(A, 2) * np.linalg.norm(x) + np.linalg.norm(b))
            assert np.linalg.norm(A @ x - b) <= bound


class TestPositiveDefinite:
    @pytest.mark.parametrize("P, expected", [
        (np.eye(2), True),
        ([[1, 0], [0, 0]], False),
        ([[2, 1], [1, 2]], True),
        ([[2, 1], [0, 2]], False),
        (-np.eye(3), False),
    ])
    def test_examples(self, P, expected):
        assert is_positive_definite(P) is expected
