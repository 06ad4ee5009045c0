import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linmann.errors import EigenvalueNotFoundError
from linmann.spectral import (
    DiskRegion,
    Membership,
    analyze_spectrum,
    disk_membership,
    is_semisimple,
)

from conftest import GAME_F, THREE_NODE_L
from families import assemble, real_block


def _cluster_map(spec):
    return sorted((round(c.value.real, 6), round(c.value.imag, 6),
                   c.algebraic_multiplicity, c.geometric_multiplicity) for c in spec.clusters)


class TestAnalyzeSpectrum:
    def test_identity(self):
        spec = analyze_spectrum(np.eye(2))
        assert _cluster_map(spec) == [(1.0, 0.0, 2, 2)]
        assert spec.spectral_radius == pytest.approx(1.0)

    def test_jordan_block(self):
        spec = analyze_spectrum([[1, 1], [0, 1]])
        assert _cluster_map(spec) == [(1.0, 0.0, 2, 1)]

    def test_game_operator(self):
        spec = analyze_spectrum(np.eye(2) - GAME_F)
        assert _cluster_map(spec) == [(1.0, -1.0, 1, 1), (1.0, 1.0, 1, 1)]

    def test_three_node_laplacian(self):
        spec = analyze_spectrum(THREE_NODE_L)
        assert _cluster_map(spec) == [(0.0, 0.0, 1, 1), (1.5, -0.5, 1, 1), (1.5, 0.5, 1, 1)]

    def test_invariants(self, rng):
        for _ in range(20):
            A = rng.standard_normal((5, 5))
            spec = analyze_spectrum(A)
            assert sum(c.algebraic_multiplicity for c in spec.clusters) == 5
            assert spec.spectral_radius == pytest.approx(max(abs(c.value) for c in spec.clusters))
            for c in spec.clusters:
                if c.value.imag != 0:
                    twin = spec.find(c.value.conjugate())
                    assert twin.algebraic_multiplicity == c.algebraic_multiplicity

    def test_complex_defective_block(self, rng):
        # real Jordan block of a complex pair: [[C, I], [0, C]]
        C = real_block("pair", 0.3, 0.7)
        J = np.block([[C, np.eye(2)], [np.zeros((2, 2)), C]])
        spec = analyze_spectrum(assemble([J], rng))
        assert _cluster_map(spec) == [(0.3, -0.7, 2, 1), (0.3, 0.7, 2, 1)]

    def test_similarity_invariance(self, rng):
        blocks = [real_block("jordan", 1.0, 2), real_block("real", 1.0), real_block("pair", -0.5, 2.0)]
        base = analyze_spectrum(assemble(blocks, rng, cond=1.0))
        for _ in range(10):
            assert _cluster_map(analyze_spectrum(assemble(blocks, rng))) == _cluster_map(base)

    def test_diagonalizable_is_semisimple(self, rng):
        for _ in range(10):
            D = np.diag([0.5, 0.5, -2.0, 3.0, 3.0])
            V = rng.standard_normal((5, 5))
            spec = analyze_spectrum(V @ D @ np.linalg.inv(V))
            assert all(c.semisimple for c in spec.clusters)

    def test_reports_cluster_gap(self):
        spec = analyze_spectrum(np.diag([1.0, 1.5, 3.0]))
        assert spec.min_gap == pytest.approx(0.5)


class TestSemisimple:
    def test_examples(self):
        assert is_semisimple(analyze_spectrum(np.eye(2)), 1) is True
        assert is_semisimple(analyze_spectrum([[1, 1], [0, 1]]), 1) is False
        assert is_semisimple(analyze_spectrum(np.diag([1, 1, 0.5])), 1) is True

    def test_lookup_error(self):
        with pytest.raises(EigenvalueNotFoundError):
            is_semisimple(analyze_spectrum(np.eye(2)), 2.0)


class TestDiskMembership:
    def test_examples(self):
        assert disk_membership(1.0, DiskRegion.D(0.3)) is Membership.BOUNDARY
        assert disk_membership(0.0, DiskRegion.D(1.0)) is Membership.INTERIOR
        # |3/2 + j/2| = sqrt(10)/2 > 1
        assert disk_membership(1.5 + 0.5j, DiskRegion.D(1.0)) is Membership.EXTERIOR

    def test_disk_geometry(self):
        d = DiskRegion.pseudocontractive(0.5)
        assert d.center == pytest.approx(-1.0) and d.radius == pytest.approx(2.0)
        assert DiskRegion.averaged(0.25) == DiskRegion(0.75, 0.25)
        assert DiskRegion.scaled_unit(0.5) == DiskRegion(0.0, 0.5)

    @settings(max_examples=200)
    @given(st.floats(1e-6, 10.0))
    def test_one_on_every_boundary(self, r):
        assert disk_membership(1.0, DiskRegion.D(r)) is Membership.BOUNDARY

    @settings(max_examples=100)
    @given(st.floats(0.0, 0.99), st.floats(0.0, 0.99))
    def test_pseudocontractive_disks_nest(self, k1, k2):
        lo, hi = sorted((k1, k2))
        small, big = DiskRegion.pseudocontractive(lo), DiskRegion.pseudocontractive(hi)
        # small inside big  <=>  |c_small - c_big| + r_small <= r_big
        assert abs(small.center - big.center) + small.radius <= big.radius + 1e-9
