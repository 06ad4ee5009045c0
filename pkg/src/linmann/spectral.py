"""Clustered spectra, semi-simplicity and disk-region geometry.

Every disk ``D_r`` used by the classifier has center ``1 - r`` and radius ``r``,
so its boundary passes through the point 1 for all ``r > 0``.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import EigenvalueNotFoundError, InputError
from .matrix_core import as_matrix, eigenvalues, rank

CLUSTER_TOL = 1e-7
BOUNDARY_TOL = 1e-8


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    algebraic_multiplicity: int
    geometric_multiplicity: int

    def __post_init__(self):
        if not 1 <= self.geometric_multiplicity <= self.algebraic_multiplicity:
            raise ValueError(
                f"invalid multiplicities alg={self.algebraic_multiplicity} "
                f"geo={self.geometric_multiplicity}"
            )

    @property
    def semisimple(self):
        return self.algebraic_multiplicity == self.geometric_multiplicity


@dataclass(frozen=True)
class Spectrum:
    clusters: tuple
    spectral_radius: float
    dimension: int
    cluster_tol: float = CLUSTER_TOL
    # smallest distance between two distinct cluster representatives (inf if < 2 clusters)
    min_gap: float = float("inf")
    raw: tuple = field(default=(), repr=False)

    @property
    def scale(self):
        return max(1.0, self.spectral_radius)

    def find(self, lam):
        """Return the cluster matching `lam`, or raise EigenvalueNotFoundError."""
        lam = complex(lam)
        best = min(self.clusters, key=lambda c: abs(c.value - lam))
        if abs(best.value - lam) > self.cluster_tol * self.scale:
            raise EigenvalueNotFoundError(f"{lam} is not an eigenvalue of this spectrum")
        return best

    def values(self):
        return np.array([c.value for c in self.clusters], dtype=complex)


def _cluster_indices(eigs, threshold):
    """Single-linkage grouping of eigenvalues closer than `threshold`."""
    n = len(eigs)
    parent = list(range(n))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= threshold:
                parent[root(i)] = root(j)
    groups = {}
    for i in range(n):
        groups.setdefault(root(i), []).append(i)
    return list(groups.values())


def geometric_multiplicity(A, lam, tol=CLUSTER_TOL):
    """``dim ker(A - lam I)``, in real arithmetic.

    For non-real ``lam = a + jb`` the kernel is measured on the real embedding
    ``[[A - aI, bI], [-bI, A - aI]]``, whose kernel has twice the complex dimension.
    """
    M = as_matrix(A)
    n = M.shape[0]
    a, b = complex(lam).real, complex(lam).imag
    shifted = M - a * np.eye(n)
    if b == 0.0:
        return n - rank(shifted, tol)
    I = np.eye(n)
    emb = np.block([[shifted, b * I], [-b * I, shifted]])
    return (2 * n - rank(emb, tol)) // 2


def analyze_spectrum(A, cluster_tol=CLUSTER_TOL):
    """Cluster the eigenvalues of `A` and attach algebraic/geometric multiplicities.

    Eigenvalues within ``cluster_tol * max(1, rho(A))`` of each other (single
    linkage) form one cluster; its representative is the cluster mean, which is
    far more accurate than the individual members for defective eigenvalues.
    """
    if cluster_tol <= 0:
        raise InputError("cluster_tol must be positive")
    M = as_matrix(A)
    n = M.shape[0]
    eigs = eigenvalues(M)
    rho = float(np.max(np.abs(eigs)))
    threshold = cluster_tol * max(1.0, rho)

    clusters = []
    for idx in _cluster_indices(eigs, threshold):
        members = eigs[idx]
        value = complex(np.mean(members))
        if abs(value.imag) <= threshold:
            value = complex(value.real, 0.0)
        alg = len(idx)
        geo = geometric_multiplicity(M, value, cluster_tol)
        geo = min(max(geo, 1), alg)
        clusters.append(EigenCluster(value, alg, geo))
    clusters.sort(key=lambda c: (-abs(c.value), -c.value.real, -c.value.imag))

    reps = [c.value for c in clusters]
    gaps = [abs(p - q) for i, p in enumerate(reps) for q in reps[i + 1:]]
    return Spectrum(
        clusters=tuple(clusters),
        spectral_radius=rho,
        dimension=n,
        cluster_tol=cluster_tol,
        min_gap=min(gaps) if gaps else float("inf"),
        raw=tuple(complex(e) for e in eigs),
    )


def is_semisimple(spectrum, lam):
    return spectrum.find(lam).semisimple


class Membership(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class DiskRegion:
    """Closed disk in the complex plane with a center on the real axis."""

    center: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InputError(f"disk radius must be positive, got {self.radius}")

    @classmethod
    def D(cls, r):
        """The disk of radius `r` centered at ``1 - r``."""
        return cls(1.0 - r, r)

    @classmethod
    def scaled_unit(cls, ell):
        """``ell * D_1``: the disk of radius `ell` centered at the origin."""
        return cls(0.0, ell)

    @classmethod
    def averaged(cls, eta):
        return cls.D(eta)

    @classmethod
    def pseudocontractive(cls, kappa):
        r = 1.0 / (1.0 - kappa)
        # center written as -kappa/(1-kappa) to avoid cancellation in 1 - r
        return cls(-kappa * r, r)

    def distance(self, lam):
        """Signed distance ``|lam - center| - radius`` (negative inside)."""
        return abs(complex(lam) - self.center) - self.radius


def disk_membership(lam, disk, boundary_tol=BOUNDARY_TOL):
    if boundary_tol < 0:
        raise InputError("boundary_tol must be non-negative")
    d = disk.distance(lam)
    if abs(d) <= boundary_tol:
        return Membership.BOUNDARY
    return Membership.INTERIOR if d < 0 else Membership.EXTERIOR
