"""Operator-theoretic classification of linear maps ``x -> A x``.

A map is contractive, nonexpansive, averaged or strictly pseudocontractive
exactly when its spectrum sits in the matching disk with semi-simple boundary
eigenvalues.  Each class also has a quadratic-norm certificate ``P``; all four
LMIs reduce to ``B^T P B <= P`` for a matrix ``B`` affine in ``A``:

=========  ==============================  ================================
class      disk                            B
=========  ==============================  ================================
CON (l)    l * D_1 (radius l, center 0)    A / l
NE         D_1                             A
AVG (eta)  D_eta                           (1 - 1/eta) I + A / eta
sPC (k)    D_{1/(1-k)}                     k I + (1 - k) A
=========  ==============================  ================================
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import CertificateConditioningError, CertificateError, NoKappaError
from .matrix_core import as_matrix, is_positive_definite
from .spectral import (
    BOUNDARY_TOL,
    CLUSTER_TOL,
    DiskRegion,
    Membership,
    Spectrum,
    analyze_spectrum,
    disk_membership,
)

TOL_PSD = 1e-9
WITNESS_MARGIN = 1e-6
MAX_CERT_COND = 1e12

CLASSES = ("CON", "NE", "AVG", "sPC")


# ---------------------------------------------------------------------------
# LMI checks


def _require_pd(P):
    P = as_matrix(P)
    if not is_positive_definite(P):
        raise CertificateError("certificate P must be symmetric positive definite")
    return P


def _psd(diff, *terms):
    """PSD test for ``diff`` with tolerance relative to the size of its terms."""
    sym = 0.5 * (diff + diff.T)
    eig = np.linalg.eigvalsh(sym)
    scale = max([np.max(np.abs(eig))] + [np.linalg.norm(t, 2) for t in terms])
    return bool(eig[0] >= -TOL_PSD * scale)


def verify_lipschitz_lmi(A, P, l):
    """Check ``A^T P A <= l^2 P``."""
    A, P = as_matrix(A), _require_pd(P)
    if l < 0:
        raise ValueError("Lipschitz constant must be non-negative")
    lhs = A.T @ P @ A
    rhs = l * l * P
    return _psd(rhs - lhs, lhs, rhs)


def verify_avg_lmi(A, P, eta):
    """Check ``A^T P A <= (2 eta - 1) P + (1 - eta)(A^T P + P A)``."""
    A, P = as_matrix(A), _require_pd(P)
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    quad = A.T @ P @ A
    cross = A.T @ P + P @ A
    rhs = (2 * eta - 1) * P + (1 - eta) * cross
    return _psd(rhs - quad, quad, (2 * eta - 1) * P, (1 - eta) * cross)


def verify_spc_lmi(A, P, kappa):
    """Check ``(1 - kappa) A^T P A <= (1 + kappa) P - kappa (A^T P + P A)``."""
    A, P = as_matrix(A), _require_pd(P)
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    quad = (1 - kappa) * (A.T @ P @ A)
    cross = kappa * (A.T @ P + P @ A)
    rhs = (1 + kappa) * P - cross
    return _psd(rhs - quad, quad, (1 + kappa) * P, cross)


def verify_certificate(A, P, cls, witness=None):
    if cls == "CON":
        return verify_lipschitz_lmi(A, P, witness)
    if cls == "NE":
        return verify_lipschitz_lmi(A, P, 1.0)
    if cls == "AVG":
        return verify_avg_lmi(A, P, witness)
    if cls == "sPC":
        return verify_spc_lmi(A, P, witness)
    raise ValueError(f"unknown operator class {cls!r}")


# ---------------------------------------------------------------------------
# spectral predicates


@dataclass(frozen=True)
class BorderlineFlag:
    value: complex
    reason: str


def format_complex(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}j"


def _spectrum(A_or_spectrum):
    if isinstance(A_or_spectrum, Spectrum):
        return A_or_spectrum
    return analyze_spectrum(A_or_spectrum)


def _is_one(value, spectrum):
    return abs(value - 1.0) <= spectrum.cluster_tol * spectrum.scale


def satisfies_disk(spectrum, disk, boundary_tol=BOUNDARY_TOL, flags=None):
    """Spectrum inside `disk` with every boundary eigenvalue semi-simple."""
    ok = True
    for c in spectrum.clusters:
        m = disk_membership(c.value, disk, boundary_tol)
        if m is Membership.EXTERIOR:
            ok = False
        elif m is Membership.BOUNDARY:
            if not c.semisimple:
                ok = False
                if flags is not None:
                    flags.append(BorderlineFlag(c.value, f"eigenvalue {format_complex(c.value)} not semi-simple"))
            elif flags is not None and not _is_one(c.value, spectrum):
                flags.append(BorderlineFlag(c.value, f"eigenvalue {format_complex(c.value)} on disk boundary"))
    return ok


def is_contractive_with(A, ell, boundary_tol=BOUNDARY_TOL):
    if not 0 < ell < 1:
        raise ValueError("ell must lie in (0, 1)")
    return satisfies_disk(_spectrum(A), DiskRegion.scaled_unit(ell), boundary_tol)


def is_nonexpansive(A, boundary_tol=BOUNDARY_TOL):
    return satisfies_disk(_spectrum(A), DiskRegion.D(1.0), boundary_tol)


def is_averaged_with(A, eta, boundary_tol=BOUNDARY_TOL):
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    return satisfies_disk(_spectrum(A), DiskRegion.averaged(eta), boundary_tol)


def is_spc_with(A, kappa, boundary_tol=BOUNDARY_TOL):
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    return satisfies_disk(_spectrum(A), DiskRegion.pseudocontractive(kappa), boundary_tol)


def min_disk_radius(lam):
    """Smallest r with ``lam`` in ``D_r``; ``inf`` when ``Re(lam) >= 1``.

    From ``|lam - 1 + r| <= r``:  ``r >= |1 - lam|^2 / (2 Re(1 - lam))``.
    """
    lam = complex(lam)
    gap = 1.0 - lam.real
    if gap <= 0:
        return float("inf")
    return abs(1.0 - lam) ** 2 / (2.0 * gap)


def min_eta(lam):
    """Infimum of the averagedness parameters admitting eigenvalue `lam`."""
    return min_disk_radius(lam)


def min_kappa(lam, tol=BOUNDARY_TOL):
    """Smallest kappa in [0, 1) with ``|(1 - kappa) lam + kappa| <= 1``.

    Eigenvalues in the closed unit disk give 0.  Raises NoKappaError when
    ``Re(lam) >= 1`` and ``lam != 1``.
    """
    lam = complex(lam)
    if abs(lam - 1.0) <= tol:
        return 0.0
    if lam.real >= 1.0:
        raise NoKappaError(f"no kappa places {format_complex(lam)} in a pseudocontractive disk (Re >= 1)")
    a, b = lam.real, lam.imag
    # ((1-k)a + k)^2 + (1-k)^2 b^2 = 1, written in s = 1 - k:
    #   s^2 |1 - lam|^2 - 2 s (1 - a) = 0  ->  s = 2 (1 - a) / |1 - lam|^2
    s = 2.0 * (1.0 - a) / ((1.0 - a) ** 2 + b * b)
    return max(0.0, 1.0 - s)


# ---------------------------------------------------------------------------
# certificates


def _nonexpansive_form(A, cls, witness):
    n = A.shape[0]
    I = np.eye(n)
    if cls == "CON":
        return A / witness
    if cls == "NE":
        return A
    if cls == "AVG":
        return (1 - 1 / witness) * I + A / witness
    if cls == "sPC":
        return witness * I + (1 - witness) * A
    raise ValueError(f"unknown operator class {cls!r}")


def _assign(values, reps):
    return np.argmin(np.abs(np.asarray(values)[:, None] - np.asarray(reps)[None, :]), axis=1)


def _block_diagonalize(B, reps):
    """Return ``(S, blocks)`` with ``B = S diag(blocks) S^-1``, one upper-triangular
    block per eigenvalue cluster.

    Complex Schur form, clusters reordered to be contiguous by repeated sorted
    Schur decompositions of the trailing block, then decoupled with Sylvester
    equations.
    """
    n = B.shape[0]
    T, S = sla.schur(B.astype(complex), output="complex")
    bounds = []
    i = 0
    while i < n:
        lab = _assign(np.diag(T)[i:], reps)
        target = lab[0]
        if np.all(lab == target):
            bounds.append((i, n))
            break
        sub, Q, sdim = sla.schur(
            T[i:, i:], output="complex",
            sort=lambda x, t=target: _assign([x], reps)[0] == t,
        )
        sdim = max(int(sdim), 1)
        T[i:, i:] = sub
        T[:i, i:] = T[:i, i:] @ Q
        S[:, i:] = S[:, i:] @ Q
        bounds.append((i, i + sdim))
        i += sdim

    for s, e in bounds:
        if e == n:
            break
        X = sla.solve_sylvester(T[s:e, s:e], -T[e:, e:], -T[s:e, e:])
        T[s:e, e:] = 0.0
        S[:, e:] = S[:, e:] + S[:, s:e] @ X
    return S, [(s, e, T[s:e, s:e].copy()) for s, e in bounds]


def _shrink_block(block, target):
    """Diagonal scaling ``diag(d^0, d^1, ...)`` pushing ``||D^-1 block D||`` below `target`."""
    m = block.shape[0]
    powers = np.arange(m)
    d = 1.0
    while True:
        D = d ** powers
        scaled = block * (D[None, :] / D[:, None])
        if np.linalg.norm(scaled, 2) <= target or d < 1e-12:
            return D
        d *= 0.5


def _unit_disk_certificate(B, cluster_tol=CLUSTER_TOL, boundary_tol=BOUNDARY_TOL):
    spec = analyze_spectrum(B, cluster_tol)
    bad = [c for c in spec.clusters
           if abs(c.value) > 1 + boundary_tol
           or (abs(c.value) >= 1 - boundary_tol and not c.semisimple)]
    if bad:
        raise CertificateError(
            "operator is not nonexpansive in any quadratic norm: "
            + ", ".join(format_complex(c.value) for c in bad)
        )
    reps = [c.value for c in spec.clusters]
    S, blocks = _block_diagonalize(B, reps)
    for s, e, block in blocks:
        lam_abs = np.max(np.abs(np.diag(block)))
        target = (1.0 + lam_abs) / 2 if lam_abs < 1 - boundary_tol else 1.0 + 1e-12
        S[:, s:e] = S[:, s:e] * _shrink_block(block, target)[None, :]
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > MAX_CERT_COND:
        raise CertificateConditioningError(
            f"block-diagonalizing similarity has condition number {cond:.3e}", cond
        )
    Sinv = np.linalg.inv(S)
    P = (Sinv.conj().T @ Sinv).real
    P = 0.5 * (P + P.T)
    return P / np.linalg.eigvalsh(P)[0]


def construct_certificate(A, cls, witness=None):
    """Build ``P > 0`` satisfying the LMI of class `cls` (CON, NE, AVG or sPC).

    `witness` is ``ell`` for CON, ``eta`` for AVG, ``kappa`` for sPC and is
    ignored for NE.  The returned matrix is normalized to smallest eigenvalue 1.
    """
    A = as_matrix(A)
    if cls == "CON" and witness == 0:
        if np.any(A != 0):
            raise CertificateError("only the zero matrix is 0-Lipschitz")
        return np.eye(A.shape[0])
    return _unit_disk_certificate(_nonexpansive_form(A, cls, witness))


def lipschitz_constant_in(A, P):
    """Operator norm of `A` in the norm ``||x||_P = sqrt(x^T P x)``."""
    A, P = as_matrix(A), _require_pd(P)
    top = sla.eigh(A.T @ P @ A, P, eigvals_only=True)[-1]
    return float(np.sqrt(max(top, 0.0)))


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    spectrum: Spectrum
    is_contraction: bool
    is_nonexpansive: bool
    is_averaged: bool
    is_spc: bool
    contraction_witness: float | None = None
    averaged_witness: float | None = None
    spc_witness: float | None = None
    certificates: dict = field(default_factory=dict)
    lipschitz_in_P: tuple | None = None
    borderline_flags: list = field(default_factory=list)

    def witness(self, cls):
        return {
            "CON": self.contraction_witness,
            "NE": 1.0,
            "AVG": self.averaged_witness,
            "sPC": self.spc_witness,
        }[cls]

    def verdict(self, cls):
        return {
            "CON": self.is_contraction,
            "NE": self.is_nonexpansive,
            "AVG": self.is_averaged,
            "sPC": self.is_spc,
        }[cls]


def _open_witness(inf_value, extremal_defective):
    """Turn an infimum in [0, 1) into an admissible open-interval witness."""
    if extremal_defective:
        # defective eigenvalues need room inside the disk for a usable certificate
        return 0.5 * (inf_value + 1.0)
    w = inf_value + WITNESS_MARGIN
    if w >= 1.0:
        w = 0.5 * (inf_value + 1.0)
    return w


def _relaxation_witness(spectrum, per_eigenvalue, flags, label):
    """Shared AVG/sPC logic: infimum over eigenvalues != 1 of a per-eigenvalue bound."""
    worst, worst_cluster = 0.0, None
    for c in spectrum.clusters:
        if _is_one(c.value, spectrum):
            if not c.semisimple:
                flags.append(BorderlineFlag(c.value, f"eigenvalue {format_complex(c.value)} not semi-simple"))
                return None
            continue
        v = per_eigenvalue(c.value)
        if v > worst:
            worst, worst_cluster = v, c
    if worst >= 1.0 - BOUNDARY_TOL:
        if not np.isfinite(worst):
            flags.append(BorderlineFlag(
                worst_cluster.value,
                f"eigenvalue {format_complex(worst_cluster.value)} has real part >= 1 and is not 1",
            ))
        else:
            flags.append(BorderlineFlag(
                worst_cluster.value,
                f"{label} infimum {worst:.12g} not below 1 for eigenvalue {format_complex(worst_cluster.value)}",
            ))
        return None
    defective = worst_cluster is not None and not worst_cluster.semisimple
    return _open_witness(worst, defective)


def _kappa_bound(lam):
    try:
        return min_kappa(lam)
    except NoKappaError:
        return float("inf")


def classify(A, cluster_tol=CLUSTER_TOL, boundary_tol=BOUNDARY_TOL, certify=True):
    """Decide CON / NE / AVG / sPC for ``x -> A x`` and attach witnesses and certificates."""
    A = as_matrix(A)
    spec = analyze_spectrum(A, cluster_tol)
    flags = []
    rho = spec.spectral_radius

    ne = satisfies_disk(spec, DiskRegion.D(1.0), boundary_tol, flags)

    con, ell = False, None
    if rho < 1.0 - boundary_tol:
        con = True
        top = [c for c in spec.clusters if abs(abs(c.value) - rho) <= boundary_tol]
        if all(c.semisimple for c in top):
            ell = rho
        else:
            ell = _open_witness(rho, True)

    eta = _relaxation_witness(spec, min_eta, flags, "averagedness")
    kappa = _relaxation_witness(spec, _kappa_bound, flags, "pseudocontractivity")

    report = ClassificationReport(
        spectrum=spec,
        is_contraction=con,
        is_nonexpansive=ne,
        is_averaged=eta is not None,
        is_spc=kappa is not None,
        contraction_witness=ell,
        averaged_witness=eta,
        spc_witness=kappa,
        borderline_flags=_dedupe(flags),
    )
    if certify:
        _attach_certificates(A, report)
    return report


def _dedupe(flags):
    seen, out = set(), []
    for f in flags:
        key = (round(f.value.real, 9), round(f.value.imag, 9), f.reason)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def _attach_certificates(A, report):
    for cls in CLASSES:
        if not report.verdict(cls):
            continue
        w = report.witness(cls)
        try:
            P = construct_certificate(A, cls, w)
            ok = verify_certificate(A, P, cls, w)
        except CertificateError as exc:
            report.borderline_flags.append(BorderlineFlag(complex("nan"), f"{cls} certificate failed: {exc}"))
            continue
        if ok:
            report.certificates[cls] = P
        else:
            report.borderline_flags.append(
                BorderlineFlag(complex("nan"), f"{cls} certificate did not pass its LMI")
            )
    for cls in ("CON", "NE"):
        if cls in report.certificates:
            P = report.certificates[cls]
            report.lipschitz_in_P = (lipschitz_constant_in(A, P), P)
            break
