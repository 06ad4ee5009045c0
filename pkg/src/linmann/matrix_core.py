"""Dense real matrix kernels: validation, eigenvalues, rank, solves, definiteness."""

import numpy as np
import scipy.linalg as sla

from .errors import InputError, NumericError, RankDeficiencyError

TOL_EIG = 1e-9
TOL_SYM = 1e-12
TOL_PD = 1e-10
TOL_SOLVE = 1e-10


def as_matrix(A):
    """Validate `A` as a finite square real matrix and return it as a float array."""
    try:
        M = np.array(A, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix entries must be real numbers: {exc}") from None
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InputError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix contains NaN or Inf entries")
    return M


def as_vector(x, n=None):
    v = np.array(x, dtype=float).reshape(-1)
    if n is not None and v.shape[0] != n:
        raise InputError(f"expected a vector of length {n}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise InputError("vector contains NaN or Inf entries")
    return v


def _block_eigenvalues(T):
    """Eigenvalues of a real quasi-upper-triangular Schur factor."""
    n = T.shape[0]
    out = []
    i = 0
    while i < n:
        if i + 1 < n and T[i + 1, i] != 0.0:
            a, b = T[i, i], T[i, i + 1]
            c, d = T[i + 1, i], T[i + 1, i + 1]
            mid = 0.5 * (a + d)
            disc = 0.25 * (a - d) ** 2 + b * c
            if disc < 0.0:
                w = np.sqrt(-disc)
                out.extend([complex(mid, w), complex(mid, -w)])
            else:
                # LAPACK standardizes real pairs into 1x1 blocks; guard anyway
                w = np.sqrt(disc)
                out.extend([complex(mid + w, 0.0), complex(mid - w, 0.0)])
            i += 2
        else:
            out.append(complex(T[i, i], 0.0))
            i += 1
    return out


def eigenvalues(A):
    """Eigenvalues of `A` (with repetition) via the real Schur form.

    Complex eigenvalues are read off the 2x2 diagonal blocks, so they are
    returned as exact conjugate pairs.
    """
    M = as_matrix(A)
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            T = sla.schur(M, output="real")[0]
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"real Schur iteration failed: {exc}") from None
    with np.errstate(over="ignore", invalid="ignore"):
        ev = np.array(_block_eigenvalues(T), dtype=complex)
    if not np.all(np.isfinite(ev)):
        raise NumericError("eigenvalue computation overflowed; rescale the matrix")
    return ev


def spectral_radius(A):
    return float(np.max(np.abs(eigenvalues(A))))


def rank(A, tol=TOL_SOLVE):
    """Numerical rank: singular values above ``tol`` times the largest one."""
    if tol <= 0:
        raise InputError("rank tolerance must be positive")
    M = np.array(A, dtype=float)
    if M.ndim != 2 or not np.all(np.isfinite(M)):
        raise InputError("rank expects a finite 2-D array")
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def solve_linear(A, b, tol=TOL_SOLVE):
    M = as_matrix(A)
    rhs = as_vector(b, M.shape[0])
    n = M.shape[0]
    r = rank(M, tol=n * np.finfo(float).eps)
    if r < n:
        raise RankDeficiencyError(f"singular system (numerical rank {r} < {n})", rank=r)
    x = np.linalg.solve(M, rhs)
    resid = np.linalg.norm(M @ x - rhs)
    bound = tol * (np.linalg.norm(M, 2) * np.linalg.norm(x) + np.linalg.norm(rhs))
    if resid > bound:
        raise RankDeficiencyError(
            f"solve residual {resid:.3e} exceeds bound {bound:.3e}; system is numerically singular",
            rank=rank(M, tol=tol),
        )
    return x


def is_symmetric(P, tol=TOL_SYM):
    M = as_matrix(P)
    scale = np.max(np.abs(M))
    return bool(np.max(np.abs(M - M.T)) <= tol * scale)


def is_positive_definite(P, tol_sym=TOL_SYM, tol_pd=TOL_PD):
    """True iff `P` is symmetric (relative `tol_sym`) with smallest eigenvalue above `tol_pd`."""
    M = as_matrix(P)
    if not is_symmetric(M, tol_sym):
        return False
    return bool(np.linalg.eigvalsh(0.5 * (M + M.T))[0] > tol_pd)
