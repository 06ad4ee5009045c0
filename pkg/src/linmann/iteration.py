"""Banach-Picard, Krasnoselskij and Mann iterations on ``x -> A x``.

All three share one simulation loop; they differ only in the step-size
sequence.  Verdicts are decided from the fixed-point residual
``||(I - A) x(k)||`` rather than from step lengths, since vanishing Mann steps
shrink ``||x(k+1) - x(k)||`` whether or not the iterates converge.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ParameterError
from .matrix_core import as_matrix, as_vector

CONV_TOL = 1e-8
CONV_WINDOW = 50
BLOWUP = 1e12
MAX_ITER = 100_000
# polynomial growth exponent of ||x(k)|| over the second half of the run
GROWTH_TOL = 0.02
# decay exponent of the fixed-point residual below which a run is still converging
DECAY_TOL = 0.05


# ---------------------------------------------------------------------------
# step sizes


@dataclass(frozen=True)
class StepSchedule:
    """Step-size sequence ``alpha_k`` for ``k = 0, 1, 2, ...``.

    Every emitted step is clamped to ``alpha_max`` and must be positive.
    `mann_valid` records that ``alpha_k -> 0`` and ``sum alpha_k = inf``; it is
    true by construction for the harmonic families and caller-asserted for
    custom sequences.
    """

    kind: str
    c: float
    alpha_max: float
    mann_valid: bool
    func: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.alpha_max > 0 and math.isfinite(self.alpha_max)):
            raise ParameterError(f"alpha_max must be positive and finite, got {self.alpha_max}")
        if self.kind != "custom" and not self.c > 0:
            raise ParameterError(f"schedule coefficient must be positive, got {self.c}")

    @classmethod
    def constant(cls, alpha):
        return cls("constant", float(alpha), float(alpha), False)

    @classmethod
    def harmonic(cls, c=1.0, alpha_max=1.0):
        """``alpha_k = c / (k + 1)``."""
        return cls("harmonic", float(c), float(alpha_max), True)

    @classmethod
    def sqrt_harmonic(cls, c=1.0, alpha_max=1.0):
        """``alpha_k = c / sqrt(k + 1)``."""
        return cls("sqrt_harmonic", float(c), float(alpha_max), True)

    @classmethod
    def custom(cls, func, alpha_max, mann_valid=False):
        return cls("custom", float("nan"), float(alpha_max), bool(mann_valid), func)

    def alphas(self, start, stop):
        """Steps ``alpha_start, ..., alpha_{stop-1}`` as an array."""
        k = np.arange(start, stop, dtype=float)
        if self.kind == "constant":
            raw = np.full(k.shape, self.c)
        elif self.kind == "harmonic":
            raw = self.c / (k + 1.0)
        elif self.kind == "sqrt_harmonic":
            raw = self.c / np.sqrt(k + 1.0)
        elif self.kind == "custom":
            raw = np.array([float(self.func(int(i))) for i in range(start, stop)])
        else:
            raise ParameterError(f"unknown schedule kind {self.kind!r}")
        if np.any(~(raw > 0)) or not np.all(np.isfinite(raw)):
            bad = int(start + np.flatnonzero(~(raw > 0) | ~np.isfinite(raw))[0])
            raise ParameterError(f"step size at k={bad} is not a positive finite number")
        return np.minimum(raw, self.alpha_max)

    def alpha(self, k):
        return float(self.alphas(k, k + 1)[0])

    def describe(self):
        if self.kind == "constant":
            return f"constant({self.c:g})"
        if self.kind == "custom":
            return f"custom(alpha_max={self.alpha_max:g})"
        return f"{self.kind}({self.c:g}, alpha_max={self.alpha_max:g})"


# ---------------------------------------------------------------------------
# trajectories and verdicts


class Status(str, enum.Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    OSCILLATING = "oscillating"
    UNDECIDED = "undecided"


@dataclass
class ConvergenceVerdict:
    status: Status
    iterations_used: int
    limit: np.ndarray | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.status is Status.CONVERGED


@dataclass
class Trajectory:
    """Recorded run.  ``residuals[k] = ||x(k+1) - x(k)||`` and
    ``fix_residuals[k] = ||(I - A) x(k)||`` for ``k < K``; ``state_norms`` has
    one entry per iterate ``0..K``.  With thinning only every m-th iterate is
    kept in ``iterates`` (indices in ``iterate_steps``); residual lists stay full.
    """

    iterates: np.ndarray
    iterate_steps: np.ndarray
    residuals: np.ndarray
    fix_residuals: np.ndarray
    state_norms: np.ndarray
    alphas: np.ndarray
    verdict: ConvergenceVerdict

    @property
    def final(self):
        return self.iterates[-1]


def _window_mean(values, end, width):
    lo = max(0, end - width)
    return float(np.mean(values[lo:end])) if end > lo else float(values[end])


def _judge(norms, fix_res, final_fix, conv_tol):
    """Verdict for a run that neither converged nor blew up."""
    K = len(norms) - 1
    fr = np.append(fix_res, final_fix)
    width = max(1, K // 10)
    half = max(1, K // 2)
    n_late, n_mid = _window_mean(norms, K + 1, width), _window_mean(norms, half + 1, width)
    f_late, f_mid = _window_mean(fr, K + 1, width), _window_mean(fr, half + 1, width)
    tiny = np.finfo(float).tiny
    span = math.log(max(K + 1, 2) / max(half + 1, 1)) or math.log(2)
    growth = math.log(max(n_late, tiny) / max(n_mid, tiny)) / span
    decay = math.log(max(f_late, tiny) / max(f_mid, tiny)) / span
    trailing = fr[max(0, K + 1 - width):]
    floor = float(np.min(trailing / (1.0 + norms[max(0, K + 1 - width):])))
    evidence = {
        "final_fix_residual": float(final_fix),
        "growth_exponent": growth,
        "residual_exponent": decay,
        "trailing_min_fix_residual": float(np.min(trailing)),
        "max_norm": float(np.max(norms)),
    }
    if growth > GROWTH_TOL and floor > 10 * conv_tol:
        return Status.DIVERGED, evidence
    if floor > 10 * conv_tol and decay >= -DECAY_TOL:
        return Status.OSCILLATING, evidence
    return Status.UNDECIDED, evidence


def simulate(A, x0, schedule=None, max_iter=MAX_ITER, conv_tol=CONV_TOL,
             window=CONV_WINDOW, store_every=1):
    """Run ``x(k+1) = (1 - a_k) x(k) + a_k A x(k)``; ``schedule=None`` is plain ``x(k+1) = A x(k)``."""
    A = as_matrix(A)
    n = A.shape[0]
    x = as_vector(x0, n).copy()
    if max_iter < 0:
        raise ParameterError("max_iter must be non-negative")
    if store_every < 1:
        raise ParameterError("store_every must be >= 1")
    G = A - np.eye(n)
    limit_norm = BLOWUP * (1.0 + np.linalg.norm(x))

    chunks, alpha_chunks = [], []
    run = 0
    done = 0
    status = None
    chunk = 256
    g = np.empty(n)
    with np.errstate(over="ignore", invalid="ignore"):
        while True:
            m = min(chunk, max_iter - done)
            X = np.empty((m + 1, n))
            X[0] = x
            if schedule is None:
                al = np.ones(m)
                for i in range(m):
                    x = A @ x
                    X[i + 1] = x
            else:
                al = schedule.alphas(done, done + m)
                for i in range(m):
                    np.dot(G, x, out=g)
                    g *= al[i]
                    x += g
                    X[i + 1] = x

            norms = np.linalg.norm(X, axis=1)
            fix = np.linalg.norm(X @ G.T, axis=1)
            bad = ~np.isfinite(norms) | (norms > limit_norm)
            bad[0] = False
            cut = m
            if bad.any():
                cut = int(np.flatnonzero(bad)[0])
                if not np.all(np.isfinite(X[cut])):
                    cut -= 1
                status = Status.DIVERGED
            # row 0 repeats the previous chunk's last iterate, already counted in `run`
            first = 0 if not chunks else 1
            ok = fix[first: cut + 1] <= conv_tol * (1.0 + norms[first: cut + 1])
            idx = np.arange(ok.size)
            last_false = np.maximum.accumulate(np.where(ok, -1, idx))
            streak = np.where(last_false < 0, idx + 1 + run, idx - last_false)
            hit = np.flatnonzero(streak >= window)
            if hit.size:
                cut = int(hit[0]) + first
                status = Status.CONVERGED
            if streak.size:
                run = int(streak[cut - first])

            chunks.append((X[: cut + 1], norms[: cut + 1], fix[: cut + 1]))
            alpha_chunks.append(al[:cut])
            done += cut
            x = X[cut].copy()
            if status is not None or done >= max_iter:
                break
            chunk = min(chunk * 2, 8192)

    # stitch chunks; consecutive chunks share their boundary iterate
    Xs = np.vstack([chunks[0][0]] + [c[0][1:] for c in chunks[1:]])
    norms = np.concatenate([chunks[0][1]] + [c[1][1:] for c in chunks[1:]])
    fix_all = np.concatenate([chunks[0][2]] + [c[2][1:] for c in chunks[1:]])
    alphas = np.concatenate(alpha_chunks)
    K = Xs.shape[0] - 1
    steps = np.linalg.norm(np.diff(Xs, axis=0), axis=1)
    fix_res, final_fix = fix_all[:K], float(fix_all[K])

    if status is Status.CONVERGED:
        verdict = ConvergenceVerdict(
            Status.CONVERGED, K, limit=Xs[K].copy(),
            evidence={"final_fix_residual": final_fix, "max_norm": float(np.max(norms))},
        )
    elif status is Status.DIVERGED:
        verdict = ConvergenceVerdict(
            Status.DIVERGED, K,
            evidence={"final_fix_residual": final_fix, "max_norm": float(np.max(norms)),
                      "blowup": True},
        )
    else:
        st, ev = _judge(norms, fix_res, final_fix, conv_tol)
        verdict = ConvergenceVerdict(st, K, evidence=ev)

    keep = np.arange(0, K + 1, store_every)
    if keep[-1] != K:
        keep = np.append(keep, K)
    return Trajectory(
        iterates=Xs[keep],
        iterate_steps=keep,
        residuals=steps,
        fix_residuals=fix_res,
        state_norms=norms,
        alphas=alphas,
        verdict=verdict,
    )


def picard(A, x0, max_iter=MAX_ITER, **kwargs):
    """Banach-Picard iteration ``x(k+1) = A x(k)``."""
    return simulate(A, x0, None, max_iter, **kwargs)


def krasnoselskij(A, x0, alpha, max_iter=MAX_ITER, **kwargs):
    """Constant-step relaxation ``x(k+1) = (1 - alpha) x(k) + alpha A x(k)``, ``alpha`` in (0, 1)."""
    if not 0 < alpha < 1:
        raise ParameterError(f"Krasnoselskij step must lie in (0, 1), got {alpha}")
    return simulate(A, x0, StepSchedule.constant(alpha), max_iter, **kwargs)


def mann(A, x0, schedule, max_iter=MAX_ITER, **kwargs):
    """Mann iteration with a vanishing, non-summable step sequence."""
    if not isinstance(schedule, StepSchedule):
        raise ParameterError("mann() needs a StepSchedule")
    if schedule.kind == "constant":
        raise ParameterError("Mann iteration needs a vanishing schedule; use krasnoselskij() for constant steps")
    if not schedule.mann_valid:
        raise ParameterError("custom schedule is not declared Mann-valid")
    return simulate(A, x0, schedule, max_iter, **kwargs)


# ---------------------------------------------------------------------------
# closed-form solutions of the three non-convergent Jordan blocks


def oracle_jordan_growth(c, y1_0, k, schedule=None):
    """State after `k` steps on the block ``[[1, a_k], [0, 1]]`` from ``(y1_0, c)``.

    Without a schedule every step is 1 and ``y1(k) = y1_0 + k c``; with one,
    ``y1(k) = y1_0 + c * sum_{h<k} alpha_h``.
    """
    if k < 0:
        raise ParameterError("k must be non-negative")
    if schedule is None:
        total = float(k)
    else:
        total = math.fsum(schedule.alphas(0, k)) if k else 0.0
    return np.array([y1_0 + c * total, c], dtype=float)


def oracle_scalar_product(epsilon, schedule, s0, k):
    """``s(k+1) = prod_{h=0..k} (1 + epsilon alpha_h) s0`` for the eigenvalue ``1 + epsilon``."""
    if not epsilon > 0:
        raise ParameterError("epsilon must be positive")
    if k < 0:
        raise ParameterError("k must be non-negative")
    factors = 1.0 + epsilon * schedule.alphas(0, k + 1)
    return float(np.prod(factors) * s0)


def rotation_factors(sigma, omega, schedule, k):
    """Per-step gains ``rho_h`` and angles ``theta_h`` for ``h = 0..k``."""
    eps = sigma - 1.0
    a = schedule.alphas(0, k + 1)
    rho = np.sqrt((1.0 + eps * a) ** 2 + (omega * a) ** 2)
    theta = np.arctan2(omega * a, 1.0 + eps * a)
    return rho, theta


def oracle_rotation(sigma, omega, schedule, z0, k):
    """``z(k+1) = (prod rho_h) R(sum theta_h) z0`` for the eigenvalue pair ``sigma +- j omega``."""
    if sigma < 1 or not omega > 0:
        raise ParameterError("rotation oracle needs sigma >= 1 and omega > 0")
    if k < 0:
        raise ParameterError("k must be non-negative")
    rho, theta = rotation_factors(sigma, omega, schedule, k)
    gain = float(np.prod(rho))
    ang = math.fsum(theta)
    R = np.array([[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]])
    return gain * (R @ np.asarray(z0, dtype=float))


def jordan_block():
    return np.array([[1.0, 1.0], [0.0, 1.0]])


def rotation_block(sigma, omega):
    return np.array([[sigma, -omega], [omega, sigma]], dtype=float)
