"""Command-line front end.

Exit codes: 0 ok, 2 input parse error, 3 numeric failure, 4 parameter or model error.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .applications import (
    consensus_operator,
    game_iteration_operator,
    is_consensus,
    laplacian,
    pseudogradient_matrix,
    ZeroSumGame,
)
from .classify import classify, format_complex
from .errors import (
    CertificateError,
    InputError,
    ModelError,
    NumericError,
    ParameterError,
    ParseError,
)
from .iteration import CONV_TOL, MAX_ITER, StepSchedule, krasnoselskij, mann, picard
from .spectral import analyze_spectrum

EXIT_OK, EXIT_PARSE, EXIT_NUMERIC, EXIT_PARAM = 0, 2, 3, 4
COMMANDS = ("classify", "iterate", "consensus", "game")
CONSENSUS_TOL = 1e-6
DEFAULT_C = {"iterate": 1.0, "consensus": 2.0, "game": 1.0}


@dataclass
class RunConfig:
    command: str
    input: str
    output: str = "-"
    iteration: str = "mann"
    schedule: str = "harmonic"
    alpha: float | None = None
    c: float | None = None
    alpha_max: float = 1.0
    max_iter: int = MAX_ITER
    tol: float = CONV_TOL
    x0: str | None = None
    seed: int = 42
    format: str = "csv"
    store_x: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}")
        if self.iteration not in ("picard", "krasnoselskij", "mann"):
            raise ParameterError(f"unknown iteration {self.iteration!r}")
        if self.schedule not in ("constant", "harmonic", "sqrt-harmonic"):
            raise ParameterError(f"unknown schedule {self.schedule!r}")
        if self.format not in ("csv", "report"):
            raise ParameterError(f"unknown format {self.format!r}")
        if self.max_iter < 0:
            raise ParameterError("--max-iter must be non-negative")
        if not self.tol > 0:
            raise ParameterError("--tol must be positive")
        if self.command != "classify" and self.iteration == "mann" and self.schedule == "constant":
            raise ParameterError("Mann iteration requires a vanishing schedule (harmonic or sqrt-harmonic)")
        if self.iteration == "krasnoselskij" and self.alpha is None:
            raise ParameterError("krasnoselskij iteration requires --alpha")

    def step_schedule(self):
        c = self.c if self.c is not None else DEFAULT_C.get(self.command, 1.0)
        if self.schedule == "constant":
            if self.alpha is None:
                raise ParameterError("constant schedule requires --alpha")
            return StepSchedule.constant(self.alpha)
        if self.schedule == "harmonic":
            return StepSchedule.harmonic(c, self.alpha_max)
        return StepSchedule.sqrt_harmonic(c, self.alpha_max)


def default_x0(n, seed=42):
    """Deterministic pseudo-random unit vector."""
    v = np.random.default_rng(seed).standard_normal(n)
    return v / np.linalg.norm(v)


def _x0(config, n, fallback=None):
    if config.x0 is not None:
        x = io.parse_vector(config.x0)
        if x.shape[0] != n:
            raise ParameterError(f"--x0 has {x.shape[0]} entries, expected {n}")
        return x
    return fallback if fallback is not None else default_x0(n, config.seed)


def _spectrum_items(spec, prefix="cluster"):
    items = [("dimension", spec.dimension), ("spectral_radius", io.fmt_float(spec.spectral_radius))]
    for c in spec.clusters:
        items.append((prefix, f"value={format_complex(c.value)} algebraic={c.algebraic_multiplicity} "
                              f"geometric={c.geometric_multiplicity}"))
    return items


def _spectrum_json(spec):
    return {
        "dimension": spec.dimension,
        "spectral_radius": spec.spectral_radius,
        "cluster_tol": spec.cluster_tol,
        "min_gap": spec.min_gap if np.isfinite(spec.min_gap) else None,
        "clusters": [
            {"value": c.value, "algebraic_multiplicity": c.algebraic_multiplicity,
             "geometric_multiplicity": c.geometric_multiplicity}
            for c in spec.clusters
        ],
    }


def _run_iteration(config, A, x0, schedule):
    if config.iteration == "picard":
        return picard(A, x0, config.max_iter, conv_tol=config.tol)
    if config.iteration == "krasnoselskij":
        return krasnoselskij(A, x0, config.alpha, config.max_iter, conv_tol=config.tol)
    return mann(A, x0, schedule, config.max_iter, conv_tol=config.tol)


def _verdict_json(traj):
    v = traj.verdict
    return {
        "status": v.status.value,
        "iterations_used": v.iterations_used,
        "limit": v.limit,
        "evidence": v.evidence,
        "final_state": traj.iterates[-1],
    }


def _verdict_items(traj):
    v = traj.verdict
    items = [("verdict", v.status.value), ("iterations_used", v.iterations_used)]
    items += [(k, io.fmt_float(val) if isinstance(val, float) else val) for k, val in sorted(v.evidence.items())]
    items.append(("final_state", " ".join(io.fmt_float(x) for x in traj.iterates[-1])))
    return items


def cmd_classify(config):
    A = io.read_matrix(config.input)
    rep = classify(A)
    items = _spectrum_items(rep.spectrum)
    for cls, name in (("CON", "is_contraction"), ("NE", "is_nonexpansive"),
                      ("AVG", "is_averaged"), ("sPC", "is_spc")):
        items.append((name, str(rep.verdict(cls)).lower()))
    for key, w in (("witness_ell", rep.contraction_witness), ("witness_eta", rep.averaged_witness),
                   ("witness_kappa", rep.spc_witness)):
        items.append((key, io.fmt_float(w) if w is not None else "none"))
    if rep.lipschitz_in_P is not None:
        items.append(("lipschitz_in_P", io.fmt_float(rep.lipschitz_in_P[0])))
    for f in rep.borderline_flags:
        items.append(("flag", f.reason))
    machine = {
        "command": "classify",
        "spectrum": _spectrum_json(rep.spectrum),
        "is_contraction": rep.is_contraction,
        "is_nonexpansive": rep.is_nonexpansive,
        "is_averaged": rep.is_averaged,
        "is_spc": rep.is_spc,
        "witness_ell": rep.contraction_witness,
        "witness_eta": rep.averaged_witness,
        "witness_kappa": rep.spc_witness,
        "lipschitz_in_P": rep.lipschitz_in_P[0] if rep.lipschitz_in_P else None,
        "certificates": rep.certificates,
        "flags": [f.reason for f in rep.borderline_flags],
    }
    mats = [(f"P_{cls}", P) for cls, P in rep.certificates.items()]
    return io.render_report("linmann classify report", items, mats, machine)


def cmd_iterate(config):
    A = io.read_matrix(config.input)
    n = A.shape[0]
    x0 = _x0(config, n)
    schedule = config.step_schedule() if config.iteration == "mann" else None
    traj = _run_iteration(config, A, x0, schedule)
    label = config.iteration if schedule is None else f"mann {schedule.describe()}"
    if config.format == "csv":
        return io.render_trace(traj, include_states=config.store_x, footer=[f"iteration: {label}"])
    items = [("iteration", label), ("x0", " ".join(io.fmt_float(v) for v in x0))] + _verdict_items(traj)
    machine = {"command": "iterate", "iteration": label, "x0": x0, **_verdict_json(traj)}
    return io.render_report("linmann iterate report", items, [], machine)


def cmd_consensus(config):
    g = io.read_graph(config.input)
    L = laplacian(g)
    n = g.n_nodes
    connected = g.is_strongly_connected()
    x0 = _x0(config, n)
    schedule = config.step_schedule()
    traj = _run_iteration(config, consensus_operator(L), x0, schedule)
    final = traj.iterates[-1]
    consensus = is_consensus(final, CONSENSUS_TOL)
    notes = [f"consensus: {str(consensus).lower()}",
             "consensus_value: " + io.fmt_float(float(np.mean(final)))]
    if not connected:
        notes.append("warning: graph is not strongly connected; convergence to consensus is not guaranteed")
    if config.format == "csv":
        return io.render_trace(traj, [("disagreement_norm", traj.fix_residuals)],
                               include_states=config.store_x, footer=notes)
    items = [("nodes", n), ("strongly_connected", str(connected).lower()),
             ("schedule", schedule.describe())] + _verdict_items(traj)
    items += [tuple(s.split(": ", 1)) for s in notes]
    machine = {"command": "consensus", "laplacian": L, "strongly_connected": connected,
               "consensus": consensus, "consensus_value": float(np.mean(final)),
               "disagreement_final": traj.verdict.evidence.get("final_fix_residual"),
               **_verdict_json(traj)}
    return io.render_report("linmann consensus report", items, [("L", L)], machine)


def cmd_game(config):
    C = io.read_matrix(config.input)
    game = ZeroSumGame(C)
    F = pseudogradient_matrix(game)
    M = game_iteration_operator(game)
    x0 = np.zeros(2 * game.n)
    x0[0] = 0.5
    x0 = _x0(config, 2 * game.n, fallback=x0)
    schedule = config.step_schedule()
    traj = _run_iteration(config, M, x0, schedule)
    spec = analyze_spectrum(M)
    rep = classify(M, certify=False)
    spectrum_line = "spectrum I-F: " + ", ".join(
        f"{format_complex(c.value)} (x{c.algebraic_multiplicity})" for c in spec.clusters)
    notes = [spectrum_line, f"is_spc: {str(rep.is_spc).lower()}"]
    if config.format == "csv":
        return io.render_trace(traj, [("pseudogradient_norm", traj.fix_residuals)],
                               include_states=config.store_x, footer=notes)
    items = _spectrum_items(spec, "cluster_I_minus_F") + [("is_spc", str(rep.is_spc).lower()),
                                                          ("schedule", schedule.describe())]
    items += _verdict_items(traj)
    machine = {"command": "game", "F": F, "spectrum_I_minus_F": _spectrum_json(spec),
               "is_spc": rep.is_spc, **_verdict_json(traj)}
    return io.render_report("linmann game report", items, [("F", F)], machine)


HANDLERS = {"classify": cmd_classify, "iterate": cmd_iterate,
            "consensus": cmd_consensus, "game": cmd_game}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="linmann", description="Classify linear operators and run fixed-point iterations.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--input", required=True, help="matrix file (classify/iterate/game) or edge-list graph file (consensus)")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--iteration", default="mann", choices=("picard", "krasnoselskij", "mann"))
    p.add_argument("--alpha", type=float, help="constant step size")
    p.add_argument("--schedule", default="harmonic", choices=("constant", "harmonic", "sqrt-harmonic"))
    p.add_argument("--c", type=float, help="schedule coefficient (default 2 for consensus, else 1)")
    p.add_argument("--alpha-max", type=float, default=1.0, help="upper clamp on Mann steps")
    p.add_argument("--max-iter", type=int, default=MAX_ITER)
    p.add_argument("--tol", type=float, default=CONV_TOL, help="convergence tolerance on ||(I-A)x||")
    p.add_argument("--x0", help="initial state, comma separated (default: seeded random unit vector)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", default="csv", choices=("csv", "report"))
    p.add_argument("--store-x", action="store_true", help="include x(k) columns in CSV traces")
    return p


def run(config):
    """Execute `config`; return the rendered output text."""
    return HANDLERS[config.command](config)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command, input=args.input, output=args.output, iteration=args.iteration,
            schedule=args.schedule, alpha=args.alpha, c=args.c, alpha_max=args.alpha_max,
            max_iter=args.max_iter, tol=args.tol, x0=args.x0, seed=args.seed,
            format=args.format, store_x=args.store_x,
        )
        text = run(config)
    except (ParseError, InputError) as exc:
        print(f"linmann: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"linmann: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ModelError, ParameterError) as exc:
        print(f"linmann: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (NumericError, CertificateError) as exc:
        print(f"linmann: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if config.output == "-":
        sys.stdout.write(text)
    else:
        with open(config.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
