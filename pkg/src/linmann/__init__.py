"""Operator-theoretic analysis of linear fixed-point iterations.

Classifies ``x -> A x`` as contractive, nonexpansive, averaged or strictly
pseudocontractive from its spectrum, builds quadratic-norm certificates, and
runs Banach-Picard, Krasnoselskij and Mann iterations with convergence verdicts.
"""

from .applications import (
    DirectedWeightedGraph,
    ZeroSumGame,
    consensus_operator,
    game_iteration_operator,
    is_consensus,
    laplacian,
    three_node_digraph,
    pseudogradient_matrix,
)
from .classify import (
    ClassificationReport,
    classify,
    construct_certificate,
    is_averaged_with,
    is_nonexpansive,
    is_spc_with,
    min_kappa,
    verify_avg_lmi,
    verify_lipschitz_lmi,
    verify_spc_lmi,
)
from .iteration import (
    StepSchedule,
    Status,
    Trajectory,
    krasnoselskij,
    mann,
    oracle_jordan_growth,
    oracle_rotation,
    oracle_scalar_product,
    picard,
)
from .matrix_core import eigenvalues, is_positive_definite, rank, solve_linear
from .spectral import DiskRegion, Membership, Spectrum, analyze_spectrum, disk_membership, is_semisimple

__version__ = "0.1.0"
