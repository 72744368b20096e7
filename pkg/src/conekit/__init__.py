"""conekit: LP-based membership tests for tractable subcones of the
PSD-plus-nonnegative cone, and simplicial-partition copositivity testing."""

from .cones import (
    MEMBER,
    NOT_IDENTIFIED,
    MembershipVerdict,
    PsdSplit,
    SdBasis,
    build_lp,
    check_membership_lp,
    in_H,
    in_L_bomze,
    is_diagonally_dominant,
    membership_report,
    psd_split,
    sd_basis,
    split_nonneg,
)
from .copositivity import (
    COPOSITIVE,
    INCONCLUSIVE,
    NOT_COPOSITIVE,
    CopoConfig,
    CopoResult,
    bisect,
    test_copositive,
    vertex_negative,
)
from .instances import (
    Graph,
    PlantedQp,
    QpBound,
    clique_number,
    gen_planted_qp,
    gen_random_spn,
    load_dimacs,
    max_clique_matrix,
    qp_optimum,
    std_qp_matrix,
)
from .linalg import (
    EigenPair,
    as_sym_matrix,
    congruence,
    eigen_decompose,
    is_psd_cholesky,
    load_matrix,
)
from .lp import LinearProgram, LpSolution, solve

__version__ = "0.1.0"

__all__ = [
    "MEMBER",
    "NOT_IDENTIFIED",
    "MembershipVerdict",
    "PsdSplit",
    "SdBasis",
    "build_lp",
    "check_membership_lp",
    "in_H",
    "in_L_bomze",
    "is_diagonally_dominant",
    "membership_report",
    "psd_split",
    "sd_basis",
    "split_nonneg",
    "COPOSITIVE",
    "INCONCLUSIVE",
    "NOT_COPOSITIVE",
    "CopoConfig",
    "CopoResult",
    "bisect",
    "test_copositive",
    "vertex_negative",
    "Graph",
    "PlantedQp",
    "QpBound",
    "clique_number",
    "gen_planted_qp",
    "gen_random_spn",
    "load_dimacs",
    "max_clique_matrix",
    "qp_optimum",
    "std_qp_matrix",
    "EigenPair",
    "as_sym_matrix",
    "congruence",
    "eigen_decompose",
    "is_psd_cholesky",
    "load_matrix",
    "LinearProgram",
    "LpSolution",
    "solve",
]
