"""Eigenvalue vs geometric-mean priorities of pairwise comparison matrices.

Derives priority vectors by both methods, measures inconsistency, certifies
when the two ordinal rankings must agree, and runs the Monte Carlo study of
how often that certificate applies.
"""

from .bounds import (
    StabilityCertificate,
    certificate_from_gaps,
    certificate_from_weights,
    find_k,
    full_certificate,
    max_feasible_gap,
    md_bounds,
    prop1_certify,
    prop2_certify,
    rho_lower_bound,
    tau_lower_bound,
    weight_gaps,
)
from .errors import PCError
from .inconsistency import InconsistencyReport, inconsistency_report, koczkodaj_ki, saaty_ci
from .matrix import PCMatrix, ScaleBound, disturb, from_weights, is_consistent, new_pc_matrix, random_consistent
from .montecarlo import McConfig, McResult, TrialRecord, histogram_csv, run_experiment
from .prioritize import Method, PriorityVector, evm, gmm
from .rankstats import OrdinalRanking, kendall_tau, manhattan_distance, ordinal_ranking, spearman_rho

__version__ = "0.1.0"

__all__ = [
    "InconsistencyReport",
    "McConfig",
    "McResult",
    "Method",
    "OrdinalRanking",
    "PCError",
    "PCMatrix",
    "PriorityVector",
    "ScaleBound",
    "StabilityCertificate",
    "TrialRecord",
    "certificate_from_gaps",
    "certificate_from_weights",
    "disturb",
    "evm",
    "find_k",
    "from_weights",
    "full_certificate",
    "gmm",
    "histogram_csv",
    "inconsistency_report",
    "is_consistent",
    "kendall_tau",
    "koczkodaj_ki",
    "manhattan_distance",
    "max_feasible_gap",
    "md_bounds",
    "new_pc_matrix",
    "ordinal_ranking",
    "prop1_certify",
    "prop2_certify",
    "random_consistent",
    "rho_lower_bound",
    "run_experiment",
    "saaty_ci",
    "spearman_rho",
    "tau_lower_bound",
    "weight_gaps",
]
