"""Entropic steering witnesses for discrete bipartite and Gaussian states.

Six witness families built on entropic uncertainty relations: conditional and
mutual-information pairs, full mutually-unbiased-basis sets, a modular
sum/difference form for discrete systems, and Gaussian conditional-entropy and
variance-product forms for two-mode states. Monte Carlo surveys, threshold
bisection, and a command-line front end sit on top.
"""

__version__ = "0.1.0"

from .cvgauss import (
    GaussianState,
    entropic_sumdiff_cv,
    reid_sumdiff_cv,
    symplectic_eigenvalues,
    tmsv,
    walborn_cv,
)
from .infotheory import (
    ProbVector,
    concurrence,
    conditional_entropy,
    entanglement_of_formation,
    modular_sum_entropy,
    mutual_information,
    shannon_entropy,
    von_neumann_entropy,
)
from .measure import (
    JointDistribution,
    Povm,
    ProjectiveBasis,
    as_povm,
    is_mub_set,
    joint_distribution,
    measurement_distribution,
    mub_set,
    overlap_omega,
    pauli_bases,
    povm_omega,
    rotate_basis,
)
from .montecarlo import (
    BracketError,
    OptimizationResult,
    SurveyRecord,
    basis_sweep,
    optimize_bases,
    ppt_min_eigenvalue,
    sample_ensemble,
    separable_sample,
    soundness_audit,
    survey_fig1,
    survey_fig1_states,
    survey_fig2,
    threshold_bisect,
)
from .qmat import (
    DensityMatrix,
    PureState,
    partial_trace,
    partial_transpose,
    random_mixed_state,
    random_pure_state,
    random_unitary,
    singlet_state,
    werner_state,
)
from .witness import (
    WitnessReport,
    mub_conditional,
    mub_mi,
    pair_conditional,
    pair_symmetric_mi,
    sanchez_ruiz_bound,
    sumdiff_discrete,
    violation_gap,
)

__all__ = [
    "__version__",
    "BracketError",
    "DensityMatrix",
    "GaussianState",
    "JointDistribution",
    "OptimizationResult",
    "Povm",
    "ProbVector",
    "ProjectiveBasis",
    "PureState",
    "SurveyRecord",
    "WitnessReport",
    "as_povm",
    "basis_sweep",
    "concurrence",
    "conditional_entropy",
    "entanglement_of_formation",
    "entropic_sumdiff_cv",
    "is_mub_set",
    "joint_distribution",
    "measurement_distribution",
    "modular_sum_entropy",
    "mub_conditional",
    "mub_mi",
    "mub_set",
    "mutual_information",
    "optimize_bases",
    "overlap_omega",
    "pair_conditional",
    "pair_symmetric_mi",
    "partial_trace",
    "partial_transpose",
    "pauli_bases",
    "povm_omega",
    "ppt_min_eigenvalue",
    "random_mixed_state",
    "random_pure_state",
    "random_unitary",
    "reid_sumdiff_cv",
    "rotate_basis",
    "sample_ensemble",
    "sanchez_ruiz_bound",
    "separable_sample",
    "shannon_entropy",
    "singlet_state",
    "soundness_audit",
    "sumdiff_discrete",
    "survey_fig1",
    "survey_fig1_states",
    "survey_fig2",
    "symplectic_eigenvalues",
    "threshold_bisect",
    "tmsv",
    "violation_gap",
    "von_neumann_entropy",
    "walborn_cv",
    "werner_state",
]
