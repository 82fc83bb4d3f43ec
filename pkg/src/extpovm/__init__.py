"""Optimal quantum measurement search by random sampling of extremal POVMs.

The library maximizes convex information functionals (Fisher information
at a point, Bayesian Van Trees information under a prior) over quantum
measurements.  Random POVMs are drawn by running the projective dilation
backwards with a random unitary, decomposed into extremal POVMs through
repeated linear-program vertex extraction, and the cost is evaluated on
every extremal member; convexity guarantees the optimum lies among the
extremals.
"""

__version__ = "0.1.0"

from ._kernels import backend_name
from .errors import DecompositionError, NumericalError, PreconditionError
from .extremal import (
    ConstraintSystem,
    ExtremalDecomposition,
    build_constraints,
    decompose,
    extract_step,
    solve_vertex,
)
from .linalg import gell_mann_basis, hermitian_eig, sample_haar_unitary
from .metrology import (
    AnsatzFamily,
    CostFunction,
    CostResult,
    ansatz_scan,
    coherent_ansatz,
    fisher_information,
    qubit_ansatz,
    van_trees_information,
)
from .models import (
    CoherentPhaseModel,
    CoherentThermalModel,
    GammaPrior,
    QubitPhaseModel,
    TrimmedGaussianPrior,
    UniformPrior,
    analytic_qubit_fisher,
    analytic_zqp,
    coherent_state,
    coherent_thermal_state,
    phase_derivative,
    prior_fisher,
    qubit_state,
)
from .optimizer import (
    BenchmarkResult,
    SearchConfig,
    SearchResult,
    benchmark,
    resm_search,
    rsm_search,
    run_search,
)
from .povm import (
    Povm,
    Rank1Povm,
    load_povm,
    outcome_distribution,
    projective_povm,
    random_povm,
    save_povm,
    to_rank1,
    validate,
)

__all__ = [
    "AnsatzFamily",
    "BenchmarkResult",
    "CoherentPhaseModel",
    "CoherentThermalModel",
    "ConstraintSystem",
    "CostFunction",
    "CostResult",
    "DecompositionError",
    "ExtremalDecomposition",
    "GammaPrior",
    "NumericalError",
    "Povm",
    "PreconditionError",
    "QubitPhaseModel",
    "Rank1Povm",
    "SearchConfig",
    "SearchResult",
    "TrimmedGaussianPrior",
    "UniformPrior",
    "analytic_qubit_fisher",
    "analytic_zqp",
    "ansatz_scan",
    "backend_name",
    "benchmark",
    "build_constraints",
    "coherent_ansatz",
    "coherent_state",
    "coherent_thermal_state",
    "decompose",
    "extract_step",
    "fisher_information",
    "gell_mann_basis",
    "hermitian_eig",
    "load_povm",
    "outcome_distribution",
    "phase_derivative",
    "prior_fisher",
    "projective_povm",
    "qubit_ansatz",
    "qubit_state",
    "random_povm",
    "resm_search",
    "rsm_search",
    "run_search",
    "sample_haar_unitary",
    "save_povm",
    "solve_vertex",
    "to_rank1",
    "validate",
    "van_trees_information",
]
