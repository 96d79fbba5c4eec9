"""Continuous-time quantum walks on weighted tree graphs."""
from .closed_form import (
    spider2_center_prob,
    spider2_center_prob_large_J,
    spider3_center_amplitude,
    spider3_center_prob,
    spider3_center_prob_large_J,
    star_center_prob,
)
from .dynamics import (
    EvolutionPlan,
    TraceSeries,
    default_grid,
    evolve,
    expm_trace,
    loglog_slope,
    plan,
    probability_trace,
    schrodinger_rk4,
    trace_maximum,
    transfer_scaling,
)
from .estimators import ContinuousTimeQuantumWalk, QuantumStochasticWalk
from .exceptions import ConvergenceError, InvalidSpecError, InvariantViolation
from .graphs import (
    GraphFamilySpec,
    WeightedGraph,
    adjacency,
    balanced_leaf_state,
    basis_state,
    build_cayley,
    build_cycle,
    build_spider,
    build_star,
    cayley_branch_state,
    degree_matrix,
    laplacian,
    leaf_superposition,
    phased_leaf_state,
)
from .open_system import (
    build_lindblad_set,
    cumulative_center_probability,
    evolve_density,
    lindblad_rhs,
)
from .spectral import SpectralDecomposition, eigh, spider3_coefficients

__version__ = "0.1.0"
