"""Variance and entropic uncertainty relations, and the maps between them."""

__version__ = "0.1.0"

from .entropy import (
    collision_entropy,
    qubit_entropy_from_variance,
    qubit_variance_from_entropy,
    renyi_entropy,
)
from .explorer import map_region, minimize_over_pure, saturate_boundary, scan_violations
from .linalg import HermitianOperator, eigen_decompose, expectation
from .observables import (
    Observable,
    ProbDist,
    born_probabilities,
    covariance,
    pauli_operator,
    spin_operator,
    variance,
)
from .reconstruction import (
    build_commutative_set,
    probs_from_covariances,
    probs_from_variances,
    spin1_probs_from_moments,
)
from .relations import RELATIONS, RelationContext, RelationReport, evaluate
from .states import DensityMatrix, StateVector, pure_state, random_mixed, random_pure

__all__ = [
    "DensityMatrix",
    "HermitianOperator",
    "Observable",
    "ProbDist",
    "RELATIONS",
    "RelationContext",
    "RelationReport",
    "StateVector",
    "born_probabilities",
    "build_commutative_set",
    "collision_entropy",
    "covariance",
    "eigen_decompose",
    "evaluate",
    "expectation",
    "map_region",
    "minimize_over_pure",
    "pauli_operator",
    "probs_from_covariances",
    "probs_from_variances",
    "pure_state",
    "qubit_entropy_from_variance",
    "qubit_variance_from_entropy",
    "random_mixed",
    "random_pure",
    "renyi_entropy",
    "saturate_boundary",
    "scan_violations",
    "spin1_probs_from_moments",
    "spin_operator",
    "variance",
]
