"""Best proximity point solver toolkit.

Computes points x in A minimizing d(x, T(x)) for a map T : A -> B between
finite subsets of a metric space, by reducing to a fixed-point iteration of
the induced self-map on A0, with empirical contraction certification and a
brute-force oracle for verification.
"""

from .engine import (
    CONTRACTION,
    CONVERGED,
    CYCLE_DETECTED,
    MAX_ITERATIONS,
    NOT_CONTRACTION,
    BestProximityResult,
    ContractionCertificate,
    HypothesisViolation,
    InducedMap,
    IterationTrace,
    MaxIterationsExceeded,
    NonUniquePartner,
    ProximityMap,
    SolverError,
    StartNotInA0,
    banach_iterate,
    build_induced_map,
    certify_contraction,
    defining_defect,
    direct_iterate,
    verify_result,
)
from .geometry import (
    CompactnessVerdict,
    DuplicatePointError,
    PairGeometry,
    SetPair,
    check_approximative_compactness,
    default_eps_prox,
    pair_distance,
    point_to_set_distance,
    proximal_subsets,
)
from .instance import (
    Instance,
    InstanceFormatError,
    dumps_instance,
    instance_payload,
    load_instance,
    make_instance,
    parse_instance,
    save_instance,
)
from .metric import (
    EUCLIDEAN,
    EXPLICIT_MATRIX,
    Metric,
    MetricValidation,
    distance,
    euclidean_metric,
    matrix_metric,
    pairwise_distances,
    validate_metric,
)
from .oracle import BruteForceSolution, GeneratorConfig, brute_force_solve, generate_instance
from .report import InstanceAssessment, assess_instance

__version__ = "0.1.0"

__all__ = [
    "BestProximityResult",
    "BruteForceSolution",
    "CompactnessVerdict",
    "ContractionCertificate",
    "CONTRACTION",
    "CONVERGED",
    "CYCLE_DETECTED",
    "DuplicatePointError",
    "EUCLIDEAN",
    "EXPLICIT_MATRIX",
    "GeneratorConfig",
    "HypothesisViolation",
    "InducedMap",
    "Instance",
    "InstanceAssessment",
    "InstanceFormatError",
    "IterationTrace",
    "MAX_ITERATIONS",
    "MaxIterationsExceeded",
    "Metric",
    "MetricValidation",
    "NonUniquePartner",
    "NOT_CONTRACTION",
    "PairGeometry",
    "ProximityMap",
    "SetPair",
    "SolverError",
    "StartNotInA0",
    "assess_instance",
    "banach_iterate",
    "brute_force_solve",
    "build_induced_map",
    "certify_contraction",
    "check_approximative_compactness",
    "default_eps_prox",
    "defining_defect",
    "direct_iterate",
    "distance",
    "dumps_instance",
    "euclidean_metric",
    "generate_instance",
    "instance_payload",
    "load_instance",
    "make_instance",
    "matrix_metric",
    "pair_distance",
    "pairwise_distances",
    "parse_instance",
    "point_to_set_distance",
    "proximal_subsets",
    "save_instance",
    "validate_metric",
    "verify_result",
]
