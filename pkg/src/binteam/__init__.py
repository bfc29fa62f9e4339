"""Binary two-agent static team decision problems.

Exact local, no-signalling and centralised optima, two-qubit strategies with a
see-saw optimiser, the 256-class symmetry classification and a sampled audit
of which classes admit a quantum advantage.
"""
from ._jit import USING_NUMBA
from .polytopes import (
    DETERMINISTIC_LABELS,
    NS_LABELS,
    DeterministicVertexLabel,
    NoSignallingVertexLabel,
    chsh_value,
    deterministic_vertex,
    is_no_signalling,
    local_membership,
    local_optimum,
    ns_optimum,
    ns_vertex,
    vertex_costs,
)
from .quantum import (
    HALF_CAC_WITNESS_COST,
    QuantumStrategy,
    SeesawResult,
    half_cac_instance,
    half_cac_strategy,
    half_cac_witness,
    load_strategy,
    occupation_measure,
    quantum_cost,
    random_strategy,
    save_strategy,
    seesaw_optimize,
    validate_strategy,
)
from .superstructure import (
    FAMILY_GENERATORS,
    ClassificationRecord,
    GroupAction,
    apply_action,
    classify,
    classify_all,
    classify_cell,
    enumerate_classes,
    orbit,
    theorem_predicate,
    transport_instance,
    transport_policy,
    transport_strategy,
)
from .team_core import (
    CAC_FORM,
    HALF_CAC_FORM,
    BinaryCostPair,
    ConditionalPolicy,
    JointPrior,
    ProblemInstance,
    centralized_optimum,
    expected_cost,
    load_instance,
    make_instance,
    save_instance,
)
from .verification import (
    AuditReport,
    BooleanDecomposition,
    CheckResult,
    audit_theorem,
    check_c13_cost_consequence,
    check_c13_decomposition,
    check_overlap_elimination,
    check_vertex_bound,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
