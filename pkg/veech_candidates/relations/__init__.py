from .mann import (  # noqa: F401
    MannScanReport,
    irreducible_relations,
    mann_conductor_bound,
    mann_exponent_bound,
    mann_soundness_scan,
)
from .periods import (  # noqa: F401
    CoincidentRootsError,
    PeriodTuple,
    RejectionReason,
    TupleRejected,
    canonical_tuple_key,
    check_roots,
    compute_residues,
    enumerate_period_tuples,
    equation_system_equivalence_check,
    orient_roots,
    partial_fraction_numerator,
    period_system_check,
    relative_period_candidates,
    residues_from_roots,
    winding_shifts,
)
from .vanishing import (  # noqa: F401
    NonVanishingRelationError,
    VanishingRelation,
    decompose_irreducible,
    is_irreducible,
    is_vanishing,
    normalize_rotation,
)
