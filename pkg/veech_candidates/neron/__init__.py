from .dual_graph import (  # noqa: F401
    DualGraph,
    DualGraphError,
    divides_torsion,
    enumerate_moduli,
    normalize_moduli,
    torsion_order_formula,
)
from .presentation import (  # noqa: F401
    AbelianGroupPresentation,
    InfiniteGroupError,
    build_presentation,
    class_order,
    component_group,
    component_group_order,
    section_class_order,
    simplify_presentation,
)
