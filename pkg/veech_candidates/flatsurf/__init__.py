from .decomposition import (  # noqa: F401
    DEFAULT_STEP_BUDGET,
    CylinderDecomposition,
    CylinderInfo,
    Direction,
    IntersectionMatrix,
    NonPeriodicDirectionError,
    cylinder_decomposition,
    intersection_matrix,
    moduli_commensurability,
)
from .identities import (  # noqa: F401
    MeasuredGeometry,
    NonPositiveSolutionError,
    SingularSystemError,
    SolvedGeometry,
    enumerate_twists,
    measure_geometry,
    regularity_check,
    solve_geometry,
    verify_period_identities,
)
from .params import (  # noqa: F401
    PARAMS_SCHEMA,
    DegenerateParameterError,
    PrototypeParams,
    decagon_params,
    load_params,
    reduce_modulo,
    save_params,
)
from .surface import (  # noqa: F401
    Cylinder,
    Gluing,
    InvalidGluingError,
    Surface,
    SurfaceReport,
    build_prototype,
    involution_data,
    validate_surface,
)
