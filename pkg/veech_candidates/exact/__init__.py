from .cyclotomic import (  # noqa: F401
    CycNum,
    CyclotomicZeroDivisionError,
    NotRealError,
    cyc_arith,
    euler_phi,
    galois_conjugates,
    real_sign,
    to_fraction,
)
from .roots import RootOfUnity  # noqa: F401
from .span import (  # noqa: F401
    SpanReport,
    coordinates,
    field_trace,
    independent_subset,
    q_span_degree,
    span_report,
)
