from .cli import VeechExitCodes, veech_candidates_cli  # noqa: F401
from .config import (  # noqa: F401
    WORKERS_ENV_VARIABLE,
    ConfigError,
    SearchConfig,
    load_search_config,
    workers_from_env,
)
from .record import (  # noqa: F401
    CandidateRecord,
    TraceField,
    VerificationReport,
    horizontal_moduli_commensurable,
    verify_candidate,
)
from .report import ReportFormat, load_records, read_csv, read_jsonl, write_report  # noqa: F401
from .schemas import CANDIDATE_RECORD_SCHEMA  # noqa: F401
from .search import (  # noqa: F401
    SearchBudgetExceeded,
    SearchResult,
    SearchStats,
    admissible_matrices,
    run_search,
    search,
    top_piece_lengths,
    twist_classes,
)
from .torsion import derive_torsion_order  # noqa: F401
