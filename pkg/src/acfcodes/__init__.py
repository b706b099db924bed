"""Almost cover-free codes and designs for nonadaptive group testing of complexes."""

from .bounds import (
    A_exponent,
    BoundResult,
    D_at_qhat,
    D_closed,
    D_exponent,
    asymptotic_rates,
    capacity_lower,
    capacity_upper,
    design_error_floor,
    exponent_lower,
    extremal_type,
    q_hat,
    solve_y,
    solve_z,
)
from .core import (
    BinaryCode,
    BitVector,
    BudgetExceeded,
    CodeError,
    DimensionError,
    ParameterError,
    worked_example_code,
    parse_code,
    read_code,
    write_code,
)
from .cover import CoverAnalysisReport, analyze, is_bad_set, is_cf_code, shrink_code
from .decoder import DecodeResult, decode, decode_exhaustive, minimal_acceptable_sets
from .design import (
    RELAXED,
    STRICT,
    Superset,
    analyze_design,
    check_implications,
    is_cf_design,
    outcome,
    parse_superset,
)
from .ensemble import EnsembleParams, mc_bad_probability, union_bound_expectation
from .optimize import DomainError

__version__ = "0.1.0"
