"""pdakit: placement delivery arrays for centralized coded caching.

Construct, verify, transform, bound, exhaustively search, and simulate the
star/symbol grids that encode cache placement and XOR delivery schedules.
"""

from .bounds import (
    BoundEstimate,
    StructuralReport,
    ceil_div,
    conjectured_k_fz2,
    f_sequence,
    lower_bound_s,
    lower_bound_s_fz2,
    pjd_holds,
    pjd_max_k,
    recursive_lower_bound_s,
    split_mf_r,
    structural_checks,
    upper_bound_k,
)
from .constructions import (
    ConstructionRecipe,
    colex_rank,
    evaluate_recipe,
    f2_base,
    mn_pda,
    optimal_fz2,
    optimal_fz2_recipe,
    subsets_colex,
)
from .core import (
    STAR,
    Cell,
    ColRepeat,
    CornerViolation,
    PdaGrid,
    PdaParams,
    PdaUsageError,
    RowRepeat,
    StarCountMismatch,
    VerificationReport,
    canonical_form,
    concat,
    find_isomorphism,
    grids_equivalent,
    permute,
    replicate,
    role_permute,
    subgrid,
    symbol_dual,
    transpose,
    verify,
)
from .caching import (
    Broadcast,
    CachingInstance,
    CachingTranscript,
    decode,
    deliver,
    place,
    rate,
    simulate,
    subfile_content,
)
from .formats import PdaFormatError, parse, parse_any, parse_json, render, render_json
from .search import SearchConfig, SearchOutcome, decompose, max_k, min_s, naive_max_k

__version__ = "0.1.0"

__all__ = [
    "BoundEstimate",
    "Broadcast",
    "CachingInstance",
    "CachingTranscript",
    "Cell",
    "ColRepeat",
    "ConstructionRecipe",
    "CornerViolation",
    "PdaFormatError",
    "PdaGrid",
    "PdaParams",
    "PdaUsageError",
    "RowRepeat",
    "SearchConfig",
    "SearchOutcome",
    "STAR",
    "StarCountMismatch",
    "StructuralReport",
    "VerificationReport",
    "canonical_form",
    "ceil_div",
    "colex_rank",
    "concat",
    "conjectured_k_fz2",
    "decode",
    "decompose",
    "deliver",
    "evaluate_recipe",
    "f2_base",
    "f_sequence",
    "find_isomorphism",
    "grids_equivalent",
    "lower_bound_s",
    "lower_bound_s_fz2",
    "max_k",
    "min_s",
    "mn_pda",
    "naive_max_k",
    "optimal_fz2",
    "optimal_fz2_recipe",
    "parse",
    "parse_any",
    "parse_json",
    "permute",
    "pjd_holds",
    "pjd_max_k",
    "place",
    "rate",
    "recursive_lower_bound_s",
    "render",
    "render_json",
    "replicate",
    "role_permute",
    "simulate",
    "split_mf_r",
    "structural_checks",
    "subfile_content",
    "subsets_colex",
    "subgrid",
    "symbol_dual",
    "transpose",
    "upper_bound_k",
    "verify",
]
