"""Sum-GDoF of the two-user MISO interference channel with delayed CSIT."""
from .achievability import (
    PowerSplit,
    case_constraints_mixed,
    case_constraints_strong,
    closed_form_lower,
    maximin_search,
    three_slot_ledger,
)
from .bounds import PointBounds, sum_gdof_bounds
from .core import (
    AlphaPair,
    GdofBounds,
    RegionCase,
    canonicalize,
    classify_region,
    converse_sum_upper,
    converse_weighted_rhs,
    f_be5,
    f_be6,
    f_be7,
    theorem1_sum_gdof,
    weighted_rate_coeff,
)
from .errors import CapacityError, DomainError

__version__ = "0.1.0"

__all__ = [
    "AlphaPair",
    "CapacityError",
    "DomainError",
    "GdofBounds",
    "PointBounds",
    "PowerSplit",
    "RegionCase",
    "canonicalize",
    "case_constraints_mixed",
    "case_constraints_strong",
    "classify_region",
    "closed_form_lower",
    "converse_sum_upper",
    "converse_weighted_rhs",
    "f_be5",
    "f_be6",
    "f_be7",
    "maximin_search",
    "sum_gdof_bounds",
    "theorem1_sum_gdof",
    "three_slot_ledger",
    "weighted_rate_coeff",
]
