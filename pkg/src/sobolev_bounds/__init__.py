"""Rigorous two-sided bounds on the sharp Sobolev imbedding constants S_{r,n,d}.

``S+`` comes from the sharp Hausdorff-Young inequality chained with Hoelder;
``S-`` from inserting rescaled Bessel-potential kernels into the imbedding
inequality. Both are sharp at r = 2, and at r = inf when n > d/2.
"""

from .bounds_lower import (
    BoundBracket,
    BracketStatus,
    LowerBoundBreakdown,
    PhiEvaluation,
    PhiRoute,
    bracket,
    i_integral,
    log_i_integral,
    lower_bound,
    phi,
    phi_minimize,
)
from .bounds_upper import (
    Admissibility,
    EmbeddingParams,
    UpperBoundBreakdown,
    classify,
    hausdorff_young_constant,
    radial_weight_integral,
    upper_bound,
    upper_bound_breakdown,
)
from .errors import (
    BracketingError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    RangeError,
    RouteError,
    SingularParameterError,
    SobolevBoundsError,
)

__all__ = [
    "Admissibility",
    "BoundBracket",
    "BracketStatus",
    "BracketingError",
    "ConsistencyError",
    "ConvergenceError",
    "DomainError",
    "EmbeddingParams",
    "LowerBoundBreakdown",
    "PhiEvaluation",
    "PhiRoute",
    "RangeError",
    "RouteError",
    "SingularParameterError",
    "SobolevBoundsError",
    "UpperBoundBreakdown",
    "bracket",
    "classify",
    "hausdorff_young_constant",
    "i_integral",
    "log_i_integral",
    "lower_bound",
    "phi",
    "phi_minimize",
    "radial_weight_integral",
    "upper_bound",
    "upper_bound_breakdown",
]
