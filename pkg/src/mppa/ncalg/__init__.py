from .builtins import (
    a2_loc,
    builtin,
    eval_q,
    interval_kI,
    inv_morphism,
    laurent,
    laurent_coproduct,
    laurent_free,
    laurent_pair,
    mu1,
    mu2,
    point,
    pushout_quotient,
    pushout_xy_q,
    quiver_loc,
    rescale,
    two_object_groupoid_C,
    z_to_xy,
)
from .core import (
    AlgebraError,
    AlgebraMorphism,
    CriticalPair,
    Generator,
    NCElement,
    Presentation,
    RewriteBudgetExceeded,
    Word,
    check_morphism,
    critical_pairs,
    equals,
    idem,
    nf,
)
from .expr import evaluate, format_element

__all__ = [
    "AlgebraError", "AlgebraMorphism", "CriticalPair", "Generator", "NCElement", "Presentation",
    "RewriteBudgetExceeded", "Word", "a2_loc", "builtin", "check_morphism", "critical_pairs",
    "equals", "eval_q", "evaluate", "format_element", "idem", "interval_kI", "inv_morphism",
    "laurent", "laurent_coproduct", "laurent_free", "laurent_pair", "mu1", "mu2", "nf", "point",
    "pushout_quotient", "pushout_xy_q", "quiver_loc", "rescale", "two_object_groupoid_C", "z_to_xy",
]
