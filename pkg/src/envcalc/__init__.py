"""Desk-scale computational convex analysis.

Exact piecewise-linear functions on the line, float grids in one and two
dimensions, the classical transform toolbox (conjugate, closed convex hull,
inf-convolution), subdifferential-style operator graphs with Fitzpatrick
functions, a family of envelope constructions built from supporting affine
data, and an executable suite of identity/inequality checks over seeded
instance batteries.
"""

from .extreal import (
    ExtReal,
    MixedScalarError,
    NEG_INF,
    POS_INF,
    as_extreal,
    ext_add,
    ext_inf,
    ext_sub,
    ext_sup,
    format_scalar,
    parse_scalar,
)
from .funcrep import (
    GridFunction,
    Interval1D,
    MaxAffine,
    PLConvex1D,
    SampledSet,
    dump_instance,
    effective_domain,
    epigraph_samples,
    evaluate,
    is_convex_on_grid,
    level_set,
    load_instance,
    lsc_defect,
)
from .transforms import (
    ImproperError,
    biconjugate,
    cl_conv,
    conjugate_brute,
    conjugate_exact,
    conjugate_llt,
    indicator,
    inf_conv,
    support_function,
)
from .operators import (
    MaximalityVerdict,
    OperatorGraph,
    eps_subdiff_interval,
    eps_subdiff_test,
    fitzpatrick,
    is_maximal_relative,
    is_monotone,
    ni_check,
    normal_cone,
    subdiff_exact,
    subdiff_graph,
    subdiff_test,
)
from .envelopes import (
    BrondstedResult,
    EnvelopeResult,
    brondsted_search,
    circ_exact,
    cup_exact,
    envelope_result,
    n_cup,
    portable_hull,
    sharp_exact,
    smile,
    smile_eps,
    star_cup_exact,
    upper_envelope,
)
from .theoremlab import (
    InstanceGenerator,
    SuiteReport,
    gallery,
    run_check,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "ExtReal",
    "MixedScalarError",
    "NEG_INF",
    "POS_INF",
    "as_extreal",
    "ext_add",
    "ext_inf",
    "ext_sub",
    "ext_sup",
    "format_scalar",
    "parse_scalar",
    "GridFunction",
    "Interval1D",
    "MaxAffine",
    "PLConvex1D",
    "SampledSet",
    "dump_instance",
    "effective_domain",
    "epigraph_samples",
    "evaluate",
    "is_convex_on_grid",
    "level_set",
    "load_instance",
    "lsc_defect",
    "ImproperError",
    "biconjugate",
    "cl_conv",
    "conjugate_brute",
    "conjugate_exact",
    "conjugate_llt",
    "indicator",
    "inf_conv",
    "support_function",
    "MaximalityVerdict",
    "OperatorGraph",
    "eps_subdiff_interval",
    "eps_subdiff_test",
    "fitzpatrick",
    "is_maximal_relative",
    "is_monotone",
    "ni_check",
    "normal_cone",
    "subdiff_exact",
    "subdiff_graph",
    "subdiff_test",
    "BrondstedResult",
    "EnvelopeResult",
    "brondsted_search",
    "circ_exact",
    "cup_exact",
    "envelope_result",
    "n_cup",
    "portable_hull",
    "sharp_exact",
    "smile",
    "smile_eps",
    "star_cup_exact",
    "upper_envelope",
    "InstanceGenerator",
    "SuiteReport",
    "gallery",
    "run_check",
    "run_suite",
    "__version__",
]
