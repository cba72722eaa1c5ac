"""weyllab: a numerical laboratory for quadratic exponential sums.

Capabilities: fast torus-grid evaluation of sum_n a_n e(nx + n^2 t),
superlevel-set strip statistics and local L^2 / L^4 box estimates,
rational-incidence counting, circle-method kernel decomposition into
arc pieces, tube-weighted mass ratios, and sharp example constructions.
"""

from .counterexamples import (
    ConvexCurveTable,
    LatticePolygon,
    counterexample_ratio,
    counterexample_report,
    curve_extension_sum,
    growth_exponent,
    jarnik_curve,
    weyl_example_set,
    weyl_weight_scaled,
)
from .expsum import (
    CoefficientVector,
    TorusField,
    TorusGrid,
    eval_direct,
    eval_grid,
    eval_rows,
    locally_constant_defect,
    locally_constant_defects,
    ones_coefficients,
    preset_coefficients,
    random_gaussian_coefficients,
    random_phase_coefficients,
)
from .incidence import (
    IncidenceRecord,
    PointFamily,
    count_incidences,
    count_incidences_bruteforce,
    incidence_bound_ratio,
    random_family,
    sharpness_configuration,
)
from .kernel import (
    ArcBump,
    KernelDecomposition,
    arc_mask_values,
    arc_scales,
    bilinear_form,
    bilinear_forms,
    decompose,
    dyadic_pigeonhole,
    kernel_eval,
    sup_norm_report,
)
from .levelsets import (
    BoxSelection,
    StripStatistics,
    adversarial_selection,
    l4_on_selection,
    local_l2_on_selection,
    strip_attainment,
    strip_level_count,
)
from .rationals import (
    FareyLayer,
    ReducedFraction,
    dirichlet_approx,
    farey_layer,
    major_arc_membership,
    mobius,
    ramanujan_sum,
    totient,
)
from .weights import (
    Tube,
    Weight,
    decompose_weight_by_level,
    greedy_adversarial_weight,
    is_one_dimensional,
    mu_regime_report,
    random_one_dimensional_weight,
    tube_sup,
    uniform_weight,
    weighted_ratio,
    weighted_ratio_report,
)

__all__ = [
    "ArcBump",
    "BoxSelection",
    "CoefficientVector",
    "ConvexCurveTable",
    "FareyLayer",
    "IncidenceRecord",
    "KernelDecomposition",
    "LatticePolygon",
    "PointFamily",
    "ReducedFraction",
    "StripStatistics",
    "TorusField",
    "TorusGrid",
    "Tube",
    "Weight",
    "adversarial_selection",
    "arc_mask_values",
    "arc_scales",
    "bilinear_form",
    "bilinear_forms",
    "count_incidences",
    "count_incidences_bruteforce",
    "counterexample_ratio",
    "counterexample_report",
    "curve_extension_sum",
    "decompose",
    "decompose_weight_by_level",
    "dirichlet_approx",
    "dyadic_pigeonhole",
    "eval_direct",
    "eval_grid",
    "eval_rows",
    "farey_layer",
    "greedy_adversarial_weight",
    "growth_exponent",
    "incidence_bound_ratio",
    "is_one_dimensional",
    "jarnik_curve",
    "kernel_eval",
    "l4_on_selection",
    "local_l2_on_selection",
    "locally_constant_defect",
    "locally_constant_defects",
    "major_arc_membership",
    "mobius",
    "mu_regime_report",
    "ones_coefficients",
    "preset_coefficients",
    "ramanujan_sum",
    "random_family",
    "random_gaussian_coefficients",
    "random_one_dimensional_weight",
    "random_phase_coefficients",
    "sharpness_configuration",
    "strip_attainment",
    "strip_level_count",
    "sup_norm_report",
    "totient",
    "tube_sup",
    "uniform_weight",
    "weighted_ratio",
    "weighted_ratio_report",
    "weyl_example_set",
    "weyl_weight_scaled",
]

__version__ = "0.1.0"
