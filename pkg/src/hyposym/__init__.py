"""Numerical verification of hypersurface symmetry under one-directional
mean-curvature ordering: double-graph surface corpus, closed-curve corpus,
condition checkers, and first-variation machinery.

Curvature convention: the unit sphere (and circle) have curvature +1 with
respect to the outer normal; every report records this banner.
"""

__version__ = "0.1.0"

CONVENTION_BANNER = "curvature convention: sphere-positive (unit sphere H = +1)"

from .conditions import (ConditionVerdict, SprimeRadius, check_condition_S,
                         check_condition_Sprime, check_main_assumption,
                         check_pairwise_main_assumption, max_Sprime_radius)
from .curvature import CurvatureSample, curve_curvature, mean_curvature_pair
from .curves import (ClosedCurve, circle_curve, ellipse_curve,
                     folded_tube_curve)
from .errors import (ConditionError, ConfigError, HyposymError, RegionError,
                     SurfaceError, VariationError)
from .grid import (BallRadiusEstimate, ErodedRegion, GridRegion,
                   ball_condition_radius, build_region, erode, measure,
                   measure_difference)
from .report import RunConfig, RunReport, run, run_many, write_report
from .surfaces import (AreaResult, DoubleGraphSurface, NormalSample, area,
                       boundary_normal, corpus, corpus_names, expected_profile,
                       make_double_graph, outer_normal)
from .variation import (Claim1Result, Claim2Row, CutoffField, F_field,
                        MollifierKernel, SymmetryResult,
                        VariationDecomposition, VerticalField, build_cutoff,
                        build_shear, claim1_bound, claim2_check, decompose_I,
                        deform, detect_curve_symmetry, detect_symmetry,
                        first_variation_analytic, first_variation_fd,
                        hessian_A, mollifier_kernel, random_smooth_field,
                        translation_field)

__all__ = [
    "CONVENTION_BANNER",
    # errors
    "HyposymError", "RegionError", "SurfaceError", "ConditionError",
    "VariationError", "ConfigError",
    # grid
    "GridRegion", "ErodedRegion", "BallRadiusEstimate", "build_region",
    "erode", "measure", "measure_difference", "ball_condition_radius",
    # surfaces and curves
    "DoubleGraphSurface", "NormalSample", "AreaResult", "make_double_graph",
    "outer_normal", "boundary_normal", "area", "corpus", "corpus_names",
    "expected_profile", "ClosedCurve", "circle_curve", "ellipse_curve",
    "folded_tube_curve",
    # curvature
    "CurvatureSample", "mean_curvature_pair", "curve_curvature",
    # conditions
    "ConditionVerdict", "SprimeRadius", "check_main_assumption",
    "check_condition_S", "check_condition_Sprime", "max_Sprime_radius",
    "check_pairwise_main_assumption",
    # variation
    "MollifierKernel", "CutoffField", "VerticalField", "mollifier_kernel",
    "build_cutoff", "build_shear", "translation_field", "random_smooth_field",
    "deform", "first_variation_fd", "first_variation_analytic",
    "VariationDecomposition", "decompose_I", "F_field", "hessian_A",
    "Claim1Result", "claim1_bound", "Claim2Row", "claim2_check",
    "SymmetryResult", "detect_symmetry", "detect_curve_symmetry",
    # reports
    "RunConfig", "RunReport", "run", "run_many", "write_report",
]
