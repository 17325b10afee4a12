"""Cone-ordered vector spaces, Gerstewitz scalarization and induced metrics."""

__version__ = "0.1.0"

from .cones import (  # noqa: E402
    TAU_MEM,
    Cone,
    ConeValidationReport,
    DimensionError,
    Halfspace,
    Orthant,
    Product,
    SecondOrder,
    archimedean_witness,
    as_vector,
    cone_from_spec,
    random_interior,
    validate,
)
from .scalarization import BracketError, NotInteriorError, Scalarizer  # noqa: E402
from .report import CheckReport, Counterexample  # noqa: E402
from .cone_metric import (  # noqa: E402
    ConeMetricSpace,
    InducedMetric,
    check_ball_equality,
    check_ball_nesting,
    check_ball_refinement,
    check_cone_metric_axioms,
    check_metric_axioms,
    check_separation,
    sequence_diagnostics,
)
from .fixed_point import ConvergenceError, FixedPointResult, estimate_contraction_factor, solve_contraction  # noqa: E402
from .cone_norm import ConeNormedSpace, check_cone_norm_axioms, check_norm_axioms, induced_norm  # noqa: E402
