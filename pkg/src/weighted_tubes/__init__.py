"""Nonuniform tubular thickness of curves in R^n.

A weight mu > 0 along a curve scales the balls of the tube O(K, mu R); the
generalized normal exponential map sends a normal vector (foot, height) to
the point whose squared weighted distance is critical at the foot. This
package computes the map, its fiber geometry and singular set, pointwise
and global focal radii, the double-critical self distance, and the three
injectivity radii (differentiable, topological, almost), together with
batch drivers for weight-family sweeps, fiber traces and tube boundaries,
and a scene-file CLI that exports CSV/JSON/SVG.
"""

from .config import DEFAULT_TOLERANCES, Tolerances
from .curves import (
    ArclengthCurve,
    ChebyshevCurve,
    CircleArcCurve,
    EllipseCurve,
    FourierCurve,
    FrenetData,
    SegmentCurve,
    build_arclength_curve,
    collapse_ode_residual,
    evaluate_frame,
    make_stadium,
    third_derivative,
)
from .errors import (
    NonpositiveWeightError,
    NonRegularCurveError,
    NonUniqueFootError,
    NotCriticalFootError,
    NumericError,
    OutOfDomainError,
    OutOfWError,
    QuadratureFailureError,
    SceneError,
    WeightedTubesError,
)
from .expmap import (
    CP_MINUS,
    CP_PLUS,
    CP_ZERO,
    NOT_CRITICAL,
    PLANE,
    SPHERE,
    ClosestPoint,
    FiberShape,
    NormalOffset,
    classify_critical,
    exp_mu,
    exp_mu_batch,
    f_prime,
    f_second,
    f_second_at_offset,
    f_second_critical,
    f_value,
    fiber_geometry,
    g_potential,
    grad_g_check,
    make_offset,
    mu_closest_point,
    normal_frame,
    w_bound,
)
from .radii import (
    DoubleCriticalPair,
    PointwiseFocal,
    RadiiReport,
    dcsd_half,
    delta_lambda,
    find_double_critical_pairs,
    focal_radii,
    lemma3_roots,
    radii_report,
)
from .scene import BUNDLED_SCENES, Scene, load_scene, parse_scene
from .singular import (
    CollapseArc,
    SingularGraphPoint,
    detect_collapse_arcs,
    is_singular,
    jacobian_determinant,
    singular_set,
    tir,
    transversality_check,
)
from .sweeps import SweepRow, family_weights, fiber_trace, radii_sweep, tube_boundary
from .weights import (
    ChebyshevWeight,
    ConstantWeight,
    CosineWeight,
    FourierWeight,
    OffsetWeight,
    PolynomialWeight,
    SymmetricPiecewiseWeight,
    WeightFunction,
    build_weight,
    weight_eval,
)

__version__ = "0.1.0"
