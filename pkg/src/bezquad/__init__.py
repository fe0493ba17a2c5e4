"""Quadrature for planar regions bounded by rational Bezier curves.

Builds boundary-based quadrature rules in two flavors: spectral rules whose
error decays faster than any algebraic order for smooth integrands, and
polynomially exact rules that integrate polynomials up to a chosen total
degree to machine precision with an a-priori point count.  Companion tools
cover region file I/O, NURBS decomposition, geometric moments, moment-fitted
weights at prescribed points, and independent reference integrators.
"""

from .engine import (Integrand, MODE_SPECTRAL, MODE_SPECTRALPE, Rule2D,
                     RuleConfig, antiderivative_points, antiderivative_rule,
                     build_rule, choose_reference_level, integrate,
                     intermediate_rule, signed_area, spectralpe_point_count)
from .errors import (BoundaryProximityError, ConditioningError,
                     DegenerateLoopError, DegeneratePolynomialError,
                     EvaluationError, ExpressionError, FitFailureError,
                     PoleOnIntervalError, QuadratureError,
                     RegionValidationError, RuleConstructionError,
                     UnsupportedInputError)
from .expressions import parse_expression
from .geometry import (BoundingBox, Point2, PolynomialBernstein,
                       PolynomialMonomial, RationalBezierCurve,
                       bernstein_basis, bernstein_to_monomial, bounding_box,
                       eval_curve, eval_derivative, monomial_to_bernstein,
                       weight_polynomial)
from .momentfit import (GeometricSummary, MomentVector, fit_weights,
                        geometric_summary, monomial_moments)
from .oracle import (OracleConfig, quadtree_integral, reference_integral,
                     winding_number)
from .polyroots import (Pole, PoleSet, curve_poles, monomial_roots,
                        multiply_multiplicity)
from .quad1d import Rule1D, gauss_legendre, rational_rule, verify_exactness
from .region import (BoundaryLoop, NurbsCurve, Region, load_nurbs, load_region,
                     loop_orientation, nurbs_extract, parse_nurbs, parse_region,
                     serialize_region)

__version__ = "0.1.0"
