"""Rational Bernstein-Bezier curves in the plane.

A boundary segment is a rational curve of degree ``m`` given by control
points ``(x_j, y_j)`` and control weights ``w_j``:

    x(s) = sum_j w_j x_j B_j(s) / sum_j w_j B_j(s),   0 <= s <= 1,

and likewise for ``y(s)``, with the Bernstein basis
``B_j(s) = C(m, j) s^j (1 - s)^(m - j)``.  Evaluation and differentiation
run through de Casteljau recurrences on the weighted numerators and the
denominator separately, which is stable to machine precision; the division
happens once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, PoleOnIntervalError

# |denominator| below this is treated as a pole sitting on the interval.
DENOMINATOR_TOL = 1e-14

# Bernstein<->monomial conversion amplifies roundoff by roughly 10^(m/2);
# past degree 30 double precision has nothing left.
CONVERSION_DEGREE_LIMIT = 30


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def inflated(self, pad: float) -> "BoundingBox":
        return BoundingBox(self.x_min - pad, self.x_max + pad,
                           self.y_min - pad, self.y_max + pad)

    def contains(self, x: float, y: float) -> bool:
        return (self.x_min <= x <= self.x_max) and (self.y_min <= y <= self.y_max)

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)


@dataclass(frozen=True)
class RationalBezierCurve:
    """One rational Bezier boundary segment.

    ``control_points`` has ``degree + 1`` entries of ``(x, y)`` pairs and
    ``control_weights`` matches it entry for entry.  Weights must be finite
    and nonzero; positivity is a region-level concern checked at parse time.
    """

    degree: int
    control_points: tuple
    control_weights: tuple

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.control_points)
        wts = tuple(float(w) for w in self.control_weights)
        object.__setattr__(self, "control_points", pts)
        object.__setattr__(self, "control_weights", wts)
        if self.degree < 1:
            raise ValueError(f"curve degree must be >= 1, got {self.degree}")
        if len(pts) != self.degree + 1 or len(wts) != self.degree + 1:
            raise ValueError(
                f"degree-{self.degree} curve needs {self.degree + 1} control points "
                f"and weights, got {len(pts)} points / {len(wts)} weights")
        if not all(math.isfinite(x) and math.isfinite(y) for x, y in pts):
            raise ValueError("control points must be finite")
        if not all(math.isfinite(w) and w != 0.0 for w in wts):
            raise ValueError("control weights must be finite and nonzero")

    @property
    def start(self) -> Point2:
        return Point2(*self.control_points[0])

    @property
    def end(self) -> Point2:
        return Point2(*self.control_points[-1])

    def reversed(self) -> "RationalBezierCurve":
        """The same point set traversed with the parameter direction flipped."""
        return RationalBezierCurve(self.degree, self.control_points[::-1],
                                   self.control_weights[::-1])


@dataclass(frozen=True)
class PolynomialBernstein:
    """Polynomial on [0, 1] stored by its Bernstein coefficients b_0..b_m."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(float(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValueError("empty coefficient list")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, s):
        return de_casteljau(self.coefficients, s)


@dataclass(frozen=True)
class PolynomialMonomial:
    """Polynomial stored by monomial coefficients a_0..a_m, ascending degree."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(float(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValueError("empty coefficient list")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def trimmed(self, rel_tol: float = 1e-14) -> "PolynomialMonomial":
        """Drop trailing coefficients below ``rel_tol`` times the largest one."""
        scale = max(abs(c) for c in self.coefficients)
        if scale == 0.0:
            return PolynomialMonomial((0.0,))
        coeffs = list(self.coefficients)
        while len(coeffs) > 1 and abs(coeffs[-1]) <= rel_tol * scale:
            coeffs.pop()
        return PolynomialMonomial(tuple(coeffs))

    def __call__(self, s):
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * s + c
        return acc


def bernstein_basis(m: int, j: int, s: float) -> float:
    """Value of the j-th degree-m Bernstein polynomial C(m,j) s^j (1-s)^(m-j)."""
    if not 0 <= j <= m:
        raise ValueError(f"basis index {j} out of range for degree {m}")
    # guard 0**0 at the endpoints
    sj = 1.0 if j == 0 else s ** j
    tj = 1.0 if j == m else (1.0 - s) ** (m - j)
    return math.comb(m, j) * sj * tj


def de_casteljau(coefficients, s):
    """Evaluate a polynomial in Bernstein form at ``s`` (scalar or ndarray)."""
    s = np.asarray(s, dtype=float)
    levels = [np.full(s.shape, float(c)) for c in coefficients]
    n = len(levels) - 1
    one_minus = 1.0 - s
    for j in range(n):
        levels = [one_minus * levels[i] + s * levels[i + 1] for i in range(n - j)]
    return levels[0]


def _hodograph(coefficients):
    """Bernstein coefficients of the derivative: m * forward differences."""
    m = len(coefficients) - 1
    return [m * (coefficients[i + 1] - coefficients[i]) for i in range(m)]


def _check_parameter(s):
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("curve parameter must lie in [0, 1]")
    return arr


def curve_points(curve: RationalBezierCurve, s):
    """Vectorized curve evaluation; returns (x, y) arrays matching ``s``."""
    s = _check_parameter(s)
    wx = [w * p[0] for p, w in zip(curve.control_points, curve.control_weights)]
    wy = [w * p[1] for p, w in zip(curve.control_points, curve.control_weights)]
    den = de_casteljau(curve.control_weights, s)
    if np.any(np.abs(den) < DENOMINATOR_TOL):
        raise PoleOnIntervalError(
            "curve denominator vanishes on [0, 1]; the parameterization has a pole")
    return de_casteljau(wx, s) / den, de_casteljau(wy, s) / den


def curve_derivatives(curve: RationalBezierCurve, s):
    """Vectorized parametric derivatives (dx/ds, dy/ds) by the quotient rule."""
    s = _check_parameter(s)
    wx = [w * p[0] for p, w in zip(curve.control_points, curve.control_weights)]
    wy = [w * p[1] for p, w in zip(curve.control_points, curve.control_weights)]
    wts = list(curve.control_weights)
    den = de_casteljau(wts, s)
    if np.any(np.abs(den) < DENOMINATOR_TOL):
        raise PoleOnIntervalError(
            "curve denominator vanishes on [0, 1]; the parameterization has a pole")
    num_x = de_casteljau(wx, s)
    num_y = de_casteljau(wy, s)
    dnum_x = de_casteljau(_hodograph(wx), s)
    dnum_y = de_casteljau(_hodograph(wy), s)
    dden = de_casteljau(_hodograph(wts), s)
    den2 = den * den
    return (dnum_x * den - num_x * dden) / den2, (dnum_y * den - num_y * dden) / den2


def eval_curve(curve: RationalBezierCurve, s: float) -> Point2:
    """Point on the curve at parameter ``s`` in [0, 1]."""
    x, y = curve_points(curve, float(s))
    return Point2(float(x), float(y))


def eval_derivative(curve: RationalBezierCurve, s: float):
    """Parametric derivative (dx/ds, dy/ds) at ``s`` in [0, 1]."""
    dx, dy = curve_derivatives(curve, float(s))
    return float(dx), float(dy)


def weight_polynomial(curve: RationalBezierCurve) -> PolynomialBernstein:
    """The curve's denominator: Bernstein coefficients are the control weights."""
    return PolynomialBernstein(curve.control_weights)


def bernstein_to_monomial(p: PolynomialBernstein) -> PolynomialMonomial:
    """Exact expansion of a Bernstein-form polynomial into monomial coefficients.

    The coefficient of s^i is sum_{j<=i} (-1)^(i-j) C(m,i) C(i,j) b_j.  The
    map is exact in rational arithmetic but amplifies floating-point noise by
    about 10^(m/2), so degrees beyond CONVERSION_DEGREE_LIMIT are refused.
    """
    m = p.degree
    if m > CONVERSION_DEGREE_LIMIT:
        raise ConditioningError(
            f"basis conversion at degree {m} would lose ~{m // 2} digits; "
            f"limit is {CONVERSION_DEGREE_LIMIT}")
    b = p.coefficients
    out = []
    for i in range(m + 1):
        cmi = math.comb(m, i)
        acc = 0.0
        for j in range(i + 1):
            term = cmi * math.comb(i, j) * b[j]
            acc += term if (i - j) % 2 == 0 else -term
        out.append(acc)
    return PolynomialMonomial(tuple(out))


def monomial_to_bernstein(p: PolynomialMonomial) -> PolynomialBernstein:
    """Inverse of :func:`bernstein_to_monomial`: b_j = sum_{i<=j} C(j,i)/C(m,i) a_i."""
    m = p.degree
    if m > CONVERSION_DEGREE_LIMIT:
        raise ConditioningError(
            f"basis conversion at degree {m} would lose ~{m // 2} digits; "
            f"limit is {CONVERSION_DEGREE_LIMIT}")
    a = p.coefficients
    out = []
    for j in range(m + 1):
        acc = 0.0
        for i in range(j + 1):
            acc += math.comb(j, i) / math.comb(m, i) * a[i]
        out.append(acc)
    return PolynomialBernstein(tuple(out))


def _iter_curves(source):
    if isinstance(source, RationalBezierCurve):
        yield source
        return
    loops = getattr(source, "loops", None)
    if loops is not None:
        for loop in loops:
            yield from loop.curves
        return
    curves = getattr(source, "curves", None)
    if curves is not None:
        yield from curves
        return
    yield from source


def bounding_box(source) -> BoundingBox:
    """Axis-aligned bounding box of all control points.

    ``source`` may be a region, a boundary loop, a single curve, or any
    iterable of curves.  With positive control weights every curve point
    (and every quadrature point built from it) lies inside this box.
    """
    xs, ys = [], []
    for curve in _iter_curves(source):
        for x, y in curve.control_points:
            xs.append(x)
            ys.append(y)
    if not xs:
        raise ValueError("cannot take the bounding box of an empty region")
    return BoundingBox(min(xs), max(xs), min(ys), max(ys))
