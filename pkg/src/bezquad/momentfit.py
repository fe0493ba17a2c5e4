"""Monomial moments of a region and moment-fitted quadrature weights.

Moments are integrals of the monomials x^a y^b over the region, ordered
graded-lexicographically (1, x, y, x^2, xy, y^2, ...).  They are computed
with the polynomially exact boundary rule, so each entry is correct to
machine precision.  Given any prescribed point set (typically interior
points), weights reproducing those moments are recovered as the minimum-norm
least-squares solution of the Vandermonde system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FitFailureError, RegionValidationError
from .engine import MODE_SPECTRALPE, RuleConfig, build_rule
from .geometry import Point2

FIT_RESIDUAL_TOL = 1e-10


def monomial_exponents(k: int):
    """Graded-lexicographic exponent pairs (a, b) with a + b <= k."""
    return [(d - b, b) for d in range(k + 1) for b in range(d + 1)]


@dataclass(eq=False)
class MomentVector:
    """Monomial integrals up to total degree ``degree``, graded-lex order."""

    degree: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expect = (self.degree + 1) * (self.degree + 2) // 2
        if len(self.values) != expect:
            raise ValueError(
                f"degree-{self.degree} moment vector needs {expect} entries, "
                f"got {len(self.values)}")

    def __len__(self):
        return len(self.values)

    @property
    def exponents(self):
        return monomial_exponents(self.degree)


def _vandermonde(points, k: int) -> np.ndarray:
    pts = np.asarray([(p.x, p.y) if isinstance(p, Point2) else tuple(p)
                      for p in points], dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return np.vstack([x ** a * y ** b for a, b in monomial_exponents(k)])


def monomial_moments(region, k: int) -> MomentVector:
    """All monomial integrals x^a y^b, a + b <= k, via one exact rule."""
    rule = build_rule(region, RuleConfig(MODE_SPECTRALPE, k=k))
    x, y = rule.points[:, 0], rule.points[:, 1]
    values = [float(np.dot(rule.weights, x ** a * y ** b))
              for a, b in monomial_exponents(k)]
    return MomentVector(k, np.asarray(values))


def fit_weights(points, moments: MomentVector):
    """Weights at prescribed points reproducing the given moments.

    Solves the (typically underdetermined) Vandermonde system for the
    minimum-norm least-squares weights.  Returns (weights, residual) where
    residual is ||V w - m||; a residual above 1e-10 ||m|| means the point
    set cannot represent the moments and raises FitFailureError.
    """
    matrix = _vandermonde(points, moments.degree)
    if matrix.shape[1] < matrix.shape[0]:
        raise ValueError(
            f"need at least {matrix.shape[0]} points for degree "
            f"{moments.degree}, got {matrix.shape[1]}")
    weights, *_ = np.linalg.lstsq(matrix, moments.values, rcond=None)
    residual = float(np.linalg.norm(matrix @ weights - moments.values))
    if residual > FIT_RESIDUAL_TOL * np.linalg.norm(moments.values):
        raise FitFailureError(
            f"moment fit residual {residual:.3e} exceeds "
            f"{FIT_RESIDUAL_TOL:.0e} * ||moments||; the Vandermonde system is "
            "rank deficient for this point set", residual=residual)
    return weights, residual


@dataclass(frozen=True)
class GeometricSummary:
    area: float
    centroid: Point2
    inertia: tuple  # ((Ixx, Ixy), (Ixy, Iyy)) about the centroid


def geometric_summary(region) -> GeometricSummary:
    """Area, centroid and central second-moment tensor of the region.

    The second moments are shifted to the centroid by the parallel-axis
    rule.  A nonpositive area almost always means the outer loop runs
    clockwise; the error says so.
    """
    m = monomial_moments(region, 2).values
    area, mx, my, mxx, mxy, myy = m
    if area <= 0:
        raise RegionValidationError(
            f"region area {area:.3e} is not positive; check loop orientations "
            "(outer loops must run counter-clockwise)")
    cx, cy = mx / area, my / area
    ixx = mxx - area * cx * cx
    ixy = mxy - area * cx * cy
    iyy = myy - area * cy * cy
    return GeometricSummary(float(area), Point2(float(cx), float(cy)),
                            ((float(ixx), float(ixy)), (float(ixy), float(iyy))))
