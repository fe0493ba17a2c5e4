"""Assembly of 2D quadrature rules over curve-bounded regions.

The area integral of f over a region is rewritten as a sum of boundary line
integrals of the integrand's vertical antiderivative

    A_f(x, y) = integral of f(x, t) dt from the reference level C to y,

one per boundary curve, each taken to the curve's parameter space.  Two 1D
rules then discretize the problem: an intermediate rule in curve parameter
s picks sample sites along each curve, and at each site a Gauss rule on the
vertical segment from C up to the boundary point evaluates A_f numerically.
The tensor combination gives planar points and signed weights; with the
reference level chosen as the minimum control-point y, every point stays
inside the control bounding box.

Two modes differ only in the intermediate rule:

* ``spectral``: Gauss-Legendre with Q points per curve.  Converges faster
  than any algebraic order for smooth integrands but is not exact for
  polynomials.
* ``spectralpe``: a rational-exact rule whose prescribed poles are the
  curve's poles with multiplicities scaled by k + 3 (the antiderivative
  composition contributes k + 1, the parametric derivative 2).  Together
  with P = ceil((k+1)/2) antiderivative points this integrates every
  polynomial of total degree <= k to machine precision with an a-priori
  point count of ceil((k+1)/2) * sum_i (m_i (k+3) + 1).

Traversal orientation carries the sign: a counter-clockwise loop adds the
area it encloses, a clockwise loop subtracts it, so multi-loop regions
(holes, islands) need no special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import EvaluationError
from .geometry import bounding_box, curve_derivatives, curve_points
from .polyroots import curve_poles, multiply_multiplicity
from .quad1d import EMPTY_RULE, Rule1D, gauss_legendre, rational_rule

MODE_SPECTRAL = "spectral"
MODE_SPECTRALPE = "spectralpe"


def antiderivative_points(k: int) -> int:
    """Gauss points needed to integrate a degree-k polynomial antiderivative."""
    return math.ceil((k + 1) / 2)


@dataclass(frozen=True)
class RuleConfig:
    """Parameters of a 2D rule build.

    mode ``spectral`` uses ``Q`` intermediate points per curve and defaults
    ``P`` (antiderivative points) to ``Q``.  Mode ``spectralpe`` targets
    polynomial exactness degree ``k``, defaults ``P`` to ceil((k+1)/2), and
    accepts ``l`` extra degrees of intermediate polynomial exactness for
    refining on non-polynomial integrands.
    """

    mode: str
    k: Optional[int] = None
    Q: Optional[int] = None
    P: Optional[int] = None
    l: int = 0

    def __post_init__(self):
        if self.mode not in (MODE_SPECTRAL, MODE_SPECTRALPE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_SPECTRAL:
            if self.Q is None or self.Q < 1:
                raise ValueError("spectral mode needs Q >= 1")
        else:
            if self.k is None or self.k < 0:
                raise ValueError("spectralpe mode needs k >= 0")
            if self.l < 0:
                raise ValueError("l must be >= 0")
        if self.P is not None and self.P < 1:
            raise ValueError("P must be >= 1")

    @property
    def antiderivative_count(self) -> int:
        if self.P is not None:
            return self.P
        if self.mode == MODE_SPECTRAL:
            return self.Q
        return antiderivative_points(self.k)


@dataclass(eq=False)
class Rule2D:
    """Planar quadrature points with signed weights and per-point provenance.

    ``provenance[i]`` is (curve index, intermediate node index, antiderivative
    node index).  ``reference_level`` is the antiderivative lower limit C used
    in the build.
    """

    points: np.ndarray
    weights: np.ndarray
    provenance: np.ndarray
    reference_level: float

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        self.weights = np.asarray(self.weights, dtype=float)
        self.provenance = np.asarray(self.provenance, dtype=int).reshape(-1, 3)
        if not (len(self.points) == len(self.weights) == len(self.provenance)):
            raise ValueError("points, weights and provenance must align")

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class Integrand:
    """An evaluatable f(x, y), optionally with a declared polynomial degree."""

    evaluator: Callable
    polynomial_degree: Optional[int] = None

    def __call__(self, x, y):
        return self.evaluator(x, y)


def as_integrand(f) -> Integrand:
    return f if isinstance(f, Integrand) else Integrand(f)


def choose_reference_level(region) -> float:
    """Antiderivative lower limit: the minimum control-point y of the region.

    Keeps all vertical quadrature segments (hence all rule points) inside the
    control bounding box and the antiderivative magnitudes moderate.
    """
    return bounding_box(region).y_min


def spectralpe_point_count(degrees, k: int) -> int:
    """A-priori point count of the polynomially exact rule at degree ``k``.

    ``degrees`` are the component curve degrees m_i; the count is
    ceil((k+1)/2) * sum_i (m_i (k+3) + 1).
    """
    return antiderivative_points(k) * sum(m * (k + 3) + 1 for m in degrees)


def intermediate_rule(curve, config: RuleConfig) -> Rule1D:
    """The 1D rule in curve-parameter space for one boundary curve.

    Spectral mode delegates to Gauss-Legendre on [0, 1].  Polynomially exact
    mode prescribes the curve's poles at multiplicity k + 3 to the rational
    rule; a polynomial curve (no poles) falls back to a Gauss rule with the
    same node count, which is exact for everything the rational space would
    have required.  A rational curve whose weight polynomial has dropped
    degree is padded with extra polynomial exactness so the per-curve node
    count m (k+3) + 1 + l holds uniformly.
    """
    if config.mode == MODE_SPECTRAL:
        return gauss_legendre(config.Q, 0.0, 1.0)
    target_nodes = curve.degree * (config.k + 3) + 1 + config.l
    poles = curve_poles(curve)
    if poles.total_multiplicity == 0:
        return gauss_legendre(target_nodes, 0.0, 1.0)
    scaled = multiply_multiplicity(poles, config.k + 3)
    return rational_rule(scaled, target_nodes - scaled.total_multiplicity - 1)


def antiderivative_rule(y_top: float, C: float, P: int) -> Rule1D:
    """Gauss rule evaluating the antiderivative integral from C to y_top.

    Exact for integrands polynomial in the vertical coordinate up to degree
    2P - 1.  A reversed span (y_top below C) is handled by negating the
    weights; a zero-length span yields the empty rule.
    """
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    if y_top == C:
        return EMPTY_RULE
    if y_top > C:
        return gauss_legendre(P, C, y_top)
    rule = gauss_legendre(P, y_top, C)
    return Rule1D(rule.nodes, -rule.weights, rule.interval)


def build_rule(region, config: RuleConfig) -> Rule2D:
    """Assemble the full planar rule for a validated region.

    Each intermediate node s maps to a boundary point (x(s), y(s)); beneath
    it a column of antiderivative nodes runs from the reference level C up to
    y(s).  The point weights are the product of the two 1D weights and the
    parametric derivative dx/ds, negated so that counter-clockwise loops
    contribute positive area.
    """
    C = choose_reference_level(region)
    P = config.antiderivative_count
    xs, ys, ws, prov = [], [], [], []
    for ci, curve in enumerate(region.curves()):
        inter = intermediate_rule(curve, config)
        bx, by = curve_points(curve, inter.nodes)
        dxds, _ = curve_derivatives(curve, inter.nodes)
        for q in range(len(inter)):
            column = antiderivative_rule(float(by[q]), C, P)
            if len(column) == 0:
                continue
            scale = -inter.weights[q] * dxds[q]
            for z in range(len(column)):
                xs.append(bx[q])
                ys.append(column.nodes[z])
                ws.append(scale * column.weights[z])
                prov.append((ci, q, z))
    points = np.column_stack([xs, ys]) if xs else np.empty((0, 2))
    return Rule2D(points, np.asarray(ws), np.asarray(prov, dtype=int).reshape(-1, 3), C)


def integrate(rule: Rule2D, f) -> float:
    """Apply the rule: the weighted sum of integrand values at its points."""
    f = as_integrand(f)
    total = 0.0
    for i in range(len(rule)):
        x, y = rule.points[i]
        try:
            value = f(float(x), float(y))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise EvaluationError(
                f"integrand failed at node {i} ({x}, {y}): {exc}")
        if not math.isfinite(value):
            raise EvaluationError(
                f"integrand returned {value} at node {i} ({x}, {y})")
        total += rule.weights[i] * value
    return total


def signed_area(region) -> float:
    """Area with orientation signs: CCW loops count positive, CW negative."""
    rule = build_rule(region, RuleConfig(MODE_SPECTRALPE, k=0))
    return float(np.sum(rule.weights))
