"""Region data model, file format, validation, and NURBS ingestion.

A region is a set of oriented boundary loops, each a chain of rational
Bezier curves whose endpoints close up cyclically.  The on-disk format is
JSON::

    { "loops": [ { "orientation": "ccw" | "cw",
                   "curves": [ { "degree": m,
                                 "points": [[x, y], ...],   # m + 1 pairs
                                 "weights": [w0, ..., wm] } ] } ] }

Numbers round-trip exactly: the serializer emits shortest repr decimals.

Clamped NURBS curves are accepted as a separate input and decomposed into
per-knot-span rational Bezier curves by repeated knot insertion.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateLoopError, RegionValidationError,
                     UnsupportedInputError)
from .geometry import (RationalBezierCurve, bounding_box, curve_derivatives,
                       curve_points)
from .quad1d import gauss_legendre

# endpoint closure tolerance: real data carries rounding, exact closure does not
CHAIN_TOL = 1e-9

CCW = "ccw"
CW = "cw"

# Gauss points per curve when computing a loop's signed area for orientation.
# The integrand x(s) y'(s) is rational; 32 points decide the sign with huge
# margin for any loop that is not already degenerate.
_ORIENTATION_GAUSS_POINTS = 32


def _chain_gap(curves):
    """Largest cyclic endpoint mismatch as (gap, curve_index), or None."""
    worst = None
    for i, curve in enumerate(curves):
        nxt = curves[(i + 1) % len(curves)]
        ex, ey = curve.control_points[-1]
        sx, sy = nxt.control_points[0]
        gap = math.hypot(ex - sx, ey - sy)
        if gap > CHAIN_TOL and (worst is None or gap > worst[0]):
            worst = (gap, i)
    return worst


@dataclass(frozen=True)
class BoundaryLoop:
    curves: tuple
    orientation: str

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "orientation", str(self.orientation).lower())
        if not self.curves:
            raise RegionValidationError("boundary loop has no curves")
        if self.orientation not in (CCW, CW):
            raise RegionValidationError(
                f"orientation must be '{CCW}' or '{CW}', got {self.orientation!r}")
        worst = _chain_gap(self.curves)
        if worst is not None:
            gap, idx = worst
            raise RegionValidationError(
                f"loop is not closed: curve {idx} ends {gap:.3e} away from the "
                f"start of curve {(idx + 1) % len(self.curves)} "
                f"(tolerance {CHAIN_TOL:.0e})")

    def reversed(self) -> "BoundaryLoop":
        """Traverse the same point set the other way round."""
        flipped = CW if self.orientation == CCW else CCW
        return BoundaryLoop(tuple(c.reversed() for c in reversed(self.curves)),
                            flipped)


@dataclass(frozen=True)
class Region:
    loops: tuple

    def __post_init__(self):
        object.__setattr__(self, "loops", tuple(self.loops))
        if not self.loops:
            raise RegionValidationError("region has no boundary loops")

    def curves(self):
        for loop in self.loops:
            yield from loop.curves

    def reversed(self) -> "Region":
        return Region(tuple(loop.reversed() for loop in self.loops))


def loop_signed_area(loop: BoundaryLoop) -> float:
    """Signed area enclosed by one loop: the boundary integral of x dy.

    Positive for counter-clockwise traversal.  Computed with a fixed-order
    Gauss rule per curve; accurate far beyond what the sign test needs.
    """
    rule = gauss_legendre(_ORIENTATION_GAUSS_POINTS, 0.0, 1.0)
    area = 0.0
    for curve in loop.curves:
        x, _ = curve_points(curve, rule.nodes)
        _, dy = curve_derivatives(curve, rule.nodes)
        area += rule.apply(x * dy)
    return area


def loop_orientation(loop: BoundaryLoop) -> str:
    """CCW or CW according to the sign of the loop's enclosed area."""
    area = loop_signed_area(loop)
    box = bounding_box(loop)
    if abs(area) <= 1e-12 * box.area:
        raise DegenerateLoopError(
            f"loop encloses area {area:.3e}, negligible against its bounding box")
    return CCW if area > 0 else CW


def _curve_from_dict(data, where: str) -> RationalBezierCurve:
    try:
        degree = int(data["degree"])
        points = [(float(x), float(y)) for x, y in data["points"]]
        weights = [float(w) for w in data["weights"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise RegionValidationError(f"{where}: malformed curve record: {exc}")
    try:
        return RationalBezierCurve(degree, tuple(points), tuple(weights))
    except ValueError as exc:
        raise RegionValidationError(f"{where}: {exc}")


def parse_region(text, *, allow_nonpositive_weights: bool = False,
                 fix_orientation: bool = False) -> Region:
    """Parse and validate a region file.

    Checks, in order: JSON schema, per-curve invariants, weight positivity
    (skippable for rules that tolerate sign changes in the denominator),
    endpoint chaining, and agreement of each loop's declared orientation with
    the sign of its computed area.  With ``fix_orientation`` the computed
    orientation silently wins; otherwise a mismatch is an error.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegionValidationError(f"region file is not valid JSON: {exc}")
    if not isinstance(doc, dict) or "loops" not in doc:
        raise RegionValidationError('region file must be an object with a "loops" key')
    loops = []
    for a, loop_doc in enumerate(doc["loops"]):
        where = f"loop {a}"
        if not isinstance(loop_doc, dict) or "curves" not in loop_doc:
            raise RegionValidationError(f'{where}: expected an object with "curves"')
        declared = str(loop_doc.get("orientation", "")).lower()
        if declared not in (CCW, CW):
            raise RegionValidationError(
                f'{where}: orientation must be "{CCW}" or "{CW}", got {declared!r}')
        curves = [_curve_from_dict(c, f"{where}, curve {i}")
                  for i, c in enumerate(loop_doc["curves"])]
        if not allow_nonpositive_weights:
            for i, curve in enumerate(curves):
                if any(w <= 0 for w in curve.control_weights):
                    raise RegionValidationError(
                        f"{where}, curve {i}: nonpositive control weight; "
                        "polynomially-exact rules need one-signed denominators "
                        "(pass allow_nonpositive_weights to override)")
        try:
            loop = BoundaryLoop(tuple(curves), declared)
        except RegionValidationError as exc:
            raise RegionValidationError(f"{where}: {exc}")
        computed = loop_orientation(loop)
        if computed != declared:
            if not fix_orientation:
                raise RegionValidationError(
                    f"{where}: declared orientation {declared!r} contradicts the "
                    f"computed winding ({computed}); rerun with fix_orientation "
                    "to accept the computed value")
            loop = BoundaryLoop(loop.curves, computed)
        loops.append(loop)
    return Region(tuple(loops))


def serialize_region(region: Region) -> str:
    """Emit the JSON schema accepted by :func:`parse_region`, round-trip exact."""
    doc = {"loops": [
        {"orientation": loop.orientation,
         "curves": [
             {"degree": c.degree,
              "points": [[x, y] for x, y in c.control_points],
              "weights": list(c.control_weights)}
             for c in loop.curves]}
        for loop in region.loops]}
    return json.dumps(doc, indent=2) + "\n"


def load_region(path, **flags) -> Region:
    with open(path, "rb") as handle:
        return parse_region(handle.read(), **flags)


@dataclass(frozen=True)
class NurbsCurve:
    """A planar rational B-spline with an open (clamped) knot vector."""

    degree: int
    knots: tuple
    control_points: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "knots", tuple(float(t) for t in self.knots))
        object.__setattr__(self, "control_points",
                           tuple((float(x), float(y)) for x, y in self.control_points))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.degree < 1:
            raise UnsupportedInputError("NURBS degree must be >= 1")
        n_ctrl = len(self.control_points)
        if len(self.weights) != n_ctrl:
            raise UnsupportedInputError("weights must match control points")
        if len(self.knots) != n_ctrl + self.degree + 1:
            raise UnsupportedInputError(
                f"knot count {len(self.knots)} != control points {n_ctrl} "
                f"+ degree {self.degree} + 1")
        if any(a > b for a, b in zip(self.knots, self.knots[1:])):
            raise UnsupportedInputError("knot vector must be nondecreasing")


def _require_clamped(n: NurbsCurve):
    p = n.degree
    head, tail = n.knots[:p + 1], n.knots[-(p + 1):]
    if len(set(head)) != 1 or len(set(tail)) != 1:
        raise UnsupportedInputError(
            "knot vector is not clamped: end knots need multiplicity degree + 1")


def _insert_knot(degree, knots, ctrl, u):
    """One Boehm insertion of knot ``u``; ctrl is homogeneous (n, 3)."""
    # rightmost span with knots[k] <= u < knots[k+1]
    k = max(i for i in range(len(knots) - 1) if knots[i] <= u < knots[i + 1])
    new_ctrl = np.empty((ctrl.shape[0] + 1, 3))
    new_ctrl[:k - degree + 1] = ctrl[:k - degree + 1]
    for i in range(k - degree + 1, k + 1):
        alpha = (u - knots[i]) / (knots[i + degree] - knots[i])
        new_ctrl[i] = alpha * ctrl[i] + (1.0 - alpha) * ctrl[i - 1]
    new_ctrl[k + 1:] = ctrl[k:]
    return knots[:k + 1] + (u,) + knots[k + 1:], new_ctrl


def nurbs_extract(n: NurbsCurve) -> list:
    """Decompose a clamped NURBS into one rational Bezier curve per knot span.

    Interior knots are inserted until each reaches multiplicity equal to the
    degree; the refined homogeneous control points then split span by span.
    The pieces reproduce the input pointwise and chain end to end.
    """
    _require_clamped(n)
    p = n.degree
    knots = n.knots
    ctrl = np.array([(x * w, y * w, w)
                     for (x, y), w in zip(n.control_points, n.weights)])
    t0, t1 = knots[0], knots[-1]
    interior = sorted(set(t for t in knots if t0 < t < t1))
    for u in interior:
        mult = knots.count(u)
        for _ in range(p - mult):
            knots, ctrl = _insert_knot(p, knots, ctrl, u)
    curves = []
    for k in range(len(knots) - 1):
        if not (t0 <= knots[k] < knots[k + 1] <= t1):
            continue
        seg = ctrl[k - p: k + 1]
        wts = seg[:, 2]
        pts = seg[:, :2] / wts[:, None]
        curves.append(RationalBezierCurve(p, tuple(map(tuple, pts)), tuple(wts)))
    return curves


def parse_nurbs(text) -> NurbsCurve:
    """Parse the NURBS JSON input: {"degree", "knots", "points", "weights"}."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UnsupportedInputError(f"NURBS file is not valid JSON: {exc}")
    try:
        return NurbsCurve(int(doc["degree"]), tuple(doc["knots"]),
                          tuple((x, y) for x, y in doc["points"]),
                          tuple(doc["weights"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UnsupportedInputError(f"malformed NURBS record: {exc}")


def load_nurbs(path) -> NurbsCurve:
    with open(path, "rb") as handle:
        return parse_nurbs(handle.read())
