"""Independent reference integrators used to validate the boundary rules.

Two cross-checks of different character:

* a high-order reference: the spectral rule itself at a fixed large order,
  used as ground truth in convergence studies;
* a low-order adaptive quadtree over the bounding box with winding-number
  inside tests, sharing no machinery with the boundary-rule pipeline beyond
  curve evaluation.  It converges at roughly first order and serves as a
  slow-but-simple foil.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundaryProximityError
from .engine import MODE_SPECTRAL, RuleConfig, as_integrand, build_rule, integrate
from .geometry import Point2, bounding_box, curve_points
from .quad1d import _leggauss_cached

METHOD_REFERENCE = "reference"
METHOD_QUADTREE = "quadtree"

PROXIMITY_TOL = 1e-9
_JITTER = 1e-8
_MAX_REFINE_ROUNDS = 48

# curves are split this many times (2^n pieces) before taking control boxes,
# so that the boxes hug the boundary instead of blanketing the region
_BOX_SPLIT_LEVELS = 5


def _subdivision_boxes(curve, levels: int = _BOX_SPLIT_LEVELS):
    """Control bounding boxes of the curve split into 2^levels pieces.

    Splitting runs on homogeneous control points, so each piece's control
    polygon still encloses its stretch of the curve (positive weights); the
    union of these boxes covers the curve far more tightly than the whole
    curve's control box does.
    """
    ctrl = np.array([(x * w, y * w, w) for (x, y), w in
                     zip(curve.control_points, curve.control_weights)])
    pieces = [ctrl]
    for _ in range(levels):
        split = []
        for piece in pieces:
            left, right = [], []
            level = piece
            while len(level) > 1:
                left.append(level[0])
                right.append(level[-1])
                level = 0.5 * (level[:-1] + level[1:])
            left.append(level[0])
            right.append(level[0])
            split.append(np.asarray(left))
            split.append(np.asarray(right[::-1]))
        pieces = split
    boxes = []
    for piece in pieces:
        pts = piece[:, :2] / piece[:, 2][:, None]
        boxes.append((pts[:, 0].min(), pts[:, 1].min(),
                      pts[:, 0].max(), pts[:, 1].max()))
    return boxes


@dataclass(frozen=True)
class OracleConfig:
    method: str = METHOD_QUADTREE
    reference_order: int = 55
    max_depth: int = 8
    cell_order: int = 2

    def __post_init__(self):
        if self.method not in (METHOD_REFERENCE, METHOD_QUADTREE):
            raise ValueError(f"unknown oracle method {self.method!r}")
        if self.reference_order < 40:
            raise ValueError("reference order below 40 is not a trustworthy oracle")
        if not 0 <= self.max_depth <= 14:
            raise ValueError("max_depth must be in [0, 14]")
        if self.cell_order < 1:
            raise ValueError("cell_order must be >= 1")


def reference_integral(region, f, order: int = 55) -> float:
    """Spectral-rule value at P = Q = ``order`` per curve; the ground truth."""
    if order < 40:
        raise ValueError("reference order below 40 is not a trustworthy oracle")
    rule = build_rule(region, RuleConfig(MODE_SPECTRAL, Q=order))
    return integrate(rule, f)


class _RegionSampler:
    """Winding numbers against adaptively sampled boundary polylines.

    Each curve starts from a uniform 64-interval parameter grid.  For a
    query point, any polyline interval subtending more than pi/2 is bisected
    (evaluating the true curve at the midpoint) until the accumulated turning
    angle is trustworthy; the winding number is the total angle divided by
    2 pi, rounded.  Points within PROXIMITY_TOL of the sampled boundary are
    flagged instead of classified.
    """

    def __init__(self, region, base_samples: int = 64):
        self.samples = []
        for curve in region.curves():
            s = np.linspace(0.0, 1.0, base_samples + 1)
            x, y = curve_points(curve, s)
            self.samples.append((curve, s, x, y))

    def winding_many(self, pts) -> tuple:
        """Winding numbers for an (n, 2) array of points.

        Returns (winding, near): integer winding numbers and a mask of points
        too close to the boundary for the answer to be trusted.
        """
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        n = len(pts)
        px, py = pts[:, 0][:, None], pts[:, 1][:, None]
        total = np.zeros(n)
        near = np.zeros(n, dtype=bool)
        for curve, s, x, y in self.samples:
            rounds = 0
            while True:
                theta = np.arctan2(y[None, :] - py, x[None, :] - px)
                delta = np.diff(theta, axis=1)
                delta = (delta + np.pi) % (2.0 * np.pi) - np.pi
                bad = np.any(np.abs(delta) >= 0.5 * np.pi, axis=0)
                if not bad.any() or rounds >= _MAX_REFINE_ROUNDS:
                    break
                rounds += 1
                mids = 0.5 * (s[:-1][bad] + s[1:][bad])
                mx, my = curve_points(curve, mids)
                order = np.argsort(np.concatenate([s, mids]))
                s = np.concatenate([s, mids])[order]
                x = np.concatenate([x, mx])[order]
                y = np.concatenate([y, my])[order]
            near |= np.any(np.abs(delta) >= 0.5 * np.pi, axis=1)
            total += delta.sum(axis=1)
            near |= self._segment_proximity(x, y, px, py)
        winding = np.rint(total / (2.0 * np.pi)).astype(int)
        return winding, near

    @staticmethod
    def _segment_proximity(x, y, px, py):
        """True where a point is within PROXIMITY_TOL of the sampled polyline."""
        ex, ey = np.diff(x), np.diff(y)
        ee = ex * ex + ey * ey
        ee[ee == 0.0] = 1.0
        t = ((px - x[:-1]) * ex + (py - y[:-1]) * ey) / ee
        t = np.clip(t, 0.0, 1.0)
        dx = px - (x[:-1] + t * ex)
        dy = py - (y[:-1] + t * ey)
        return np.min(dx * dx + dy * dy, axis=1) <= PROXIMITY_TOL ** 2


def winding_number(region, p) -> int:
    """Signed boundary revolutions about ``p``: +1 inside one CCW loop.

    Raises BoundaryProximityError when ``p`` is within 1e-9 of a boundary
    curve, where the sampled answer cannot be trusted.
    """
    if isinstance(p, Point2):
        p = (p.x, p.y)
    sampler = _RegionSampler(region)
    winding, near = sampler.winding_many(np.asarray([p], dtype=float))
    if near[0]:
        raise BoundaryProximityError(
            f"point {tuple(p)} is within {PROXIMITY_TOL:.0e} of the boundary")
    return int(winding[0])


def _windings_with_jitter(sampler, pts):
    """Winding numbers with up to 3 deterministic jitters for flagged points.

    Returns (winding, unresolved) where unresolved marks points that stayed
    boundary-close through every retry.
    """
    pts = np.array(pts, dtype=float)
    winding, near = sampler.winding_many(pts)
    for attempt in range(1, 4):
        if not near.any():
            break
        shift = attempt * _JITTER
        retry = pts[near] + shift
        w2, n2 = sampler.winding_many(retry)
        winding[near] = w2
        idx = np.flatnonzero(near)
        near[idx] = n2
    return winding, near


def quadtree_integral(region, f, cfg: OracleConfig):
    """Adaptive quadtree integration over the region's bounding box.

    Cells that no boundary piece's control bounding box touches are
    classified by the winding numbers of their corners and center: all ones
    integrate with a tensor Gauss rule of ``cell_order`` points per axis,
    all zeros are skipped.  Everything else subdivides down to ``max_depth``;
    terminal cut cells apply the same Gauss rule with a per-node inside test,
    which converges at roughly first order in the cell size.  Returns the
    integral estimate and the number of cells processed.
    """
    f = as_integrand(f)
    sampler = _RegionSampler(region)
    box = bounding_box(region)
    curve_boxes = np.asarray([b for c in region.curves()
                              for b in _subdivision_boxes(c)])
    bxmin, bymin = curve_boxes[:, 0], curve_boxes[:, 1]
    bxmax, bymax = curve_boxes[:, 2], curve_boxes[:, 3]
    gx, gw = _leggauss_cached(cfg.cell_order)
    total = 0.0
    cells = 0
    stack = [(box.x_min, box.y_min, box.x_max, box.y_max, 0)]
    while stack:
        x0, y0, x1, y1, depth = stack.pop()
        cells += 1
        overlaps = bool(np.any((bxmin <= x1) & (bxmax >= x0) &
                               (bymin <= y1) & (bymax >= y0)))
        boundary = overlaps
        if not overlaps:
            xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
            probes = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (xm, ym)]
            winding, unresolved = _windings_with_jitter(sampler, probes)
            if unresolved.any():
                boundary = True
            elif np.all(winding == 1):
                nodes_x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gx
                nodes_y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * gx
                scale = 0.25 * (x1 - x0) * (y1 - y0)
                for i, wx in enumerate(gw):
                    for j, wy in enumerate(gw):
                        total += scale * wx * wy * f(float(nodes_x[i]),
                                                     float(nodes_y[j]))
                continue
            elif np.all(winding == 0):
                continue
            else:
                boundary = True
        if boundary and depth < cfg.max_depth:
            xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
            stack.extend([(x0, y0, xm, ym, depth + 1),
                          (xm, y0, x1, ym, depth + 1),
                          (x0, ym, xm, y1, depth + 1),
                          (xm, ym, x1, y1, depth + 1)])
            continue
        # terminal cut cell: Gauss rule with an inside test at every node
        nodes_x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gx
        nodes_y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * gx
        scale = 0.25 * (x1 - x0) * (y1 - y0)
        nodes = [(float(nodes_x[i]), float(nodes_y[j]))
                 for i in range(cfg.cell_order) for j in range(cfg.cell_order)]
        winding, unresolved = _windings_with_jitter(sampler, nodes)
        idx = 0
        for i, wx in enumerate(gw):
            for j, wy in enumerate(gw):
                if winding[idx] == 1 and not unresolved[idx]:
                    total += scale * wx * wy * f(*nodes[idx])
                idx += 1
    return total, cells
