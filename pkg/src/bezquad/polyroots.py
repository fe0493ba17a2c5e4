"""Complex roots of weight polynomials and pole bookkeeping.

The denominator of a rational curve is a polynomial in the curve parameter;
its complex zeros are the curve's poles.  Roots are found as eigenvalues of
the companion matrix after converting to the monomial basis, then clustered
into poles with integer multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePolynomialError, PoleOnIntervalError, QuadratureError
from .geometry import (PolynomialMonomial, RationalBezierCurve,
                       bernstein_to_monomial, weight_polynomial)

# Leading coefficients below this (relative) are trimmed before forming the
# companion matrix; the corresponding roots have escaped to infinity.
LEADING_COEFF_TOL = 1e-14

# Roots closer than this (relative) are merged into one pole whose
# multiplicity is the cluster size.
MERGE_TOL = 1e-7

# Poles within this distance of the segment [0, 1] invalidate rational rule
# construction.
INTERVAL_CLEARANCE = 1e-10

ROOT_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class Pole:
    location: complex
    multiplicity: int


@dataclass(frozen=True)
class PoleSet:
    poles: tuple

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(self.poles))
        for p in self.poles:
            if p.multiplicity < 1:
                raise ValueError("pole multiplicity must be >= 1")

    def __len__(self):
        return len(self.poles)

    def __iter__(self):
        return iter(self.poles)

    @property
    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.poles)


EMPTY_POLE_SET = PoleSet(())


def distance_to_unit_interval(z: complex) -> float:
    """Euclidean distance from ``z`` to the real segment [0, 1]."""
    dx = max(0.0 - z.real, z.real - 1.0, 0.0)
    return float(np.hypot(dx, z.imag))


def monomial_roots(p: PolynomialMonomial) -> list:
    """All complex roots of ``p``, multiplicity repeated.

    The polynomial is trimmed of numerically-zero leading coefficients first;
    each trimmed coefficient drops the degree by one (a root at infinity).
    Every returned root satisfies |p(root)| <= 1e-8 * max|coefficient|.
    """
    scale = max(abs(c) for c in p.coefficients)
    if scale == 0.0:
        raise DegeneratePolynomialError("zero polynomial has no well-defined roots")
    trimmed = p.trimmed(LEADING_COEFF_TOL)
    if trimmed.degree < 1:
        raise DegeneratePolynomialError(
            "polynomial is constant after trimming; no roots to find")
    coeffs = np.asarray(trimmed.coefficients[::-1], dtype=float)  # descending
    roots = [complex(r) for r in np.roots(coeffs)]
    for r in roots:
        if abs(trimmed(r)) > ROOT_RESIDUAL_TOL * scale:
            raise QuadratureError(
                f"root residual {abs(trimmed(r)):.3e} exceeds "
                f"{ROOT_RESIDUAL_TOL:.0e} * max|coeff|")
    roots.sort(key=lambda z: (z.real, z.imag))
    return roots


def _cluster(roots):
    """Greedy merge of roots within MERGE_TOL relative distance."""
    clusters = []  # [sum, count]
    for r in roots:
        placed = False
        for c in clusters:
            center = c[0] / c[1]
            if abs(r - center) <= MERGE_TOL * max(1.0, abs(center)):
                c[0] += r
                c[1] += 1
                placed = True
                break
        if not placed:
            clusters.append([r, 1])
    return [(c[0] / c[1], c[1]) for c in clusters]


def _symmetrize(clusters):
    """Snap near-real poles to the real axis and pair conjugates exactly."""
    reals, complexes = [], []
    for z, mult in clusters:
        if abs(z.imag) <= MERGE_TOL * max(1.0, abs(z)):
            reals.append((complex(z.real, 0.0), mult))
        else:
            complexes.append((z, mult))
    paired = []
    used = [False] * len(complexes)
    for i, (z, mult) in enumerate(complexes):
        if used[i]:
            continue
        used[i] = True
        mate = None
        for j in range(i + 1, len(complexes)):
            zj, mj = complexes[j]
            if not used[j] and mj == mult and \
                    abs(zj - z.conjugate()) <= MERGE_TOL * max(1.0, abs(z)):
                mate = j
                break
        if mate is None:
            paired.append((z, mult))  # unpaired: keep as computed
            continue
        used[mate] = True
        zc = complexes[mate][0]
        re = 0.5 * (z.real + zc.real)
        im = 0.5 * (abs(z.imag) + abs(zc.imag))
        paired.append((complex(re, im), mult))
        paired.append((complex(re, -im), mult))
    out = reals + paired
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def curve_poles(curve: RationalBezierCurve) -> PoleSet:
    """Poles of the curve: clustered zeros of its weight polynomial.

    Polynomial curves (constant weight function) have no poles and yield an
    empty set.  Any pole within INTERVAL_CLEARANCE of [0, 1] is an error,
    because the parameterization (and any rule built on it) is invalid there.
    """
    wpoly = bernstein_to_monomial(weight_polynomial(curve))
    if wpoly.trimmed(LEADING_COEFF_TOL).degree < 1:
        return EMPTY_POLE_SET
    roots = monomial_roots(wpoly)
    clusters = _symmetrize(_cluster(roots))
    for z, _ in clusters:
        if distance_to_unit_interval(z) <= INTERVAL_CLEARANCE:
            raise PoleOnIntervalError(
                f"weight polynomial root {z} lies within {INTERVAL_CLEARANCE:.0e} "
                "of the parameter interval [0, 1]")
    return PoleSet(tuple(Pole(z, m) for z, m in clusters))


def multiply_multiplicity(poles: PoleSet, factor: int) -> PoleSet:
    """Same pole locations with every multiplicity scaled by ``factor``."""
    if factor < 1:
        raise ValueError(f"multiplicity factor must be >= 1, got {factor}")
    return PoleSet(tuple(Pole(p.location, p.multiplicity * factor) for p in poles))
