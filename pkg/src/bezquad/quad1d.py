"""One-dimensional quadrature rule generators.

Two families are provided: classical Gauss-Legendre rules on an arbitrary
interval, and rules on [0, 1] that are exact simultaneously for low-degree
polynomials and for rational functions with prescribed complex poles (given
with multiplicities) lying off the interval.

The rational-exact rules are built by moment matching: with total pole
multiplicity M and polynomial degree l, the exactness space has dimension
M + l + 1, so interpolatory weights at M + l + 1 Chebyshev nodes solve a
square linear system against analytically-known moments.  Conjugate pole
pairs contribute the real and imaginary parts of (s - p)^-r for one member
of the pair; real poles contribute (s - p)^-r itself.  Construction is
rejected unless every exactness residual verifies below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import PoleOnIntervalError, RuleConstructionError
from .polyroots import INTERVAL_CLEARANCE, PoleSet, distance_to_unit_interval

EXACTNESS_TOL = 1e-11


@dataclass(eq=False)
class Rule1D:
    """Nodes and weights on an interval (a, b).

    Nodes are strictly increasing and strictly inside the interval.  Weights
    normally sum to b - a; rules produced for a reversed antiderivative span
    carry globally negated weights instead.  An empty rule (no nodes) stands
    for a zero-length interval.
    """

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights must have matching lengths")

    def __len__(self):
        return len(self.nodes)

    def apply(self, f) -> float:
        """Apply the rule to a callable or to an array of sampled values."""
        vals = f(self.nodes) if callable(f) else np.asarray(f, dtype=float)
        return float(np.dot(self.weights, vals))


EMPTY_RULE = Rule1D(np.empty(0), np.empty(0), (0.0, 0.0))


@lru_cache(maxsize=None)
def _leggauss_cached(n: int):
    x, w = leggauss(n)
    return x, w


def gauss_legendre(n: int, a: float, b: float) -> Rule1D:
    """n-point Gauss-Legendre rule on [a, b]; exact to polynomial degree 2n-1."""
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    x, w = _leggauss_cached(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return Rule1D(mid + half * x, half * w, (a, b))


def chebyshev_nodes(n: int) -> np.ndarray:
    """First-kind Chebyshev points mapped to (0, 1), ascending."""
    i = np.arange(n)
    return np.sort(0.5 * (np.cos((2 * i + 1) * np.pi / (2 * n)) + 1.0))


def _canonical_poles(poles: PoleSet):
    """Split into real poles and one representative per conjugate pair.

    Conjugate mates produce linearly dependent test functions, so each pair
    is represented once (upper half plane) and contributes both the real and
    imaginary parts of its partial fractions.
    """
    reals, pairs, leftovers = [], [], []
    remaining = [(p.location, p.multiplicity) for p in poles]
    while remaining:
        z, mult = remaining.pop(0)
        if z.imag == 0.0:
            reals.append((z, mult))
            continue
        mate = None
        for idx, (q, mq) in enumerate(remaining):
            if mq == mult and abs(q - z.conjugate()) <= 1e-9 * max(1.0, abs(z)):
                mate = idx
                break
        if mate is None:
            leftovers.append((z, mult))
            continue
        remaining.pop(mate)
        pairs.append((z if z.imag > 0 else z.conjugate(), mult))
    if leftovers:
        raise RuleConstructionError(
            f"complex poles without conjugate mates: {leftovers}; a real rule "
            "needs a conjugate-closed pole set")
    return reals, pairs


def _partial_fraction_moment(p: complex, r: int) -> complex:
    """Analytic integral of (s - p)^-r over [0, 1] for p off the interval."""
    if r == 1:
        # principal branch is safe: (1 - p) and (-p) stay in one half plane
        return np.log((1.0 - p) / (-p))
    return ((1.0 - p) ** (1 - r) - (-p) ** (1 - r)) / (1 - r)


def _test_space(poles: PoleSet, l: int):
    """Exactness basis as (kind, payload) descriptors with analytic moments.

    Kinds: ("poly", d) for s^d, ("re"/"im", p, r) for the real or imaginary
    part of (s - p)^-r.
    """
    funcs = [("poly", d) for d in range(l + 1)]
    moments = [1.0 / (d + 1) for d in range(l + 1)]
    reals, pairs = _canonical_poles(poles)
    for z, mult in reals:
        for r in range(1, mult + 1):
            funcs.append(("re", z, r))
            moments.append(_partial_fraction_moment(z, r).real)
    for z, mult in pairs:
        for r in range(1, mult + 1):
            mom = _partial_fraction_moment(z, r)
            funcs.append(("re", z, r))
            moments.append(mom.real)
            funcs.append(("im", z, r))
            moments.append(mom.imag)
    return funcs, np.asarray(moments)


def _eval_test_function(func, s: np.ndarray) -> np.ndarray:
    kind = func[0]
    if kind == "poly":
        return s ** func[1]
    _, p, r = func
    values = (s - p) ** (-r)
    return values.real if kind == "re" else values.imag


def rational_rule(poles: PoleSet, extra_degree: int = 0) -> Rule1D:
    """Rule on [0, 1] exact for prescribed poles plus polynomials.

    With total multiplicity M the rule has exactly M + extra_degree + 1
    nodes and integrates, to relative residual below 1e-11, every s^d with
    d <= extra_degree and the real and imaginary parts of (s - p)^-r for each
    pole p up to its multiplicity.  With no poles this reduces to an
    interpolatory polynomial rule of degree extra_degree.

    Weights are not guaranteed positive; exactness is the only contract and
    it is verified before the rule is returned.
    """
    if extra_degree < 0:
        raise ValueError(f"extra polynomial degree must be >= 0, got {extra_degree}")
    for p in poles:
        if distance_to_unit_interval(p.location) <= INTERVAL_CLEARANCE:
            raise PoleOnIntervalError(
                f"pole {p.location} is within {INTERVAL_CLEARANCE:.0e} of [0, 1]")
    n = poles.total_multiplicity + extra_degree + 1
    funcs, moments = _test_space(poles, extra_degree)
    nodes = chebyshev_nodes(n)
    matrix = np.vstack([_eval_test_function(f, nodes) for f in funcs])
    # equilibrate rows so the least-squares solve sees O(1) entries
    scale = np.max(np.abs(matrix), axis=1)
    scale[scale == 0.0] = 1.0
    weights, *_ = np.linalg.lstsq(matrix / scale[:, None], moments / scale,
                                  rcond=None)
    rule = Rule1D(nodes, weights, (0.0, 1.0))
    residuals = verify_exactness(rule, poles, extra_degree)
    worst = float(np.max(residuals)) if len(residuals) else 0.0
    if worst > EXACTNESS_TOL:
        raise RuleConstructionError(
            f"rational rule failed exactness verification: worst relative "
            f"residual {worst:.3e} > {EXACTNESS_TOL:.0e}", worst_residual=worst)
    return rule


def verify_exactness(rule: Rule1D, poles: PoleSet, l: int) -> np.ndarray:
    """Relative residual of the rule on every member of the exactness basis.

    Each residual compares the quadrature sum against the analytic integral
    (power rule for monomials, logarithm and inverse-power antiderivatives
    for the partial fractions), scaled by max(1, |integral|).
    """
    funcs, moments = _test_space(poles, l)
    residuals = np.empty(len(funcs))
    for i, (func, exact) in enumerate(zip(funcs, moments)):
        approx = rule.apply(_eval_test_function(func, rule.nodes))
        residuals[i] = abs(approx - exact) / max(1.0, abs(exact))
    return residuals
