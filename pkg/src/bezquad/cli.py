"""Command-line front end.

Commands: rule, integrate, moments, convergence, nurbs-extract, fit.
Exit codes: 0 success, 1 numerical failure, 2 input or validation error.
CSV outputs use '\\n' line endings and shortest round-trip decimals, so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys

from .engine import (MODE_SPECTRAL, MODE_SPECTRALPE, RuleConfig,
                     antiderivative_points, build_rule, integrate)
from .errors import (DegenerateLoopError, ExpressionError, QuadratureError,
                     RegionValidationError, UnsupportedInputError)
from .expressions import parse_expression
from .momentfit import fit_weights, geometric_summary, monomial_moments
from .oracle import OracleConfig, quadtree_integral, reference_integral, winding_number
from .region import (BoundaryLoop, Region, load_nurbs, load_region,
                     loop_orientation, nurbs_extract, serialize_region)

_INPUT_ERRORS = (RegionValidationError, UnsupportedInputError, ExpressionError,
                 DegenerateLoopError, OSError, ValueError)


def _load_region(args) -> Region:
    return load_region(args.region,
                       allow_nonpositive_weights=args.allow_nonpositive_weights,
                       fix_orientation=args.fix_orientation)


def _resolve_config(args, integrand=None) -> RuleConfig:
    if args.mode == MODE_SPECTRAL:
        if args.Q is None:
            raise ValueError("spectral mode needs --Q")
        return RuleConfig(MODE_SPECTRAL, Q=args.Q, P=args.P)
    k = args.k
    if k is None:
        if integrand is not None and integrand.polynomial_degree is not None:
            k = integrand.polynomial_degree
        elif integrand is not None:
            k = 2  # refine non-polynomial integrands via --l / --P
        else:
            raise ValueError("spectralpe mode needs --k")
    return RuleConfig(MODE_SPECTRALPE, k=k, P=args.P, l=args.l)


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_csv(path, header, rows):
    handle, owned = _open_out(path)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if owned:
            handle.close()


def cmd_rule(args) -> int:
    region = _load_region(args)
    config = _resolve_config(args)
    rule = build_rule(region, config)
    print(len(rule))
    rows = [[float(rule.points[i, 0]), float(rule.points[i, 1]),
             float(rule.weights[i]), int(rule.provenance[i, 0]),
             int(rule.provenance[i, 1]), int(rule.provenance[i, 2])]
            for i in range(len(rule))]
    _write_csv(args.out, ["x", "y", "weight", "curve_index", "q", "zeta"], rows)
    return 0


def cmd_integrate(args) -> int:
    region = _load_region(args)
    integrand = parse_expression(args.expression)
    config = _resolve_config(args, integrand)
    rule = build_rule(region, config)
    print(repr(integrate(rule, integrand)))
    return 0


def cmd_moments(args) -> int:
    region = _load_region(args)
    summary = geometric_summary(region)
    print(f"area {summary.area!r}")
    print(f"centroid_x {summary.centroid.x!r}")
    print(f"centroid_y {summary.centroid.y!r}")
    print(f"inertia_xx {summary.inertia[0][0]!r}")
    print(f"inertia_xy {summary.inertia[0][1]!r}")
    print(f"inertia_yy {summary.inertia[1][1]!r}")
    return 0


def _parse_sweep(spec: str):
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"sweep must be start:stop[:step], got {spec!r}")
    start, stop = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if step < 1 or stop < start:
        raise ValueError(f"bad sweep {spec!r}")
    return list(range(start, stop + 1, step))


def cmd_convergence(args) -> int:
    region = _load_region(args)
    integrand = parse_expression(args.expression)
    reference = reference_integral(region, integrand)
    rows = []
    for value in _parse_sweep(args.sweep):
        if args.mode == MODE_SPECTRAL:
            rule = build_rule(region, RuleConfig(MODE_SPECTRAL, Q=value))
            n_q, approx = len(rule), integrate(rule, integrand)
        elif args.mode == MODE_SPECTRALPE:
            k = args.k if args.k is not None else \
                (integrand.polynomial_degree
                 if integrand.polynomial_degree is not None else 2)
            config = RuleConfig(MODE_SPECTRALPE, k=k, l=value,
                                P=antiderivative_points(k) + value)
            rule = build_rule(region, config)
            n_q, approx = len(rule), integrate(rule, integrand)
        else:  # quadtree
            cfg = OracleConfig(max_depth=value)
            approx, n_q = quadtree_integral(region, integrand, cfg)
        rows.append([n_q, abs(approx - reference)])
    _write_csv(args.out, ["n_q", "error"], rows)
    return 0


def cmd_nurbs_extract(args) -> int:
    nurbs = load_nurbs(args.nurbs)
    curves = nurbs_extract(nurbs)
    loop = BoundaryLoop(tuple(curves), "ccw")
    loop = BoundaryLoop(loop.curves, loop_orientation(loop))
    text = serialize_region(Region((loop,)))
    handle, owned = _open_out(args.out)
    try:
        handle.write(text)
    finally:
        if owned:
            handle.close()
    return 0


def _read_points_csv(path):
    points = []
    with open(path, newline="") as handle:
        for row in csv.reader(handle):
            if not row:
                continue
            try:
                points.append((float(row[0]), float(row[1])))
            except ValueError:
                continue  # header row
    if not points:
        raise ValueError(f"no points found in {path}")
    return points


def _random_interior_points(region, count, seed):
    from .geometry import bounding_box

    box = bounding_box(region)
    rng = random.Random(seed)
    points = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 10000 * count:
            raise ValueError("rejection sampling failed to find interior points")
        p = (rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max))
        try:
            if winding_number(region, p) == 1:
                points.append(p)
        except QuadratureError:
            continue
    return points


def cmd_fit(args) -> int:
    region = _load_region(args)
    if args.points is not None:
        points = _read_points_csv(args.points)
    elif args.random is not None:
        points = _random_interior_points(region, args.random, args.seed)
    else:
        raise ValueError("fit needs --points FILE or --random N")
    moments = monomial_moments(region, args.k)
    weights, residual = fit_weights(points, moments)
    print(f"residual {residual!r}")
    _write_csv(args.out, ["x", "y", "weight"],
               [[x, y, float(w)] for (x, y), w in zip(points, weights)])
    return 0


def _add_region_arg(parser):
    parser.add_argument("region", help="region JSON file")
    parser.add_argument("--fix-orientation", action="store_true",
                        help="accept computed loop orientations over declared flags")
    parser.add_argument("--allow-nonpositive-weights", action="store_true",
                        help="skip the weight positivity check (spectral mode only)")


def _add_mode_args(parser):
    parser.add_argument("--mode", choices=[MODE_SPECTRAL, MODE_SPECTRALPE],
                        default=MODE_SPECTRALPE)
    parser.add_argument("--k", type=int, default=None,
                        help="polynomial exactness degree (spectralpe)")
    parser.add_argument("--Q", type=int, default=None,
                        help="intermediate points per curve (spectral)")
    parser.add_argument("--P", type=int, default=None,
                        help="antiderivative points (defaults per mode)")
    parser.add_argument("--l", type=int, default=0,
                        help="extra intermediate polynomial degrees (spectralpe)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bezquad",
        description="Quadrature rules and integrals over planar regions "
                    "bounded by rational Bezier curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rule", help="emit quadrature points and weights as CSV")
    _add_region_arg(p)
    _add_mode_args(p)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_rule)

    p = sub.add_parser("integrate", help="integrate an expression over a region")
    _add_region_arg(p)
    p.add_argument("expression", help="integrand in x and y, e.g. 'x^2*y'")
    _add_mode_args(p)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("moments", help="area, centroid, and central inertia")
    _add_region_arg(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("convergence",
                       help="error sweep against the high-order reference")
    _add_region_arg(p)
    p.add_argument("expression")
    p.add_argument("--mode",
                   choices=[MODE_SPECTRAL, MODE_SPECTRALPE, "quadtree"],
                   default=MODE_SPECTRAL)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--sweep", required=True, help="start:stop[:step]; "
                   "Q=P for spectral, l for spectralpe, depth for quadtree")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("nurbs-extract",
                       help="decompose a clamped NURBS into a region file")
    p.add_argument("nurbs", help="NURBS JSON file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_nurbs_extract)

    p = sub.add_parser("fit", help="moment-fit weights at prescribed points")
    _add_region_arg(p)
    p.add_argument("--k", type=int, default=None, required=True)
    p.add_argument("--points", default=None, help="CSV of x,y points")
    p.add_argument("--random", type=int, default=None,
                   help="sample N uniform interior points instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
