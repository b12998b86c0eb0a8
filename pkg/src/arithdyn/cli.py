"""Command-line interface: ``arithdyn <command> ...``.

Exit codes: 0 success, 2 degenerate input, 3 not a morphism, 4 resource ceiling.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .canonical import DEFAULT_BIT_CEILING, compute_canonical_height
from .conjugation import conjugate, dynamical_distance_search, parse_pgl
from .distance import DEFAULT_EPS, sup_estimates
from .errors import ArithDynError, DegenerateInputError
from .experiments import alpha_scan, bounded_complexity_search, phi_A_experiment
from .height_bounds import OffsetCertificate, find_certificate
from .interpolation import prop9_slack, recover_map
from .intervals import DEFAULT_PRECISION
from .morphisms import load_map, naive_height
from .points import ProjPoint, parse_point


def _eps(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad eps {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return value


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--precision", type=int, default=default(DEFAULT_PRECISION),
                        help="bits for logarithm enclosures (default %(default)s)")
    parser.add_argument("--eps", type=_eps, default=default(DEFAULT_EPS),
                        help="target width of canonical-height intervals")
    parser.add_argument("--bound", type=int, default=default(3),
                        help="coordinate bound of the point sample")
    parser.add_argument("--seed", type=int, default=default(0), help="recorded in provenance")
    parser.add_argument("--out", default=default(None), help="write output to this file")
    parser.add_argument("--format", choices=("json", "csv"), default=default("json"))


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise DegenerateInputError(f"no such file {path!r}") from exc
    except json.JSONDecodeError as exc:
        raise DegenerateInputError(f"{path} is not valid JSON: {exc}") from exc


def _points_from(obj) -> list[ProjPoint]:
    if isinstance(obj, dict):
        obj = obj["points"]
    return [parse_point(p) if isinstance(p, str) else ProjPoint(tuple(p)) for p in obj]


def cmd_height(args):
    P = parse_point(args.point)
    return {"point": P.to_json(), "naive_height": P.naive_height,
            "weil_height": P.weil_height(args.precision).to_json()}


def cmd_map_height(args):
    phi = load_map(args.map)
    return {"map": phi.to_json(), "height": naive_height(phi, args.precision).to_json()}


def cmd_canonical_height(args):
    phi = load_map(args.map)
    res = compute_canonical_height(phi, parse_point(args.point), args.eps, args.precision,
                                   method=args.method, bit_ceiling=args.bit_ceiling)
    return {"map": phi.to_json(), "point": args.point, **res.to_json()}


def _extra(args) -> list[ProjPoint]:
    return [parse_point(p) for p in (args.extra_point or [])]


def cmd_distance(args):
    phi = load_map(args.map_a)
    psi = load_map(args.map_b) if args.map_b else None
    est = sup_estimates(args.mode, phi, psi, args.bound, args.eps, args.precision, _extra(args))
    return est.to_json(include_pointwise=args.pointwise)


def cmd_complexity(args):
    phi = load_map(args.map)
    est = sup_estimates("complexity", phi, None, args.bound, args.eps, args.precision, _extra(args))
    return est.to_json(include_pointwise=args.pointwise)


def cmd_recover(args):
    obj = _load_json(args.pairs)
    try:
        pairs = []
        for item in obj["pairs"]:
            P = item["point"]
            P = parse_point(P) if isinstance(P, str) else ProjPoint(tuple(P))
            pairs.append((P, [Fraction(v) for v in item["values"]]))
        N, d = int(obj["N"]), int(obj["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DegenerateInputError(f"malformed pairs file: {exc}") from exc
    phi = recover_map(N, d, pairs)
    return phi.to_json()


def cmd_prop9(args):
    phi = load_map(args.map)
    points = _points_from(_load_json(args.points))
    slack = prop9_slack(phi, points, args.precision)
    return {"map": phi.to_json(), "points": [P.to_json() for P in points],
            "slack": slack.to_json(), "neg_slack": (-slack).to_json()}


def cmd_conjugate(args):
    phi = load_map(args.map)
    return conjugate(phi, parse_pgl(args.f)).to_json()


def cmd_class_distance(args):
    phi = load_map(args.map_a)
    psi = load_map(args.map_b)
    res = dynamical_distance_search(phi, psi, args.entry_bound, args.bound, args.eps, args.precision)
    return res.to_json()


def cmd_certificate(args):
    phi = load_map(args.map)
    return find_certificate(phi, args.method).to_json()


def cmd_verify_certificate(args):
    phi = load_map(args.map)
    cert = OffsetCertificate.from_json(_load_json(args.cert), phi, args.precision)
    return {"valid": True, "C_up": cert.c_up.to_json(), "C_low": cert.c_low.to_json()}


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def cmd_experiment(args):
    if args.experiment == "phi-a":
        report = phi_A_experiment(args.d, args.A, args.bound, args.eps, args.precision)
    elif args.experiment == "alpha":
        report = alpha_scan(args.N, args.d, args.coeff_bound, args.bound, args.eps, args.precision)
    else:
        psi = load_map(args.psi) if args.psi else None
        report = bounded_complexity_search(args.N, args.d, psi, args.coeff_bound,
                                           args.B_complexity, args.bound, args.eps, args.precision)
    report.provenance["seed"] = args.seed
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arithdyn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_options(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("height", cmd_height, "Weil height of a point")
    p.add_argument("point", help='point such as "3:-4"')

    p = add("map-height", cmd_map_height, "height of a map's coefficient point")
    p.add_argument("--map", required=True, help="JSON file, JSON text, power:N:d or phi_A:d:A")

    p = add("canonical-height", cmd_canonical_height, "certified canonical height")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--method", choices=("auto", "exact", "split"), default="auto")
    p.add_argument("--bit-ceiling", type=int, default=DEFAULT_BIT_CEILING,
                   help="largest coordinate size in bits allowed on the exact route")

    for name, func in (("distance", cmd_distance), ("complexity", cmd_complexity)):
        p = add(name, func, f"{name} bracket [lower, upper]")
        if name == "distance":
            p.add_argument("--map-a", required=True)
            p.add_argument("--map-b")
            p.add_argument("--mode", choices=("delta_hat", "Delta_hat"), default="delta_hat")
        else:
            p.add_argument("--map", required=True)
        p.add_argument("--extra-point", action="append", help="additional sample point (repeatable)")
        p.add_argument("--pointwise", action="store_true", help="include every sampled interval")

    p = add("recover", cmd_recover, "recover a map from point/raw-value pairs")
    p.add_argument("--pairs", required=True)

    p = add("prop9", cmd_prop9, "height-inequality slack at a point configuration")
    p.add_argument("--map", required=True)
    p.add_argument("--points", required=True)

    p = add("conjugate", cmd_conjugate, "conjugate a map by a matrix")
    p.add_argument("--map", required=True)
    p.add_argument("--f", required=True, help='matrix rows, e.g. "1,1;0,1"')

    p = add("class-distance", cmd_class_distance, "search over conjugates for the smallest distance")
    p.add_argument("--map-a", required=True)
    p.add_argument("--map-b", required=True)
    p.add_argument("--entry-bound", type=int, default=1)

    p = add("certificate", cmd_certificate, "offset certificate (morphism test)")
    p.add_argument("--map", required=True)
    p.add_argument("--method", choices=("auto", "sylvester", "macaulay"), default="auto")

    p = add("verify-certificate", cmd_verify_certificate, "check a certificate file against a map")
    p.add_argument("--map", required=True)
    p.add_argument("--cert", required=True)

    p = add("experiment", cmd_experiment, "batch experiments")
    p.add_argument("experiment", choices=("phi-a", "alpha", "finiteness"))
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--A", type=_int_list, default=[10, 100, 1000], help="comma-separated A values")
    p.add_argument("--coeff-bound", type=int, default=1)
    p.add_argument("--psi", help="reference map for the finiteness search (default power map)")
    p.add_argument("--B-complexity", type=Fraction, default=Fraction(1))
    return parser


def _render(result, fmt: str) -> str:
    if hasattr(result, "dumps"):
        return result.dumps(fmt)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        for k, v in result.items():
            w.writerow([k, v if isinstance(v, (str, int)) else json.dumps(v)])
        return buf.getvalue()
    return json.dumps(result, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except ArithDynError as exc:
        print(f"arithdyn: {exc}", file=sys.stderr)
        return exc.exit_code
    text = _render(result, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the flush at exit
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return 0


if __name__ == "__main__":
    sys.exit(main())
