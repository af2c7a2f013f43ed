"""Command-line front end: ``angled check|solve|bound|fixtures``."""

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import fixtures
from .angles import build_constraints, initial_point, rank_and_dimension
from .errors import AngledError, Infeasible, NotFeasible
from .report import dumps, report_to_dict
from .solver import SolveOptions, Status, solve, volume_lower_bound
from .triangulation import parse_triangulation

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_BOUNDARY = 3

_FILL_RE = re.compile(r"^\s*(\d+)\s*:\s*(-?\d+)\s*/\s*(-?\d+)\s*$")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _fill(text):
    m = _FILL_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected CUSP:P/Q, got {text!r}")
    return tuple(int(g) for g in m.groups())


def _load(path):
    text = Path(path).read_text()
    return text, parse_triangulation(text, name=Path(path).stem)


def _err(message):
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def cmd_check(args):
    try:
        _, tri = _load(args.path)
        cs = build_constraints(tri)
        rank, dim = rank_and_dimension(cs)
    except (OSError, AngledError) as exc:
        return _err(exc)
    print(f"tetrahedra: {tri.tet_count}")
    print("edge degrees: " + " ".join(str(e.degree) for e in tri.edge_classes))
    print(f"cusps: {tri.num_cusps}")
    print(f"rank A = {rank}")
    print(f"dim A = {dim}")
    try:
        point = initial_point(cs)
    except Infeasible as exc:
        print(f"feasible: no ({exc})")
        return EXIT_INFEASIBLE
    except AngledError as exc:
        return _err(exc)
    print(f"feasible: yes (margin {point.margin!r})")
    return EXIT_OK


def cmd_solve(args):
    try:
        opts = SolveOptions(gradient_tolerance=args.tol, max_iterations=args.max_iters)
    except ValueError as exc:
        return _err(exc)
    try:
        text, tri = _load(args.path)
        for cusp, _, _ in args.fill:
            if cusp >= tri.num_cusps:
                raise AngledError(f"no cusp {cusp} (triangulation has {tri.num_cusps})")
        rep = solve(tri, fillings=args.fill, opts=opts)
    except (OSError, AngledError, ValueError) as exc:
        return _err(f"{type(exc).__name__}: {exc}")

    if args.report:
        doc = dumps(report_to_dict(rep, text, {
            "gradient_tolerance": opts.gradient_tolerance,
            "max_iterations": opts.max_iterations,
        }))
        if args.report == "-":
            sys.stdout.write(doc)
        else:
            Path(args.report).write_text(doc)
    if not args.quiet:
        if rep.status is Status.INFEASIBLE:
            print(f"{tri.name}: Infeasible ({rep.message})")
        else:
            worst = rep.residuals.worst() if rep.residuals else float("nan")
            print(f"{tri.name}: {rep.status.value} volume {rep.volume!r} "
                  f"residual {worst:.3g} iterations {rep.iterations}")
    return {Status.INTERIOR: EXIT_OK, Status.BOUNDARY: EXIT_BOUNDARY,
            Status.INFEASIBLE: EXIT_INFEASIBLE}[rep.status]


def _read_angles(path):
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        for token in raw.split("#", 1)[0].replace(",", " ").split():
            try:
                values.append(float(token))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number: {token!r}") from None
    return np.array(values)


def cmd_bound(args):
    try:
        _, tri = _load(args.path)
        q = _read_angles(args.angles)
    except (OSError, ValueError, AngledError) as exc:
        return _err(exc)
    if q.size != 3 * tri.tet_count or not np.all(np.isfinite(q)):
        return _err(f"expected {3 * tri.tet_count} finite angles, got {q.size}")
    cs = build_constraints(tri)
    try:
        bound = volume_lower_bound(cs, q)
    except NotFeasible as exc:
        print(f"not feasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    try:
        rigorous = solve(tri).status is Status.INTERIOR
    except AngledError:
        rigorous = False
    print(f"V(q) = {bound!r}")
    if rigorous:
        print("lower bound for the volume: rigorous (this triangulation has an interior volume maximum)")
    else:
        print("lower bound for the volume: conditional (no interior volume maximum was found)")
    return EXIT_OK


def cmd_fixtures(args):
    if args.name:
        try:
            sys.stdout.write(fixtures.fixture_text(args.name))
        except KeyError as exc:
            return _err(exc.args[0])
        return EXIT_OK
    for name in fixtures.NAMES:
        print(f"{name}\t{fixtures.fixture_path(name)}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="angled", description="Hyperbolic structures from angle structures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="validate a triangulation and its angle polytope")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="maximize volume and verify the resulting structure")
    p.add_argument("path")
    p.add_argument("--tol", type=float, default=SolveOptions.gradient_tolerance,
                   help="reduced gradient tolerance (default %(default)g)")
    p.add_argument("--max-iters", type=int, default=SolveOptions.max_iterations)
    p.add_argument("--fill", type=_fill, action="append", default=[], metavar="C:P/Q",
                   help="Dehn filling of cusp C along P*meridian + Q*longitude; repeatable")
    p.add_argument("--report", metavar="PATH", help="write the report document ('-' for stdout)")
    p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bound", help="volume of a given angle structure as a lower bound")
    p.add_argument("path")
    p.add_argument("--angles", required=True, metavar="PATH",
                   help="file with 3n angles in radians")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("fixtures", help="list bundled triangulations or print one")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
