"""Command-line interface: distance queries, path export, audits, candidates.

Exit codes are exhaustive and disjoint:

* 0 — success;
* 1 — input error (unparsable flags or points, off-surface coordinates,
  dimension cap exceeded, unsupported format for the dimension);
* 2 — verification mismatch (an internal cross-check failed, an emitted path
  did not re-validate, or an audit found violations).
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from typing import Sequence

from .audit import PAIR_CLASSES, fmt17, run_audit, to_stable_json
from .candidates import (
    DEFAULT_MAX_N,
    adjacent_candidate_count,
    adjacent_candidates,
    geodesic_distance,
    n3_route_alias,
    opposite_candidate_count,
    opposite_candidates,
)
from .oracle import default_grid_resolution
from .surface import GeodesicPath, SurfaceError, SurfacePoint, make_surface_point

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1 (not argparse's 2),
    keeping exit code 2 reserved for verification mismatches.

    Also treats tokens like ``-1,0.05,0`` or ``-19/20,-1,0,1`` as values, not
    option strings, so ``-b -1,0.05,0`` parses."""

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-[\d./,eE+-]+$")

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_point(text: str) -> SurfacePoint:
    """Parse ``x1,...,xn`` where each entry is a decimal or a ``p/q`` rational."""
    coords: list[float] = []
    for token in text.split(","):
        token = token.strip()
        try:
            coords.append(float(token) if "/" not in token else float(Fraction(token)))
        except (ValueError, ZeroDivisionError) as exc:
            raise SurfaceError(f"cannot parse coordinate {token!r}") from exc
    return make_surface_point(tuple(coords))


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# dist
# ---------------------------------------------------------------------------


def cmd_dist(args: argparse.Namespace) -> int:
    a = parse_point(args.a)
    b = parse_point(args.b)
    res = geodesic_distance(a, b, witness=False)
    prov = res.provenance
    if args.json:
        payload = {
            "n": a.n,
            "a": list(a.coords),
            "b": list(b.coords),
            "distance": res.distance,
            "provenance": {
                "kind": prov.kind,
                "label": prov.label,
                "face_a": str(prov.face_a) if prov.face_a is not None else None,
                "face_b": str(prov.face_b) if prov.face_b is not None else None,
                "swapped": prov.swapped,
            },
            "minimizers": list(prov.minimizers),
            "conditions": list(prov.conditions),
        }
        sys.stdout.write(to_stable_json(payload) + "\n")
        return 0
    print(f"distance    = {fmt17(res.distance)}")
    where = ""
    if prov.face_a is not None:
        where = f" (a on {prov.face_a}, b on {prov.face_b})"
    print(f"provenance  = {prov.kind} {prov.label}{where}")
    print(f"minimizers  = {', '.join(prov.minimizers)}")
    if prov.conditions:
        print(f"conditions  = {', '.join(prov.conditions)}")
    return 0


# ---------------------------------------------------------------------------
# path
# ---------------------------------------------------------------------------


def _revalidate(path: GeodesicPath, distance: float) -> None:
    for v in path.vertices:
        if max(abs(c) for c in v.coords) != 1.0:
            raise RuntimeError(f"emitted path vertex {v.coords} is off the surface")
    if abs(path.total_length - distance) > 1e-9:
        raise RuntimeError(
            f"emitted path length {fmt17(path.total_length)} does not match the "
            f"reported distance {fmt17(distance)}"
        )


def cmd_path(args: argparse.Namespace) -> int:
    a = parse_point(args.a)
    b = parse_point(args.b)
    if args.format == "obj" and a.n != 3:
        raise SurfaceError("obj output writes 3-d geometry; it needs n = 3")
    res = geodesic_distance(a, b, witness=True)
    path = res.witness
    _revalidate(path, res.distance)
    if args.format == "json":
        payload = {
            "vertices": [list(v.coords) for v in path.vertices],
            "leg_lengths": list(path.leg_lengths),
            "total": path.total_length,
        }
        text = to_stable_json(payload) + "\n"
    elif args.format == "csv":
        lines = [",".join(fmt17(c) for c in v.coords) for v in path.vertices]
        text = "\n".join(lines) + "\n"
    else:  # obj
        lines = ["v " + " ".join(fmt17(c) for c in v.coords) for v in path.vertices]
        lines.append("l " + " ".join(str(i + 1) for i in range(len(path.vertices))))
        text = "\n".join(lines) + "\n"
    _write(text, args.output)
    return 0


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------


def cmd_audit(args: argparse.Namespace) -> int:
    K = None
    if args.h is not None:
        if not 0 < args.h <= 0.2:
            raise SurfaceError(f"grid spacing must be in (0, 0.2], got {args.h!r}")
        K = round(2.0 / args.h)
    elif args.oracle in ("grid", "both"):
        K = default_grid_resolution(args.n)
    report = run_audit(
        n=args.n,
        pair_class=args.pair_class,
        samples=args.samples,
        seed=args.seed,
        oracle=args.oracle,
        K=K,
        exact_tol=args.tol if args.tol is not None else 1e-9,
        grid_tol=args.tol,
        keep_records=not args.no_records,
    )
    _write(report.to_json(), args.output)
    print(
        f"audit: n={report.n} class={report.pair_class} samples={report.samples} "
        f"seed={report.seed} oracle={report.oracle} max_delta={fmt17(report.max_delta)} "
        f"violations={len(report.violations)}",
        file=sys.stderr,
    )
    return 0 if report.ok else 2


# ---------------------------------------------------------------------------
# candidates
# ---------------------------------------------------------------------------


def cmd_candidates(args: argparse.Namespace) -> int:
    n = args.n
    if args.mode == "adjacent":
        stream = adjacent_candidates(n)
        closed = adjacent_candidate_count(n)
    else:
        stream = opposite_candidates(n)
        closed = opposite_candidate_count(n)
    if args.count_only:
        streamed = sum(1 for _ in stream)
        print(f"{streamed} = {closed}")
        if streamed != closed:
            raise RuntimeError(
                f"streamed candidate count {streamed} does not match the closed "
                f"form {closed}"
            )
        return 0
    for cand in stream:
        alias = n3_route_alias(cand) if n == 3 else None
        suffix = f"  [{alias}]" if alias is not None else ""
        print(f"{cand.label():<24} {cand.schema(n)}{suffix}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cubegeo",
        description=(
            "Geodesic distances on the surface of the n-cube under the intrinsic "
            "sup-norm path metric: closed-form queries, witness paths, randomized "
            "audits against brute-force oracles, and candidate enumeration."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two surface points")
    p.add_argument("-a", required=True, help="first point, e.g. 1,0.05,0 or 1,-19/20,0")
    p.add_argument("-b", required=True, help="second point")
    p.add_argument("--json", action="store_true", help="emit a JSON object")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("path", help="shortest-path polyline between two surface points")
    p.add_argument("-a", required=True)
    p.add_argument("-b", required=True)
    p.add_argument("--format", choices=("json", "csv", "obj"), default="json")
    p.add_argument("--output", help="write to this file instead of standard output")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("audit", help="randomized audit of closed forms against oracles")
    p.add_argument("--n", type=int, default=3, help="dimension (default 3)")
    p.add_argument(
        "--class",
        dest="pair_class",
        choices=tuple(c for c in PAIR_CLASSES if c != "same-face"),
        default="mixed",
    )
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", choices=("exact", "grid", "both"), default="exact")
    p.add_argument("--h", type=float, help="grid spacing (sets resolution K = 2/h)")
    p.add_argument("--tol", type=float, help="override the comparison tolerance")
    p.add_argument("--output", help="write the JSON report to this file")
    p.add_argument(
        "--no-records", action="store_true", help="omit per-sample records from the report"
    )
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("candidates", help="enumerate or count distance candidates")
    p.add_argument("--n", type=int, required=True, help=f"dimension (3..{DEFAULT_MAX_N})")
    p.add_argument("--mode", choices=("adjacent", "opposite"), required=True)
    p.add_argument(
        "--count-only",
        action="store_true",
        help="print streamed and closed-form counts and assert they agree",
    )
    p.set_defaults(func=cmd_candidates)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse help (0) or usage error (1)
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SurfaceError as exc:
        print(f"cubegeo: error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"cubegeo: verification mismatch: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
