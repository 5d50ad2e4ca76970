"""Command-line front end.

Subcommands: ``solve``, ``certify``, ``dimensions``, ``bump``, ``reproduce``,
``plotdata``.  Every command takes exactly one function source:

* ``--function EXPR`` with ``--domain SPEC`` and ``--degree D``
* ``--samples FILE``  (CSV: coordinate columns, then a value column named f)
  with ``--degree D``
* ``--builtin ID``    (a registered gallery instance)

Domain mini-spec: ``grid:[lo,hi]:k`` (one bracket group per axis, e.g.
``grid:[-1,1],[-1,1]:21``) or ``disk:cx,cy:r:rings:perring``; anything else
is read as a domain file (CSV or JSON).

Exit codes: 0 success (for ``certify``: candidate optimal), 1 certify found a
suboptimality witness / reproduce found failures, 2 input error, 3 numeric
failure or theory violation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import certify, construct, gallery
from .domain import Domain, DomainError, box_grid, disk_grid, load_domain, make_domain
from .funcexpr import EvalError, ParseError, eval_expr, num_vars, parse
from .lp import NumericFailure
from .minimax import (
    Instance,
    InstanceError,
    deviation_sets,
    instance_to_json,
    relint_solution,
    solve_minimax,
    solution_to_json,
)
from .poly import Basis, BasisError, Polynomial, enumerate_degree_basis

__all__ = ["main", "console_main"]

_INPUT_ERRORS = (
    DomainError,
    ParseError,
    EvalError,
    BasisError,
    InstanceError,
    gallery.GalleryError,
    construct.BumpError,
    certify.SeparationError,
    json.JSONDecodeError,
    OSError,
    KeyError,
)


class _CliInputError(ValueError):
    pass


def _write_output(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _parse_domain_spec(spec: str) -> Domain:
    if spec.startswith("grid:"):
        m = re.fullmatch(r"grid:((?:\[[^\]]+\],?)+):(\d+)", spec)
        if not m:
            raise _CliInputError(f"bad grid spec {spec!r}; expected grid:[lo,hi]:k")
        bounds = []
        for group in re.findall(r"\[([^\]]+)\]", m.group(1)):
            parts = [p.strip() for p in group.split(",")]
            if len(parts) != 2:
                raise _CliInputError(f"bad grid bounds [{group}]")
            bounds.append((float(parts[0]), float(parts[1])))
        lo = [b[0] for b in bounds]
        hi = [b[1] for b in bounds]
        return box_grid(lo, hi, int(m.group(2)))
    if spec.startswith("disk:"):
        parts = spec.split(":")
        if len(parts) != 5:
            raise _CliInputError(f"bad disk spec {spec!r}; expected disk:cx,cy:r:rings:perring")
        center = tuple(float(v) for v in parts[1].split(","))
        return disk_grid(center, float(parts[2]), int(parts[3]), int(parts[4]))
    return load_domain(spec)


def _load_samples(path: str):
    """CSV with a header: coordinate columns followed by a value column 'f'."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise _CliInputError(f"samples file {path!r} is empty")
    header = [c.strip() for c in lines[0].split(",")]
    if "f" not in header:
        raise _CliInputError(f"samples file {path!r} lacks a value column named 'f'")
    f_col = header.index("f")
    coord_cols = [j for j in range(len(header)) if j != f_col]
    points, values = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(header):
            raise _CliInputError(f"ragged row at line {lineno} of {path!r}")
        try:
            points.append([float(cells[j]) for j in coord_cols])
            values.append(float(cells[f_col]))
        except ValueError as exc:
            raise _CliInputError(f"non-numeric cell at line {lineno} of {path!r}") from exc
    if not points:
        raise _CliInputError(f"samples file {path!r} has no data rows")
    return make_domain(points), np.asarray(values)


def _load_points(path: str) -> np.ndarray:
    return load_domain(path).points


def _load_candidate(path: str, basis: Basis) -> Polynomial:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or len(data) != basis.size:
        raise _CliInputError(
            f"candidate file {path!r} must hold a JSON array of {basis.size} coefficients"
        )
    return Polynomial(basis, np.asarray([float(v) for v in data]))


def _build_instance(args) -> Instance:
    sources = [s for s in ("function", "samples", "builtin") if getattr(args, s, None)]
    if len(sources) != 1:
        raise _CliInputError(
            "exactly one function source required (--function / --samples / --builtin)"
        )
    src = sources[0]
    if src == "builtin":
        inst, _ = gallery.get_instance(args.builtin, args.resolution)
        return inst
    if args.degree is None:
        raise _CliInputError("--degree is required with --function / --samples")
    if src == "samples":
        dom, values = _load_samples(args.samples)
        basis = enumerate_degree_basis(dom.n, args.degree)
        return Instance(domain=dom, values=values, basis=basis)
    if not args.domain:
        raise _CliInputError("--domain is required with --function")
    expr = parse(args.function)
    dom = _parse_domain_spec(args.domain)
    if num_vars(expr) > dom.n:
        raise _CliInputError(
            f"function uses {num_vars(expr)} coordinates, domain has dimension {dom.n}"
        )
    values = np.asarray([eval_expr(expr, p) for p in dom.points])
    basis = enumerate_degree_basis(dom.n, args.degree)
    return Instance(domain=dom, values=values, basis=basis)


# -- commands -----------------------------------------------------------------


def _cmd_solve(args) -> int:
    inst = _build_instance(args)
    sol = solve_minimax(inst, exact=args.exact)
    if args.format == "csv":
        cells = [repr(sol.t_star)] + [repr(float(c)) for c in sol.q.coeffs]
        text = "t_star," + ",".join(f"c{j}" for j in range(sol.q.coeffs.size)) + "\n"
        text += ",".join(cells)
    else:
        text = solution_to_json(inst, sol)
    _write_output(text, args.output)
    return 0


def _cmd_certify(args) -> int:
    inst = _build_instance(args)
    q = _load_candidate(args.candidate, inst.basis)
    cert = certify.is_optimal(inst, q, tol=args.tolerance)
    payload = {"verdict": cert.verdict, "margin": cert.margin}
    if cert.witness is not None:
        payload["witness"] = [float(c) for c in cert.witness.coeffs]
        payload["descent_step"] = cert.descent_step
        payload["descent_drop"] = cert.descent_drop
    _write_output(json.dumps(payload, sort_keys=True), args.output)
    return 0 if cert.verdict == certify.OPTIMAL_CERTIFIED else 1


def _cmd_dimensions(args) -> int:
    inst = _build_instance(args)
    exact = True if args.exact else None
    report = certify.solution_vs_cone_dimension(inst, exact=exact)
    _write_output(certify.dimension_report_to_json(report), args.output)
    return 0


def _cmd_bump(args) -> int:
    neg = _load_points(args.N)
    pos = _load_points(args.P)
    dom = _parse_domain_spec(args.domain) if args.domain else None
    if dom is None:
        raise _CliInputError("--domain is required for bump")
    if args.degree is None:
        raise _CliInputError("--degree is required for bump")
    basis = enumerate_degree_basis(dom.n, args.degree)
    inst = construct.bump_instance(neg, pos, dom, basis, args.variant)
    report = certify.solution_vs_cone_dimension(inst)
    payload = {
        "spec": json.loads(construct.bump_spec_to_json(
            construct.BumpSpec(neg=neg, pos=pos, variant=args.variant))),
        "instance": json.loads(instance_to_json(inst)),
        "dimensions": json.loads(certify.dimension_report_to_json(report)),
    }
    _write_output(json.dumps(payload, sort_keys=True), args.output)
    return 0


def _cmd_reproduce(args) -> int:
    if not args.all and not args.id:
        raise _CliInputError("reproduce needs --id or --all")
    ids = list(gallery.INSTANCE_IDS) if args.all else [args.id]
    for instance_id in ids:
        if instance_id not in gallery.INSTANCE_IDS:
            raise _CliInputError(
                f"unknown instance {instance_id!r}; known ids: {', '.join(gallery.INSTANCE_IDS)}"
            )
    if args.resolution_raw == "sweep":
        lines = ["id,spacing,step_down,step_up"]
        for instance_id in ids:
            for row in gallery.refinement_study(instance_id):
                lines.append(f"{instance_id},{row['spacing']!r},"
                             f"{row['step_down']!r},{row['step_up']!r}")
        _write_output("\n".join(lines), args.output)
        return 0
    report = gallery.run_all(resolution=args.resolution, ids=ids)
    _write_output(gallery.report_to_json(report), args.output)
    return 0 if report.all_passed else 1


def _cmd_plotdata(args) -> int:
    if not args.output:
        raise _CliInputError("plotdata requires --output (writes two files)")
    inst = _build_instance(args)
    if args.candidate:
        q = _load_candidate(args.candidate, inst.basis)
    else:
        q = relint_solution(inst).q
    neg, pos = deviation_sets(inst, q, tol=args.tolerance)
    qv = q(inst.domain.points)
    header = ",".join(f"x{j+1}" for j in range(inst.domain.n)) + ",f,q,dev"
    lines = [header]
    for p, fv, quv in zip(inst.domain.points, inst.values, qv):
        cells = [repr(float(v)) for v in p] + [repr(float(fv)), repr(float(quv)),
                                               repr(float(fv - quv))]
        lines.append(",".join(cells))
    _write_output("\n".join(lines), args.output)

    sets_path = _derive_sets_path(args.output)
    set_lines = [",".join(f"x{j+1}" for j in range(inst.domain.n)) + ",set"]
    for idx in neg:
        set_lines.append(",".join(repr(float(v)) for v in inst.domain.points[idx]) + ",N")
    for idx in pos:
        set_lines.append(",".join(repr(float(v)) for v in inst.domain.points[idx]) + ",P")
    _write_output("\n".join(set_lines), sets_path)
    return 0


def _derive_sets_path(path: str) -> str:
    if "." in path.rsplit("/", 1)[-1]:
        stem, ext = path.rsplit(".", 1)
        return f"{stem}_sets.{ext}"
    return path + "_sets"


# -- parser -------------------------------------------------------------------


def _add_source_flags(p: argparse.ArgumentParser, with_candidate=False):
    p.add_argument("--function", help="target function expression")
    p.add_argument("--samples", help="CSV samples file (coordinates + value column f)")
    p.add_argument("--builtin", help="registered instance id")
    p.add_argument("--degree", type=int, help="maximum total degree of the fit")
    p.add_argument("--domain", help="domain spec (grid:…, disk:…) or file")
    p.add_argument("--resolution", type=float, help="grid spacing for --builtin")
    p.add_argument("--tolerance", type=float, default=None, help="active-set tolerance")
    p.add_argument("--exact", action="store_true", help="exact rational arithmetic")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if with_candidate:
        p.add_argument("--candidate", help="JSON coefficient file (graded-lex order)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebapprox",
        description="Minimax polynomial approximation on finite domains: "
                    "solve, certify optimality, analyze solution-set dimensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="best uniform fit")
    _add_source_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("certify", help="optimality certificate for a candidate")
    _add_source_flags(p, with_candidate=True)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("dimensions", help="solution-set vs separating-cone dimension")
    _add_source_flags(p)
    p.set_defaults(func=_cmd_dimensions)

    p = sub.add_parser("bump", help="build a bump instance with prescribed sets")
    p.add_argument("--N", required=True, help="points file for the -1 set")
    p.add_argument("--P", required=True, help="points file for the +1 set")
    p.add_argument("--variant", choices=(construct.SHARP, construct.SMOOTH),
                   default=construct.SHARP)
    p.add_argument("--domain", help="domain spec or file")
    p.add_argument("--degree", type=int)
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_bump)

    p = sub.add_parser("reproduce", help="run built-in instances against golden values")
    p.add_argument("--id", help="one instance id")
    p.add_argument("--all", action="store_true", help="run every registered instance")
    p.add_argument("--resolution", dest="resolution_raw", default=None,
                   help="grid spacing, or 'sweep' for the refinement study")
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("plotdata", help="CSV surface + deviation-set scatter")
    _add_source_flags(p, with_candidate=True)
    p.set_defaults(func=_cmd_plotdata)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "resolution_raw", None) is not None and args.command == "reproduce":
        if args.resolution_raw != "sweep":
            try:
                args.resolution = float(args.resolution_raw)
            except ValueError:
                print(f"error: bad --resolution {args.resolution_raw!r}", file=sys.stderr)
                return 2
        else:
            args.resolution = None
    elif args.command == "reproduce":
        args.resolution = None
    try:
        return args.func(args)
    except (_CliInputError, *_INPUT_ERRORS) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (NumericFailure, certify.TheoryViolationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
