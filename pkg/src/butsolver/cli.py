"""Command-line front end.

Exit codes: 0 success, 1 hypothesis violation / failed certificate or
check, 2 usage or I/O error.  JSON artifacts go to ``--out``; a short
summary goes to stdout and diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .checker import check_report
from .manifolds import MAX_SUBDIVISIONS, ManifoldSpec, realize
from .plmap import CONSISTENT, HypothesisViolation, certify_but, sample_plmap
from .setmap import PolyFunc, SetValuedMap, SingletonOf, setmap_from_json
from .simplicial import ComplexFormatError, complex_to_json, load_complex, mesh_norm, validate_complex
from .solver import NoZeroFound, SolveOptions, solve_coincidence, solve_theorem


class UsageError(Exception):
    pass


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path: Optional[str], obj) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(dump(obj))


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _distinct(out: Optional[str], *inputs: Optional[str]) -> None:
    if out is None:
        return
    for p in inputs:
        if p and os.path.abspath(p) == os.path.abspath(out):
            raise UsageError(f"--out {out} would overwrite an input file")


def _add_manifold_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifold", choices=["sphere", "circle", "genus2", "file"], required=True)
    p.add_argument("--dim", type=int, help="sphere dimension")
    p.add_argument("--segments", type=int, help="circle: n for the regular 2n-gon")
    p.add_argument("--path", help="complex JSON file for --manifold file")
    p.add_argument("--subdivisions", type=int, default=0)
    p.add_argument("--reproject", action=argparse.BooleanOptionalAction, default=True,
                   help="push vertices back to the unit sphere after each subdivision (sphere/circle)")


def _spec(args) -> ManifoldSpec:
    try:
        return ManifoldSpec(kind=args.manifold, dim=args.dim, segments=args.segments, path=args.path,
                            subdivisions=args.subdivisions, reproject=args.reproject)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_solve_args(p: argparse.ArgumentParser) -> None:
    _add_manifold_args(p)
    p.add_argument("--setmap", required=True, help="set-valued map JSON")
    p.add_argument("--mesh-target", type=float, default=0.2)
    p.add_argument("--tol", type=float, default=1e-8, help="selection tolerance")
    p.add_argument("--max-rounds", type=int, default=8)
    p.add_argument("--diagnose", action="store_true", help="report every infeasible vertex pair")
    p.add_argument("--seed", type=int, default=0, help="seed for random support directions")
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="butsolver", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mesh", help="build an equivariant triangulation")
    _add_manifold_args(p)
    p.add_argument("--out")

    p = sub.add_parser("validate", help="check the invariants of a complex file")
    p.add_argument("--complex", required=True)
    p.add_argument("--out")

    p = sub.add_parser("certify", help="count zeros of a sampled antipodal map (mod-4 criterion)")
    p.add_argument("--complex", required=True)
    p.add_argument("--map", required=True, help="polynomial JSON (list of output coordinates)")
    p.add_argument("--out")

    p = sub.add_parser("solve-theorem", help="find x0 with 0 in F(x0)")
    _add_solve_args(p)

    p = sub.add_parser("solve-coincidence", help="find x0 where F(x0) meets F(A(x0))")
    _add_solve_args(p)

    p = sub.add_parser("check-report", help="independently re-verify a solver report")
    p.add_argument("--report", required=True)
    return parser


def _load_setmap(path: str, ambient_dim: int) -> SetValuedMap:
    obj = _read_json(path)
    try:
        return setmap_from_json(obj, ambient_dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: bad set-valued map: {exc}") from exc


def _load_poly(path: str, ambient_dim: int) -> PolyFunc:
    obj = _read_json(path)
    try:
        if isinstance(obj, dict):
            F = setmap_from_json(obj, ambient_dim)
            if not isinstance(F, SingletonOf):
                raise ValueError("certify needs a single-valued map")
            return F.g
        return PolyFunc.from_json(obj, ambient_dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: bad polynomial map: {exc}") from exc


def _load_complex(path: str):
    try:
        return load_complex(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except ComplexFormatError as exc:
        raise UsageError(str(exc)) from exc


def cmd_mesh(args) -> int:
    _distinct(args.out, args.path)
    c = realize(_spec(args))
    _write(args.out, complex_to_json(c))
    print(f"{c.n_vertices} vertices, {c.n_simplices} top simplices, mesh norm {mesh_norm(c):.6g}")
    return 0


def cmd_validate(args) -> int:
    _distinct(args.out, args.complex)
    c = _load_complex(args.complex)
    report = validate_complex(c)
    _write(args.out, report.to_json())
    if report.ok:
        print(f"valid: {c.n_vertices} vertices, {c.n_simplices} top simplices, chi = {c.euler_characteristic()}")
        return 0
    kinds = sorted({v.kind for v in report.violations})
    print(f"invalid: {len(report.violations)} violations ({', '.join(kinds)})")
    return 1


def cmd_certify(args) -> int:
    _distinct(args.out, args.complex, args.map)
    c = _load_complex(args.complex)
    if not validate_complex(c).ok:
        print("complex is invalid; run validate for details", file=sys.stderr)
        return 1
    g = _load_poly(args.map, c.ambient_dim)
    if g.output_dim != c.manifold_dim:
        raise UsageError(f"map has {g.output_dim} outputs, complex has dimension {c.manifold_dim}")
    f = sample_plmap(c, g)
    try:
        cert = certify_but(c, f)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(args.out, cert.to_json())
    print(f"zeros: {cert.count}, transversal: {cert.transversal}, verdict: {cert.verdict}")
    return 0 if cert.verdict == CONSISTENT else 1


def _solve(args, coincidence: bool) -> int:
    _distinct(args.out, args.setmap, args.path)
    spec = _spec(args)
    if args.max_rounds > MAX_SUBDIVISIONS or args.max_rounds < 0:
        raise UsageError(f"--max-rounds must lie in [0, {MAX_SUBDIVISIONS}]")
    try:
        opts = SolveOptions(mesh_target=args.mesh_target, max_rounds=args.max_rounds, selection_tol=args.tol,
                            reproject=args.reproject, diagnose=args.diagnose, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ambient = {"sphere": (args.dim or 0) + 1, "circle": 2, "genus2": 3}.get(spec.kind)
    if ambient is None:
        ambient = _load_complex(spec.path).ambient_dim
    F = _load_setmap(args.setmap, ambient)
    try:
        rep = solve_coincidence(spec, F, opts) if coincidence else solve_theorem(spec, F, opts)
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        _write(args.out, {"type": "hypothesis-violation", "pairs": [p.to_json() for p in exc.pairs]})
        return 1
    except NoZeroFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        _write(args.out, {"type": "no-zero-found", "round": exc.round_index, "subdivisions": exc.subdivisions})
        return 1
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(args.out, rep.to_json())
    inner = rep.theorem if coincidence else rep
    x0 = np.array2string(rep.x0, precision=6)
    print(f"x0 = {x0}, locality radius {inner.locality_radius:.6g}, rounds {len(inner.trace)}, "
          f"combination residual {inner.combination_residual:.3g}")
    if coincidence:
        print(f"gap {rep.gap:.3g} (bound {rep.gap_bound:.3g})")
    if not inner.complete:
        print(f"incomplete: mesh target {opts.mesh_target} not reached", file=sys.stderr)
        return 1
    return 0


def cmd_check(args) -> int:
    rep = _read_json(args.report)
    try:
        failures = check_report(rep)
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        raise UsageError(f"{args.report}: malformed report: {exc}") from exc
    if failures:
        for f in failures:
            print(f"FAIL {f}")
        return 1
    print("PASS")
    return 0


COMMANDS = {
    "mesh": cmd_mesh,
    "validate": cmd_validate,
    "certify": cmd_certify,
    "solve-theorem": lambda a: _solve(a, False),
    "solve-coincidence": lambda a: _solve(a, True),
    "check-report": cmd_check,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ComplexFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
