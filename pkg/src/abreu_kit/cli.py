"""Command-line front end.

Exit status: 0 success, 1 domain error (the message names the error class),
2 usage or input-parsing error.  Floats go out as shortest round-trip reprs in
JSON and with 17 significant digits in CSV.

CSV column orders:
  eval               F,entropy,boundary,interior,L,optimal_scaling,integral_u
  residual           x1..xn,operator,s,residual
  minimize --out     iteration,F,grad_norm,step,boundary_integral,interior_integral
  scan-pl --out      a1..an,offset,L,violation
  probe              integral_u,F
  quadrature-report  level,integral,value,delta
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .abreu import residual_report, sample_points
from .errors import AbreuKitError
from .functional import coercivity_probe, eval_F, probe_csv, solve_extremal_affine
from .optimizer import MinimizeConfig, minimize
from .polytope import PRESET_NAMES, from_json, moments, preset, validate_delzant
from .potentials import GuilleminPotential, ParametrizedPotential, potential_from_dict, potential_to_dict
from .quadrature import build_scheme
from .stability import facet_margins, scan_creases

logger = logging.getLogger("abreu_kit")


class InputError(Exception):
    """Malformed input file or argument value (exit status 2)."""


def _read_json(path: Path):
    text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_polytope(spec: str):
    path = Path(spec)
    if path.is_file():
        try:
            from .polytope import from_dict
            return from_dict(_read_json(path), name=path.stem)
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from None
    try:
        return preset(spec)
    except KeyError:
        raise InputError(f"{spec!r} is neither a file nor a preset ({', '.join(PRESET_NAMES)})") from None


def load_potential(spec: str, P):
    if spec == "guillemin":
        return GuilleminPotential(P)
    path = Path(spec)
    if not path.is_file():
        raise InputError(f"potential {spec!r} is neither 'guillemin' nor a file")
    try:
        return potential_from_dict(_read_json(path), P)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _json(obj) -> str:
    return json.dumps(obj) + "\n"


def _csv_table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None, args, manifest: list):
    if out:
        Path(out).write_text(text)
        manifest.append(out)
    else:
        sys.stdout.write(text)


def _write_manifest(args, outputs, wall):
    for out in outputs:
        path = Path(out).resolve().parent / "manifest.csv"
        new = not path.exists()
        config = {k: v for k, v in vars(args).items() if k not in ("func",)}
        with path.open("a", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if new:
                w.writerow(["command", "input", "config", "version", "wall_time", "output"])
            w.writerow([args.command, args.polytope, json.dumps(config, sort_keys=True, default=str),
                        __version__, f"{wall:.6f}", Path(out).name])


# --- subcommands ----------------------------------------------------------

def cmd_check(args, P, manifest):
    rep = validate_delzant(P)
    data = {"valid": rep.ok, "dim": P.dim, "vertices": rep.vertices.tolist(),
            "determinants": list(rep.determinants), "inradius": rep.inradius,
            "polytope": P.to_dict()}
    _emit(_json(data), args.out, args, manifest)


def cmd_extremal(args, P, manifest):
    E = solve_extremal_affine(moments(P))
    d = E.to_dict()
    if args.format == "csv":
        _emit(_csv_table(["a0"] + [f"a{j + 1}" for j in range(P.dim)] + ["rbar"],
                         [[E.s.a0, *map(float, E.s.a), E.rbar]]), args.out, args, manifest)
    else:
        _emit(_json(d), args.out, args, manifest)


def cmd_eval(args, P, manifest):
    u = load_potential(args.potential, P)
    S = build_scheme(P, args.level)
    E = solve_extremal_affine(moments(P))
    rep = eval_F(u, S, E).to_dict()
    if args.format == "csv":
        _emit(_csv_table(list(rep), [[float("nan") if v is None else v for v in rep.values()]]),
              args.out, args, manifest)
    else:
        rep["level"] = args.level
        _emit(_json(rep), args.out, args, manifest)


def cmd_residual(args, P, manifest):
    u = load_potential(args.potential, P)
    if isinstance(u, GuilleminPotential):
        u = ParametrizedPotential(P, degree=1)
    S = build_scheme(P, args.level)
    E = solve_extremal_affine(moments(P))
    R = residual_report(u, E, sample_points(S, max_points=args.points, seed=args.seed))
    if args.format == "json":
        _emit(_json({"sup": R.sup, "l2": R.l2, "n_points": len(R.residual)}), args.out, args, manifest)
    else:
        _emit(R.to_csv(), args.out, args, manifest)


def cmd_minimize(args, P, manifest):
    if args.start:
        start = load_potential(args.start, P)
        if isinstance(start, GuilleminPotential):
            start = ParametrizedPotential(P, degree=args.degree)
        if not isinstance(start, ParametrizedPotential):
            raise InputError("minimize needs a guillemin or parametrized start potential")
    else:
        start = ParametrizedPotential(P, degree=args.degree)
    cfg = MinimizeConfig(degree=args.degree, level=args.level, grad_tol=args.grad_tol,
                         max_iter=args.max_iter)
    u, trace = minimize(start, cfg)
    S = build_scheme(P, args.level)
    E = solve_extremal_affine(moments(P))
    R = residual_report(u, E, sample_points(S, max_points=200))
    summary = {"F": trace.F[-1], "iterations": trace.n_iter, "converged": trace.converged,
               "grad_norm": trace.grad_norm[-1], "residual_sup": R.sup, "unstable": trace.unstable}
    if args.out:
        _emit(trace.to_csv(), args.out, args, manifest)
    if args.coeffs:
        _emit(_json(potential_to_dict(u)), args.coeffs, args, manifest)
    sys.stdout.write(_json(summary))


def cmd_scan_pl(args, P, manifest):
    E = solve_extremal_affine(moments(P))
    rep = scan_creases(P, E, angles=args.angles, offsets=args.offsets, threads=args.threads)
    if args.out:
        _emit(rep.to_csv(), args.out, args, manifest)
    sys.stdout.write(_json(rep.summary()))


def cmd_facet_margins(args, P, manifest):
    E = solve_extremal_affine(moments(P))
    m = facet_margins(P, E)
    data = {"margins": [float(v) for v in m], "pass": bool(np.all(m > 0))}
    _emit(_json(data), args.out, args, manifest)


def cmd_probe(args, P, manifest):
    u = load_potential(args.potential, P)
    try:
        scales = [float(s) for s in args.scales.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"--scales must be a comma-separated list of numbers, got {args.scales!r}") from None
    S = build_scheme(P, args.level)
    E = solve_extremal_affine(moments(P))
    rows = coercivity_probe([u.scaled(s) for s in scales], S, E)
    _emit(probe_csv(rows), args.out, args, manifest)


def cmd_quadrature_report(args, P, manifest):
    E = solve_extremal_affine(moments(P))
    mt = moments(P)
    u = GuilleminPotential(P)
    rows = []
    prev = {}
    for level in range(1, args.max_level + 1):
        S = build_scheme(P, level)
        vals = {
            "volume": S.integrate_interior(lambda X: np.ones(len(X))),
            "boundary_mass": S.integrate_boundary(lambda X: np.ones(len(X))),
            "entropy_uP": eval_F(u, S, E).entropy,
            "boundary_uP": S.integrate_boundary(u),
        }
        for name, v in vals.items():
            delta = v - prev[name] if name in prev else float("nan")
            rows.append([level, name, v, delta])
            prev[name] = v
    del mt
    _emit(_csv_table(["level", "integral", "value", "delta"], rows), args.out, args, manifest)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abreu-kit", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help, potential=False, level=False, fmt=("json", "csv")):
        p = sub.add_parser(name, help=help)
        p.add_argument("--polytope", required=True, help="preset id or polytope JSON file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--threads", type=int, default=1, help="worker threads (default 1: bit-reproducible)")
        p.add_argument("-v", "--verbose", action="store_true")
        if potential:
            p.add_argument("--potential", default="guillemin", help="'guillemin' or potential JSON file")
        if level:
            p.add_argument("--level", type=int, default=4, help="quadrature level")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "validate the Delzant condition")
    add("extremal", cmd_extremal, "print the extremal affine function s, Rbar, theta")
    add("eval", cmd_eval, "evaluate F(u) and its terms", potential=True, level=True)
    p = add("residual", cmd_residual, "Abreu residual on sample points", potential=True, level=True,
            fmt=("csv", "json"))
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p = add("minimize", cmd_minimize, "minimize F over u_P + polynomials")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--start", help="start potential JSON (default u_P)")
    p.add_argument("--coeffs", help="write the minimizer as potential JSON")
    p.add_argument("--grad-tol", type=float, default=1e-7)
    p.add_argument("--max-iter", type=int, default=500)
    p = add("scan-pl", cmd_scan_pl, "scan L over simple PL creases")
    p.add_argument("--angles", type=int, default=None)
    p.add_argument("--offsets", type=int, default=None)
    add("check-46", cmd_facet_margins, "facet margins (n+1)/lambda_i - max s")
    p = add("probe", cmd_probe, "coercivity trace (int u, F) over scalings of a potential",
            potential=True, level=True, fmt=("csv",))
    p.add_argument("--scales", default="1,2,3,4,5,6,7,8,9,10")
    p = add("quadrature-report", cmd_quadrature_report, "per-level test integrals", fmt=("csv",))
    p.add_argument("--max-level", type=int, default=6)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    manifest = []
    t0 = time.perf_counter()
    try:
        P = load_polytope(args.polytope)
        args.func(args, P, manifest)
    except InputError as exc:
        print(f"abreu-kit: input error: {exc}", file=sys.stderr)
        return 2
    except AbreuKitError as exc:
        name = type(exc).__name__
        msg = str(exc)
        if msg.startswith(name + ":"):
            msg = msg[len(name) + 1:].strip()
        print(f"abreu-kit: {name}: {msg}", file=sys.stderr)
        return 1
    _write_manifest(args, manifest, time.perf_counter() - t0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
