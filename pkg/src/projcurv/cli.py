"""Command-line interface: ``projcurv {total,spectrum,bounds,classify,verify}``.

Exit codes: 0 success, 2 input error, 3 numerical failure (or failed checks
for ``verify``).
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
from . import integrator as itg
from .errors import InputError, NumericalError, ProjcurvError
from .polynomial import HomogeneousPolynomial, loads, parse_text, to_json_dict, to_text
from .topology import (BettiVector, all_checks, classify_degree, degree_interval,
                       gysin_transfer, hypersurface_betti)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
MIN_SAMPLES = 100

log = logging.getLogger("projcurv")


# -- input ------------------------------------------------------------------------------

def load_polynomial(args) -> HomogeneousPolynomial:
    if bool(args.poly) == bool(args.input):
        raise InputError("give exactly one of --poly or --input")
    num_vars = None if args.ambient_dim is None else args.ambient_dim + 1
    if args.poly:
        return parse_text(args.poly, num_vars)
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc
    F = loads(text)
    if num_vars is not None and F.num_vars != num_vars:
        raise InputError(f"polynomial has {F.num_vars} variables, --ambient-dim implies {num_vars}")
    return F


def _threads(args) -> int:
    return itg.default_threads() if args.threads is None else max(1, args.threads)


def _emit(report, args):
    fmt = getattr(args, "format", "json")
    if fmt == "csv":
        flat = {k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in report.items()}
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(flat))
        w.writeheader()
        w.writerow(flat)
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, default=_json_default) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not serializable: {type(o)}")


# -- commands -----------------------------------------------------------------------------

def cmd_total(args) -> int:
    F = load_polynomial(args)
    if args.samples < MIN_SAMPLES:
        raise InputError(f"--samples must be at least {MIN_SAMPLES}")
    method = args.method or itg.default_method(F)
    t0 = time.perf_counter()
    est = itg.estimate(F, method, args.samples, args.seed, _threads(args), args.deterministic)
    report = {
        "schema_version": SCHEMA_VERSION,
        "polynomial": to_text(F),
        "polynomial_json": to_json_dict(F),
        "degree": F.degree,
        "ambient_dim": F.num_vars - 1,
        "method": method,
        "T": est.value,
        "std_error": est.std_error,
        "samples": est.n_samples,
        "rejected_fraction": est.rejected_fraction,
        "seed": est.seed,
        "unitary_rotation": est.rotation,
        "deterministic": args.deterministic,
        "error_model": est.error_model,
        "warning": est.warning,
        "wall_time": time.perf_counter() - t0,
    }
    _emit(report, args)
    return EXIT_OK


def _parse_point(text: str, n: int) -> np.ndarray:
    try:
        vals = [complex(tok.strip().replace("i", "j")) for tok in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse point {text!r}") from exc
    if len(vals) != n:
        raise InputError(f"point needs {n} coordinates")
    z = np.array(vals)
    if np.linalg.norm(z) == 0:
        raise InputError("zero vector is not a point")
    return z / np.linalg.norm(z)


def cmd_spectrum(args) -> int:
    from .spectrum import frames_at, principal_spectrum, rotate_normal
    from .verification import random_points
    F = load_polynomial(args)
    if args.point:
        z = _parse_point(args.point, F.num_vars)
    else:
        z = random_points(F, 1, args.seed)[0]
    fr = frames_at(F, z)
    u = rotate_normal(fr.normal_basis[0], args.theta, fr)
    sp = principal_spectrum(F, z, u, fr)
    report = {
        "schema_version": SCHEMA_VERSION,
        "polynomial": to_text(F),
        "point": [[float(c.real), float(c.imag)] for c in z],
        "theta": args.theta,
        "eigenvalues": sp.eigenvalues.tolist(),
        "kappas": sp.kappas.tolist(),
        "holomorphic_sectional_curvatures": (4.0 - 2.0 * sp.kappas ** 2).tolist(),
        "pairing_residual": sp.pairing_residual,
        "fiber_residual": sp.fiber_residual,
        "seed": args.seed,
    }
    _emit(report, args)
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.betti:
        try:
            dims = tuple(int(x) for x in args.betti.split(","))
        except ValueError as exc:
            raise InputError("--betti expects comma-separated integers") from exc
        if len(dims) % 2 == 0:
            raise InputError("a complex manifold has an odd number of Betti numbers")
        b = BettiVector(dims, (len(dims) - 1) // 2)
        degree = None
    else:
        if args.degree is None:
            raise InputError("give --degree or --betti")
        b = hypersurface_betti(args.degree, args.dim)
        degree = args.degree
    lift = gysin_transfer(b)
    report = {"schema_version": SCHEMA_VERSION, "degree": degree, "complex_dim": b.complex_dim,
              "betti": list(b.dims), "lift_betti": list(lift.dims)}
    if degree is not None and b.complex_dim == 1:
        report["interval"] = list(degree_interval(degree))
    if args.total is not None:
        report["checks"] = [{"name": c.name, "passed": c.passed, "lhs": c.lhs, "rhs": c.rhs,
                             "margin": c.margin} for c in all_checks(b, args.total)]
    _emit(report, args)
    return EXIT_OK


def cmd_classify(args) -> int:
    d = classify_degree(args.total)
    lo, hi = degree_interval(d)
    _emit({"schema_version": SCHEMA_VERSION, "T": args.total, "degree": d,
           "interval": [lo, hi]}, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verification import SUITES, run_suite
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    results = run_suite(args.suite, echo=lambda s: print(s, file=sys.stderr, flush=True))
    report = {"schema_version": SCHEMA_VERSION, "suite": args.suite,
              "passed": all(r.passed for r in results),
              "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                            "seconds": r.seconds, "details": r.details} for r in results]}
    _emit(report, args)
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


# -- parser ---------------------------------------------------------------------------------

def _add_poly(p):
    p.add_argument("--poly", help='polynomial text, e.g. "z0^2 + z1^2 + z2^2"')
    p.add_argument("--input", help="polynomial JSON file")
    p.add_argument("--ambient-dim", type=int, default=None,
                   help="N for CP^N (default: inferred from the highest variable index)")


def _add_output(p, formats=True):
    p.add_argument("--out", help="write the report here instead of stdout")
    if formats:
        p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="projcurv",
                                 description="Total absolute curvature of complex projective hypersurfaces.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("total", help="estimate the total absolute curvature")
    _add_poly(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $PROJCURV_THREADS or CPU count)")
    p.add_argument("--method", choices=sorted(itg.ESTIMATORS), default=None)
    p.add_argument("--deterministic", action=argparse.BooleanOptionalAction, default=True,
                   help="exactly rounded reduction (default on)")
    _add_output(p)
    p.set_defaults(func=cmd_total)

    p = sub.add_parser("spectrum", help="lifted shape-operator spectrum at a point")
    _add_poly(p)
    p.add_argument("--point", help="comma-separated homogeneous coordinates, e.g. 1,1i,0")
    p.add_argument("--seed", type=int, default=0, help="seed for a random point")
    p.add_argument("--theta", type=float, default=0.0, help="normal rotation angle")
    _add_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bounds", help="Betti numbers and curvature inequalities")
    p.add_argument("--degree", type=int)
    p.add_argument("--dim", type=int, default=1, help="complex dimension m (1 or 2)")
    p.add_argument("--betti", help="explicit Betti numbers, comma separated")
    p.add_argument("--total", type=float, help="total curvature to check against")
    _add_output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("classify", help="degree of a plane curve from its total curvature")
    p.add_argument("--total", type=float, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="quick")
    _add_output(p, formats=False)
    p.set_defaults(func=cmd_verify, format="json")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"projcurv: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"projcurv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ProjcurvError as exc:
        print(f"projcurv: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
