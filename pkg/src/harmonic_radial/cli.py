"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure.  Exact values
are printed as "p/q" strings; only ``--format csv`` emits floats (17
significant digits).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import acceptance
from .conformal import RadialConformalFactor, deform, flatten
from .curvature import CurvatureTraces, h4_point_harmonic, h_coefficients, traces_from_spectrum
from .frobenius import RadialOperator, coerce_lambda, eigenbasis, log_constant
from .lampoly import LAM, LamPoly
from .numeric import IntegrationError, cross_validate_space
from .series import DEFAULT_ORDER, Ring, SeriesError, TruncSeries, series
from .spaces import SpaceError, density_series, jacobi_spectrum, resolve

XVAL_LIMITS = {"f0": 1e-8, "f1": 1e-7, "w0": 1e-8, "w1": 1e-7}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _f(x) -> str:
    return format(float(x), ".17g")


def _lam_json(v):
    return v.to_json() if isinstance(v, LamPoly) else str(v)


def _space_args(p: argparse.ArgumentParser, required: bool = True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--space", help="catalog name, Flat, S<m>, H<m>, CP<n>, HP<n>, OP2, a '~' dual, DR:m,k or custom:<json>")
    src.add_argument("--density-json", "--density", dest="density_json", help="even density series as JSON (needs --m)")


def _lambda_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", help="exact rational eigenvalue, e.g. 5 or -3/2")
    g.add_argument("--symbolic", action="store_true", help="keep the eigenvalue symbolic (default)")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--m", type=int, help="dimension (needed for Flat and custom densities)")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order (default 40)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = _Parser(prog="harmonic-radial", description="Exact radial eigenfunction series on harmonic model spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("density", parents=[common], help="density series Theta~(r)")
    _space_args(p)

    p = sub.add_parser("hcoeffs", parents=[common], help="H2..H8 from curvature traces")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--space")
    g.add_argument("--traces", help="JSON object of trace values")

    p = sub.add_parser("eigen", parents=[common], help="regular/singular eigenfunctions and eigen-1-forms")
    _space_args(p)
    _lambda_args(p)
    p.add_argument("--numeric", action="store_true", help="cross-validate the series with the ODE integrator")
    p.add_argument("--r0", type=float, default=0.5)
    p.add_argument("--r1", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--points", type=int, default=21, help="CSV profile grid size")

    p = sub.add_parser("logconst", parents=[common], help="log coefficient C(M) of the singular solution")
    _space_args(p)
    _lambda_args(p)

    p = sub.add_parser("deform", parents=[common], help="radial conformal deformation")
    p.add_argument("--space", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--phi", help="even series phi with phi(0)=0 as JSON, or {\"phi\": ..., \"scale\": \"p/q\"}")
    g.add_argument("--flatten", action="store_true", help="use the flattening factor")
    p.add_argument("--literal", action="store_true", help="with --flatten: phi = -log(Theta~)/(m-1)")

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--list", action="store_true", help="list criteria without running them")
    p.add_argument("--only", help="comma-separated criterion ids")
    return parser


def _space(args):
    if getattr(args, "density_json", None) is not None:
        if args.m is None:
            raise UsageError("--density-json needs --m")
        sp = resolve("custom:" + args.density_json, args.m)
    else:
        sp = resolve(args.space, args.m)
    if args.m is not None and sp.m != args.m:
        raise UsageError(f"--m {args.m} conflicts with {sp.label} (m = {sp.m})")
    return sp


def _lambda(args):
    if args.lam is None:
        return LAM
    return coerce_lambda(args.lam)


def _series_rows(name: str, s: TruncSeries):
    return [(name, p, _f(s[p])) for p in range(s.offset, s.precision)]


def _cmd_density(args):
    sp = _space(args)
    d = density_series(sp, args.order)
    if args.format == "csv":
        return None, [("series", "power", "coefficient")] + _series_rows("theta_tilde", d)
    if args.format == "text":
        return d.pretty(), None
    return {"space": sp.label, "m": sp.m, "order": args.order, "density": d.to_json(), "pretty": d.pretty()}, None


def _cmd_hcoeffs(args):
    out = {}
    if args.traces is not None:
        t = CurvatureTraces.from_json(args.traces)
        out["source"] = "traces"
    else:
        sp = resolve(args.space, args.m)
        t = traces_from_spectrum(jacobi_spectrum(sp))
        out["source"] = sp.label
    h = h_coefficients(t)
    out.update({f"H{2 * (i + 1)}": str(v) for i, v in enumerate(h)})
    if args.traces is not None:
        out["H4_point_harmonic"] = str(h4_point_harmonic(t))
    if args.format == "csv":
        return None, [("name", "value")] + [(k, _f(v)) for k, v in out.items() if k.startswith("H")]
    if args.format == "text":
        return "\n".join(f"{k} = {v}" for k, v in out.items()), None
    return out, None


def _cmd_logconst(args):
    sp = _space(args)
    lam = _lambda(args)
    op = RadialOperator.for_space(sp, lam, max(sp.m, 2))
    c = log_constant(op)
    if args.format == "text":
        return str(c), None
    if args.format == "csv":
        if isinstance(c, LamPoly):
            return None, [("power", "coefficient")] + [(i, _f(v)) for i, v in enumerate(c.c)]
        return None, [("value",), (_f(c),)]
    out = {"space": sp.label, "m": sp.m, "lambda": _lam_json(lam), "logC": _lam_json(c)}
    if isinstance(c, LamPoly):
        out["pretty"] = str(c)
    return out, None


def _profile(basis, r0: float, r1: float, points: int):
    rows = [("branch", "r", "y", "dy")]
    for name in ("f0", "f1", "w0", "w1"):
        f = getattr(basis, name)
        for i in range(points):
            r = r0 + (r1 - r0) * i / max(points - 1, 1)
            if hasattr(f, "derivative_value"):
                y, dy = f.value(r), f.derivative_value(r)
            else:
                y, dy = float(f(r)), float(f.differentiate()(r))
            rows.append((name, _f(r), _f(y), _f(dy)))
    return rows


def _cmd_eigen(args):
    sp = _space(args)
    lam = _lambda(args)
    N = args.order
    basis = eigenbasis(RadialOperator.for_space(sp, lam, N), N)
    if args.format == "csv":
        if isinstance(lam, LamPoly):
            raise UsageError("CSV profiles need a numeric --lambda")
        return None, _profile(basis, args.r0, args.r1, args.points)
    out = {"space": sp.label, "order": N, **basis.to_json()}
    code = 0
    if args.numeric:
        if isinstance(lam, LamPoly):
            raise UsageError("--numeric needs a numeric --lambda")
        rep, used = cross_validate_space(sp, lam, args.r0, args.r1, args.tol, order=N, members=tuple(XVAL_LIMITS))
        xv = rep.to_json()
        xv["series_order"] = used
        xv["passed"] = all(rep.members[k].rel_err <= XVAL_LIMITS[k] for k in XVAL_LIMITS)
        out["cross_validation"] = xv
        code = 0 if xv["passed"] else 2
    if args.format == "text":
        lines = [f"{k}: {v.pretty() if isinstance(v, TruncSeries) else v}" for k, v in (("f0", basis.f0), ("w0", basis.w0))]
        lines.append(f"logC: {basis.logC}")
        return "\n".join(lines), None, code
    return out, None, code


def _parse_phi(text: str, N: int) -> RadialConformalFactor:
    data = json.loads(text)
    scale = 1
    if isinstance(data, dict) and "phi" in data:
        scale = data.get("scale", 1)
        data = data["phi"]
    if isinstance(data, list):
        phi = series(data, order=max(N, len(data) - 1))
    else:
        phi = TruncSeries.from_json(data).to_ring(Ring.QQ)
    return RadialConformalFactor(phi, scale)


def _cmd_deform(args):
    sp = resolve(args.space, args.m)
    N = args.order
    if args.flatten:
        factor = flatten(sp, N, literal=args.literal)
    else:
        if args.literal:
            raise UsageError("--literal only applies with --flatten")
        factor = _parse_phi(args.phi, N)
    d = deform(sp, factor, N)
    if args.format == "csv":
        rows = [("series", "power", "coefficient")]
        rows += _series_rows("phi", factor.phi) + _series_rows("rho_of_r", d.rho_of_r) + _series_rows("theta_tilde", d.theta_tilde)
        return None, rows
    if args.format == "text":
        return d.theta_tilde.pretty(), None
    out = d.to_json()
    out["pretty"] = d.theta_tilde.pretty()
    return out, None


def _cmd_verify(args, stream):
    if args.list:
        for c in sorted(acceptance.CRITERIA, key=lambda c: c.id):
            print(f"{c.id:2d} {c.title}: {c.anchor}", file=stream)
        return 0
    ids = None
    if args.only:
        try:
            ids = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes comma-separated integers")
    return 0 if acceptance.run_all(ids, out=stream) else 2


def _emit(payload, rows, stream):
    if rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        stream.write(buf.getvalue())
    elif isinstance(payload, str):
        stream.write(payload + "\n")
    else:
        stream.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    handlers = {
        "density": _cmd_density,
        "hcoeffs": _cmd_hcoeffs,
        "logconst": _cmd_logconst,
        "eigen": _cmd_eigen,
        "deform": _cmd_deform,
    }
    try:
        args = build_parser().parse_args(argv)
        out_file = open(args.out, "w", encoding="utf-8") if getattr(args, "out", None) else None
        stream = out_file or stdout
        try:
            if args.command == "verify":
                return _cmd_verify(args, stream)
            res = handlers[args.command](args)
            payload, rows, code = res if len(res) == 3 else (*res, 0)
            _emit(payload, rows, stream)
            return code
        finally:
            if out_file:
                out_file.close()
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (SpaceError, SeriesError, IntegrationError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
