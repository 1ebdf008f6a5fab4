"""Command-line entry point: ``tensormodes <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 degenerate family, 3 blow-up.
Every file written with ``--out`` gets a ``<file>.manifest.json`` next to it.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import casestudy, dynamics, spectra
from .symtensor import PolynomialInputError, load_polynomial

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_BLOWUP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(x) for x in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _table_text(fmt: str, header, rows) -> str:
    if fmt == "json":
        return _json_text([dict(zip(header, (_jsonable(x) for x in row))) for row in rows])
    return _csv_text(header, rows)


def _jsonable(x):
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x]
    return x


def _digest(path: Optional[str]) -> Optional[str]:
    if not path:
        return None
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _emit(args, text: str, path: Optional[str] = None) -> None:
    """Write ``text`` to ``path`` (plus manifest) or to standard output."""
    path = path or args.out
    if not path:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    flags = {k: _jsonable(v) for k, v in vars(args).items() if k != "func"}
    manifest = {
        "tool": "tensormodes",
        "version": _version(),
        "command": args.command,
        "flags": flags,
        "input_sha256": _digest(getattr(args, "tensor_file", None)),
        "output": Path(path).name,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    Path(str(path) + ".manifest.json").write_text(_json_text(manifest), encoding="utf-8")


def _vector(text: Optional[str], dim: int, name: str) -> np.ndarray:
    if text is None:
        return np.zeros(dim)
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"--{name}: expected comma-separated numbers, got {text!r}") from None
    if len(vals) != dim:
        raise InputError(f"--{name}: expected {dim} components, got {len(vals)}")
    return np.array(vals)


def _family(args) -> casestudy.QuarticFamily:
    if args.family == "higher":
        fam = casestudy.HigherSymmetry(args.beta)
    else:
        if args.alpha is None:
            raise InputError("--alpha is required for --family lower")
        fam = casestudy.LowerSymmetry(args.alpha, args.beta)
    try:
        fam.check()
    except casestudy.InadmissibleFamily as exc:
        raise InputError(str(exc)) from None
    return fam


def _angle_scale(args) -> float:
    return 1.0 / math.pi if args.theta_units == "pi" else 1.0


def _solver_config(args) -> spectra.SolverConfig:
    return spectra.SolverConfig(starts=args.starts, tol=args.tol, dedup_tol=args.dedup_tol, seed=args.seed)


def _report_rows(report: spectra.SpectrumReport):
    m = report.dim
    header = [f"v{i + 1}" for i in range(m)] + ["lambda", "residual", "kind", "morse_index", "ph_index", "multiplicity_one"]
    if m == 2:
        header = ["theta"] + header
    rows = []
    for e in report.eigenpairs:
        c = e.classification
        row = list(e.v) + [e.lam, e.residual, c.label(), c.morse_index, c.ph_index, e.multiplicity_one]
        rows.append(([e.angle] if m == 2 else []) + row)
    return header, rows


def _report_dict(report: spectra.SpectrumReport) -> dict:
    header, rows = _report_rows(report)
    return {
        "dim": report.dim,
        "degree": report.degree,
        "bezout_bound": report.bezout_bound,
        "real_count": report.real_count,
        "eigenspaces": None if report.degenerate_family else report.eigenspaces,
        "degenerate_family": report.degenerate_family,
        "parity_ok": report.parity_ok,
        "index_sum": report.index_sum,
        "chi": report.chi,
        "index_sum_ok": report.index_sum_ok,
        "eigenpairs": [dict(zip(header, (_jsonable(x) for x in row))) for row in rows],
    }


# -- subcommands ---------------------------------------------------------------


def cmd_eigs(args) -> int:
    P = load_polynomial(args.tensor_file)
    report = spectra.find_eigenpairs(P, _solver_config(args))
    header, rows = _report_rows(report)
    csv_text = _csv_text(header, rows)
    json_text = _json_text(_report_dict(report))
    if args.out:
        stem = Path(args.out)
        stem = stem.with_suffix("") if stem.suffix in (".csv", ".json") else stem
        _emit(args, json_text, str(stem) + ".json")
        _emit(args, csv_text, str(stem) + ".csv")
    else:
        sys.stdout.write(json_text if args.format == "json" else csv_text)
    if report.degenerate_family:
        print("degenerate family: the critical set is a continuum; eigenpair list is unreliable", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_check(args) -> int:
    P = load_polynomial(args.tensor_file)
    report = spectra.find_eigenpairs(P, _solver_config(args))
    out = _report_dict(report)
    out["parity"] = "inapplicable" if report.parity_ok is None else report.parity_ok
    out["index_sum_check"] = "inapplicable" if report.index_sum_ok is None else report.index_sum_ok
    _emit(args, _json_text(out))
    if report.degenerate_family:
        print("degenerate family: counting checks are inapplicable", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_simulate(args) -> int:
    P = load_polynomial(args.tensor_file)
    q0 = _vector(args.q0, P.dim, "q0")
    v0 = _vector(args.v0, P.dim, "v0")
    sys_ = dynamics.SecondOrderSystem(P, args.mass)
    header = ["t"] + [f"q{i + 1}" for i in range(P.dim)] + [f"v{i + 1}" for i in range(P.dim)] + ["energy"]
    if not q0.any() and not v0.any():
        # the origin at rest is an equilibrium: the trajectory is one constant row
        _emit(args, _table_text(args.format, header, [[0.0, *q0, *v0, 0.0]]))
        print("energy_drift 0.0")
        return EXIT_OK
    traj = dynamics.integrate(sys_, dynamics.State.at(q0, v0), args.dt, args.t_end)
    idx = list(range(0, len(traj), args.stride))
    if idx[-1] != len(traj) - 1:
        idx.append(len(traj) - 1)
    rows = [[traj.t[i], *traj.q[i], *traj.v[i], traj.energy[i]] for i in idx]
    _emit(args, _table_text(args.format, header, rows))
    print(f"energy_drift {traj.energy_drift!r}")
    if traj.blew_up:
        print(f"blow-up: trajectory truncated at t={traj.blowup_time!r}", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_mode(args) -> int:
    mode = dynamics.ReducedMode(args.alpha, args.p)
    traj = dynamics.integrate_mode(mode, args.y1, args.y2, args.dt, args.t_end)
    idx = list(range(0, len(traj.t), args.stride))
    if idx[-1] != len(traj.t) - 1:
        idx.append(len(traj.t) - 1)
    rows = [[traj.t[i], traj.gamma[i], traj.gammadot[i], traj.psi[i]] for i in idx]
    _emit(args, _table_text(args.format, ["t", "gamma", "gammadot", "psi"], rows))
    print(f"boundedness {dynamics.boundedness(mode).value}")
    if traj.blowup_time is not None:
        print(f"blow-up: trajectory truncated at t={traj.blowup_time!r}", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_restrict(args) -> int:
    if args.samples < 8:
        raise InputError(f"--samples must be at least 8, got {args.samples}")
    prof = casestudy.restrict(_family(args), args.samples)
    k = _angle_scale(args)
    _emit(args, _table_text(args.format, ["theta", "W"], zip(prof.thetas * k, prof.values)))
    return EXIT_OK


def cmd_modes(args) -> int:
    ms = casestudy.critical_angles(_family(args))
    k = _angle_scale(args)
    rows = zip(ms.angles * k, ms.second_derivs, ms.kinds, ms.c_coeffs)
    _emit(args, _table_text(args.format, ["theta", "d2W", "kind", "c_theta"], rows))
    return EXIT_OK


def _parse_range(text: str) -> tuple[float, float, float]:
    try:
        parts = [float(t) for t in text.split(":")]
    except ValueError:
        raise InputError(f"--beta-range: expected lo:hi:step or a single value, got {text!r}") from None
    if len(parts) == 1:
        return parts[0], parts[0], 1.0
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise InputError(f"--beta-range: expected lo:hi:step with lo <= hi and step > 0, got {text!r}")
    return parts[0], parts[1], parts[2]


def cmd_scan(args) -> int:
    rng = _parse_range(args.beta_range)
    try:
        res = casestudy.bifurcation_scan(args.alpha, rng)
    except casestudy.InadmissibleFamily as exc:
        raise InputError(str(exc)) from None
    k = _angle_scale(args)
    width = max(len(a) for a in res.angles)
    header = ["beta", "count"] + [f"theta_{i + 1}" for i in range(width)]
    rows = [[b, n, *(a * k), *([None] * (width - len(a)))] for b, n, a in zip(res.betas, res.counts, res.angles)]
    _emit(args, _table_text(args.format, header, rows))
    for t in res.transitions:
        print(f"transition beta={t:.9f}")
    return EXIT_OK


def cmd_offset(args) -> int:
    res = casestudy.offset_experiment(_family(args), args.theta0, args.offset, args.t_end, args.dt)
    _emit(args, _json_text(res.to_dict()))
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-10, help="eigenpair residual tolerance")
    common.add_argument("--out", default=None, help="output path (default: standard output)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--starts", type=int, default=None)
    solver.add_argument("--dedup-tol", type=float, default=1e-6)

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", choices=["higher", "lower"], required=True)
    family.add_argument("--alpha", type=float, default=None)
    family.add_argument("--beta", type=float, required=True)
    family.add_argument("--theta-units", choices=["rad", "pi"], default="rad")

    parser = argparse.ArgumentParser(prog="tensormodes", description="Higher-order normal modes of homogeneous potentials.")
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigs", parents=[common, solver], help="real unit eigenpairs of a tensor file")
    p.add_argument("tensor_file")
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("check", parents=[common, solver], help="counting and index diagnostics as JSON")
    p.add_argument("tensor_file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", parents=[common], help="integrate q'' = -grad V")
    p.add_argument("tensor_file")
    p.add_argument("--q0", required=True)
    p.add_argument("--v0", default=None)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mode", parents=[common], help="reduced scalar mode equation")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--y1", type=float, default=1.0)
    p.add_argument("--y2", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=cmd_mode)

    p = sub.add_parser("restrict", parents=[common, family], help="W(theta) on the unit circle")
    p.add_argument("--samples", type=int, default=720)
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("modes", parents=[common, family], help="critical angles with stability and c_theta")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("scan", parents=[common], help="mode counts over a beta range (lower family)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta-range", required=True, help="lo:hi:step or a single value")
    p.add_argument("--theta-units", choices=["rad", "pi"], default="rad")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("offset", parents=[common, family], help="release near a mode and classify")
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--offset", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.set_defaults(func=cmd_offset)
    return parser


def _glue_ranges(argv: list[str]) -> list[str]:
    # "--beta-range -0.4:1.5:0.01" would otherwise parse as an unknown flag
    out = []
    it = iter(argv)
    for a in it:
        if a == "--beta-range":
            out.append(f"--beta-range={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _glue_ranges(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are input errors; exit code 2 is reserved for degenerate families
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if getattr(args, "stride", 1) < 1:
        print("error: --stride must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, PolynomialInputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except spectra.ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
