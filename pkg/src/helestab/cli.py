"""Command-line front end.

Subcommands: ``eval``, ``threshold``, ``sweep``, ``simulate``, ``verify`` and
``selftest`` (the Bessel identity checks alone).
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
failure.  CSV files go to ``--out-dir`` together with ``manifest.json``,
which records the command, parameters, version, timestamp and outputs of
every run.  CSV bodies depend only on the inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from typing import Iterable, Sequence

import numpy as np

from . import __version__, evolve, stability, verify
from .oracle import OracleConvergenceError
from .parallel import ordered_map
from .stability import RootFindingError
from .steady import ModelParams, Regime, radial_speed, tw_speed

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

MANIFEST = "manifest.json"


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """17 significant digits; integers and strings pass through."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value) + 0.0, ".17g")


def parse_grid(text: str, *, integer: bool = False) -> list[float]:
    """Parse a grid: ``a,b,c``, ``start:stop:num`` (inclusive linspace),
    ``log:start:stop:num`` or, for integers, ``a..b``.
    """
    text = text.strip()
    values: list[float] = []
    try:
        if text.startswith("log:"):
            lo, hi, num = text[4:].split(":")
            values = [float(v) for v in np.geomspace(float(lo), float(hi), int(num))]
        elif ":" in text:
            lo, hi, num = text.split(":")
            values = [float(v) for v in np.linspace(float(lo), float(hi), int(num))]
        else:
            for item in text.split(","):
                item = item.strip()
                if not item:
                    continue
                if ".." in item:
                    a, b = item.split("..")
                    values += [float(v) for v in range(int(a), int(b) + 1)]
                else:
                    values.append(float(item))
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}: {exc}") from None
    if integer:
        if any(v != int(v) for v in values):
            raise UsageError(f"grid {text!r} must contain integers")
        return [int(v) for v in values]
    return values


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_NONE)
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_outputs(out_dir: str, files: dict[str, str], command: str, params: dict,
                  argv: Sequence[str]) -> list[str]:
    """Write text files and append one entry to the manifest."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, body in files.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(body)
        paths.append(path)
    manifest_path = os.path.join(out_dir, MANIFEST)
    runs = []
    if os.path.exists(manifest_path):
        try:
            with open(manifest_path, encoding="utf-8") as fh:
                runs = json.load(fh).get("runs", [])
        except (OSError, ValueError, AttributeError):
            runs = []
    runs.append({
        "command": command,
        "argv": list(argv),
        "parameters": params,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": sorted(files),
    })
    with open(manifest_path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump({"runs": runs}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


def _params(args) -> ModelParams:
    try:
        return ModelParams(args.g0, args.cb, args.lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _regime_for(formula: str, given: str | None) -> Regime:
    implied = {"f1": Regime.IN_VITRO, "f3": Regime.IN_VITRO,
               "f2": Regime.IN_VIVO, "f4": Regime.IN_VIVO}.get(formula)
    if given is None:
        if implied is None:
            raise UsageError(f"--regime is required for {formula}")
        return implied
    reg = Regime.parse(given)
    if implied is not None and reg is not implied:
        raise UsageError(f"{formula} is the {implied.value} formula, got --regime {given}")
    return reg


# -- eval -------------------------------------------------------------------------

def cmd_eval(args) -> int:
    p = _params(args)
    reg = _regime_for(args.formula, args.regime)
    if args.formula in ("f3", "f4", "speed-radial") and args.radius is None:
        raise UsageError(f"--radius is required for {args.formula}")
    if args.formula == "speed-tw":
        print(f"speed={fmt(tw_speed(p, reg))}")
        return EXIT_OK
    if args.formula == "speed-radial":
        print(f"speed={fmt(radial_speed(p, reg, args.radius))}")
        return EXIT_OK
    if args.l is None:
        raise UsageError(f"--l is required for {args.formula}")
    l = args.l
    if args.formula in ("f3", "f4"):
        if l != int(l):
            raise UsageError("radial wavenumber --l must be an integer")
        l = int(l)
    rep = stability.report(p, args.formula, l, args.radius)
    print(f"rate={fmt(rep.rate)} classification={rep.classification.value}")
    return EXIT_OK


# -- threshold ----------------------------------------------------------------------

def _threshold_row(task: tuple) -> tuple:
    kind, g0, cb, lam, l = task
    p = ModelParams(g0, cb, lam)
    if kind == "L":
        value = stability.threshold_L(p)
    else:
        value = stability.critical_radius(p, l)
    return (lam, l, value, "no" if value is None else "yes")


def cmd_threshold(args) -> int:
    lams = parse_grid(args.lam)
    if not lams:
        raise UsageError("empty --lambda grid")
    if args.kind == "L":
        tasks = [("L", args.g0, args.cb, lam, None) for lam in lams]
    else:
        ls = parse_grid(args.l_list, integer=True)
        if not ls:
            raise UsageError("empty --l-list")
        if any(l < 2 for l in ls):
            raise UsageError("--l-list entries must be >= 2")
        tasks = [("Rstar", args.g0, args.cb, lam, l) for lam in lams for l in ls]
    try:
        [ModelParams(args.g0, args.cb, lam) for lam in lams]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = ordered_map(_threshold_row, tasks)
    body = csv_text(["lambda", "l", "threshold", "found"], rows)
    name = f"{args.prefix}threshold_{args.kind}.csv"
    params = {"kind": args.kind, "g0": args.g0, "cb": args.cb, "lambda": lams,
              "l_list": args.l_list if args.kind == "Rstar" else None}
    for path in write_outputs(args.out_dir, {name: body}, "threshold", params, args.argv):
        print(path)
    return EXIT_OK


# -- sweep ----------------------------------------------------------------------------

def _sweep_row(task: tuple) -> tuple:
    formula, g0, cb, lam, l, R = task
    p = ModelParams(g0, cb, lam)
    return (formula, g0, cb, lam, l, R, stability.growth_rate(p, formula, l, R))


def sweep_rows(formula: str, g0: float, cb: float, lams: list, ls: list, radii: list | None) -> list[tuple]:
    """Rows in lexicographic order of (lambda, l, radius) indices."""
    if formula in ("f1", "f2"):
        tasks = [(formula, g0, cb, lam, l, None) for lam in lams for l in ls]
    else:
        tasks = [(formula, g0, cb, lam, l, R) for lam in lams for l in ls for R in radii]
    return ordered_map(_sweep_row, tasks)


def gnuplot_script(csv_name: str, formula: str, lams: list, ls: list, radial: bool,
                   n_radii: int) -> str:
    """Plot script that reads ``csv_name`` from its own directory."""
    lines = [
        f"# rates from {csv_name}",
        'set datafile separator ","',
        "set key outside right",
        'set ylabel "growth rate"',
        "set xzeroaxis",
    ]
    curves = []
    if radial and n_radii > 1:
        lines.append('set xlabel "R"')
        for lam in lams:
            for l in ls:
                curves.append(f'"{csv_name}" using 6:(($4=={fmt(lam)} && $5=={fmt(l)}) ? $7 : 1/0) '
                              f'with lines title "{formula} lambda={fmt(lam)} l={fmt(l)}"')
    else:
        lines.append('set xlabel "l"')
        for lam in lams:
            curves.append(f'"{csv_name}" using 5:(($4=={fmt(lam)}) ? $7 : 1/0) '
                          f'with linespoints title "{formula} lambda={fmt(lam)}"')
    lines.append("plot " + ", \\\n     ".join(curves))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    radial = args.formula in ("f3", "f4")
    lams = parse_grid(args.lam)
    ls = parse_grid(args.l, integer=radial)
    radii = parse_grid(args.radius) if args.radius is not None else None
    if radial and not radii:
        raise UsageError(f"{args.formula} needs a non-empty --radius grid")
    if not lams or not ls:
        raise UsageError("empty grid")
    try:
        for lam in lams:
            ModelParams(args.g0, args.cb, lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = sweep_rows(args.formula, args.g0, args.cb, lams, ls, radii if radial else None)
    header = ["formula", "g0", "cb", "lambda", "l", "radius", "rate"]
    csv_name = f"{args.prefix}sweep.csv"
    files = {csv_name: csv_text(header, rows)}
    if args.emit_plot == "gnuplot":
        files[f"{args.prefix}sweep.gp"] = gnuplot_script(csv_name, args.formula, lams, ls, radial,
                                                         len(radii) if radii else 0)
    params = {"formula": args.formula, "g0": args.g0, "cb": args.cb, "lambda": args.lam,
              "l": args.l, "radius": args.radius}
    for path in write_outputs(args.out_dir, files, "sweep", params, args.argv):
        print(path)
    return EXIT_OK


# -- simulate -------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    if not args.T > 0:
        raise UsageError("--T must be positive")
    p = _params(args)
    try:
        cfg = evolve.SimConfig(p, args.regime, args.l, args.R0, args.delta0, args.T, dt=args.dt,
                               adaptive_tol=args.adaptive_tol, validity_cap=args.validity_cap,
                               geometry=args.geometry)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    times = parse_grid(args.curve_times) if args.curve_times else [0.0, args.T]
    if any(not 0 <= t <= args.T for t in times):
        raise UsageError("--curve-times must lie in [0, T]")
    if args.ntheta < 8:
        raise UsageError("--ntheta must be >= 8")
    traj = evolve.simulate(cfg)
    traj_rows = [(s.t, s.R, s.delta, s.rate, s.valid) for s in traj]
    curve_rows = []
    for t in times:
        state = evolve.state_at(traj, cfg, t)
        theta, x, y = evolve.boundary_curve(state, cfg.l, args.ntheta)
        curve_rows += [(t, th, xx, yy) for th, xx, yy in zip(theta, x, y)]
    files = {
        f"{args.prefix}trajectory.csv": csv_text(["t", "R", "delta", "rate", "valid"], traj_rows),
        f"{args.prefix}curves.csv": csv_text(["time", "theta", "x", "y"], curve_rows),
    }
    params = {"regime": cfg.regime.value, "g0": args.g0, "cb": args.cb, "lambda": args.lam,
              "l": args.l, "R0": args.R0, "delta0": args.delta0, "T": args.T, "dt": args.dt,
              "adaptive_tol": args.adaptive_tol, "validity_cap": args.validity_cap,
              "geometry": args.geometry, "ntheta": args.ntheta, "curve_times": times}
    for path in write_outputs(args.out_dir, files, "simulate", params, args.argv):
        print(path)
    last = traj[-1]
    print(f"final t={fmt(last.t)} R={fmt(last.R)} delta={fmt(last.delta)} "
          f"growth={fmt(last.delta / args.delta0) if args.delta0 else 'nan'}")
    return EXIT_OK


# -- verify -----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.tolerance is not None and not args.tolerance > 0:
        raise UsageError("--tolerance must be positive")
    results = verify.run_suite(args.suite, args.tolerance)
    for r in results:
        print(r.line())
    ok = verify.all_passed(results)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_selftest(args) -> int:
    args.suite, args.tolerance = "bessel", None
    return cmd_verify(args)


# -- parser -----------------------------------------------------------------------------

def _add_params(sp, lam_help="consumption rate lambda"):
    sp.add_argument("--g0", type=float, required=True, help="proliferation rate G0")
    sp.add_argument("--cb", type=float, required=True, help="background nutrient cB")
    sp.add_argument("--lambda", dest="lam", type=float, required=True, help=lam_help)


def _add_output(sp):
    sp.add_argument("--out-dir", default=".", help="directory for CSV and manifest (default: .)")
    sp.add_argument("--prefix", default="", help="prefix for output file names")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="helestab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate one growth rate or speed")
    sp.add_argument("--formula", required=True,
                    choices=["f1", "f2", "f3", "f4", "speed-tw", "speed-radial"])
    sp.add_argument("--regime", choices=["invitro", "invivo"])
    _add_params(sp)
    sp.add_argument("--l", type=float)
    sp.add_argument("--radius", type=float)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("threshold", help="threshold frequency L or critical radii R*")
    sp.add_argument("--kind", required=True, choices=["L", "Rstar"])
    sp.add_argument("--g0", type=float, required=True)
    sp.add_argument("--cb", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", required=True, help="grid, e.g. 1,2,5 or 1:10:10")
    sp.add_argument("--l-list", default="2", help="wavenumbers for Rstar, e.g. 8,12 or 8..20")
    _add_output(sp)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("sweep", help="rates on a (lambda, l, R) grid")
    sp.add_argument("--formula", required=True, choices=["f1", "f2", "f3", "f4"])
    sp.add_argument("--g0", type=float, required=True)
    sp.add_argument("--cb", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", required=True, help="grid of lambda values")
    sp.add_argument("--l", required=True, help="grid of modes")
    sp.add_argument("--radius", help="grid of radii (f3, f4)")
    sp.add_argument("--emit-plot", choices=["gnuplot"], help="also write a plot script")
    _add_output(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", help="linearised boundary evolution")
    sp.add_argument("--regime", required=True, choices=["invitro", "invivo"])
    _add_params(sp)
    sp.add_argument("--l", type=float, required=True)
    sp.add_argument("--R0", type=float, required=True)
    sp.add_argument("--delta0", type=float, required=True)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--dt", type=float)
    sp.add_argument("--adaptive-tol", type=float)
    sp.add_argument("--validity-cap", type=float, default=evolve.VALIDITY_CAP)
    sp.add_argument("--geometry", choices=["radial", "tw"], default="radial")
    sp.add_argument("--ntheta", type=int, default=256)
    sp.add_argument("--curve-times", help="comma list of times for boundary curves (default 0,T)")
    _add_output(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--suite", choices=["bessel", "oracle", "asymptotes", "all"], default="all")
    sp.add_argument("--tolerance", type=float, help="replace every check's tolerance")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("selftest", help="Bessel identity and quadrature checks")
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    args.argv = argv
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"helestab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RootFindingError, OracleConvergenceError, ArithmeticError) as exc:
        print(f"helestab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"helestab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
