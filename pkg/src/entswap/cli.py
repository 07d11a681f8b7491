"""Command line for the sweep engines.

Subcommands: timeseries, phasediagram, boundcheck, verify.  Results go to
--out as delimited text (stdout by default); --plot additionally renders a
figure.  Exit codes: 0 success, 1 usage error, 2 failed verification or
bound check, 3 numerical invariant violation.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import sweep
from .errors import (
    BoundViolationError,
    ClosedFormDomainError,
    DomainError,
    EngineMismatchError,
    EntswapError,
)
from .model import SystemConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2
EXIT_NUMERICAL = 3

_DEFAULTS = {
    "theta": math.pi / 4,
    "g_aa": 1.0,
    "g_bb": 1.0,
    "kappa_a": 0.0,
    "kappa_b": 0.0,
    "omega": 1.0,
    "t_final": 2.0 * math.pi,
    "samples": 1000,
    "engine": "closed",
    "seed": 42,
    "out": "-",
}
_FLOAT_KEYS = ("theta", "g_aa", "g_bb", "kappa_a", "kappa_b", "omega", "t_final")
_INT_KEYS = ("samples", "seed")


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 is reserved here for
    # failed physics checks, so usage errors exit 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entswap", description=__doc__.strip().splitlines()[0])
    subparsers = parser.add_subparsers(dest="mode", required=True)
    descriptions = {
        "timeseries": "negativity, energy, and X-state entries on a uniform time grid",
        "phasediagram": "trajectory in the (U, N) plane plus the frontier overlay",
        "boundcheck": "randomized search for negativity-energy bound violations",
        "verify": "cross-validate closed forms, integrators, and measure routes",
    }
    for mode, description in descriptions.items():
        sub = subparsers.add_parser(mode, help=description, description=description)
        sub.add_argument("--config", metavar="FILE",
                         help="key=value file supplying defaults; flags win")
        sub.add_argument("--theta", type=float, help="initial-state angle in radians")
        sub.add_argument("--g-aa", dest="g_aa", type=float, help="coupling of pair aA")
        sub.add_argument("--g-bb", dest="g_bb", type=float, help="coupling of pair bB")
        sub.add_argument("--kappa-a", dest="kappa_a", type=float, help="decay rate of target A")
        sub.add_argument("--kappa-b", dest="kappa_b", type=float, help="decay rate of target B")
        sub.add_argument("--omega", type=float, help="shared transition frequency")
        sub.add_argument("--t-final", dest="t_final", type=float, help="end of the time window")
        sub.add_argument("--samples", type=int, help="number of rows (or random draws)")
        sub.add_argument("--engine", choices=("closed", "exact", "rk4"),
                         help="trajectory engine (default closed)")
        sub.add_argument("--seed", type=int, help="seed for the deterministic generator")
        sub.add_argument("--out", metavar="PATH", help="output file, - for stdout")
        if mode in ("timeseries", "phasediagram", "boundcheck"):
            sub.add_argument("--plot", metavar="PATH",
                             help="also render a figure to this path")
        if mode == "verify":
            sub.add_argument("--quick", action="store_true",
                             help="smaller smoke grids, identical tolerances")
    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in _DEFAULTS:
                raise ValueError(f"{path}:{line_number}: expected <known key>=<value>")
            values[key] = value
    return values


def _resolve_settings(args: argparse.Namespace) -> dict:
    """Layer hard defaults, then the config file, then explicit flags."""
    settings = dict(_DEFAULTS)
    if args.config:
        for key, text in _read_config_file(args.config).items():
            if key in _FLOAT_KEYS:
                settings[key] = float(text)
            elif key in _INT_KEYS:
                settings[key] = int(text)
            elif key == "engine":
                if text not in ("closed", "exact", "rk4"):
                    raise ValueError(f"unknown engine {text!r} in {args.config}")
                settings[key] = text
            else:
                settings[key] = text
    for key in _DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            settings[key] = flag_value
    return settings


def _build_spec(mode: str, settings: dict) -> sweep.SweepSpec:
    config = SystemConfig(
        theta=settings["theta"], g_aa=settings["g_aa"], g_bb=settings["g_bb"],
        kappa_a=settings["kappa_a"], kappa_b=settings["kappa_b"], omega=settings["omega"],
    )
    return sweep.SweepSpec(
        mode=sweep.Mode(mode), config=config, t_final=settings["t_final"],
        samples=settings["samples"], engine=sweep.Engine(settings["engine"]),
        seed=settings["seed"],
    )


def _emit(path: str, writer) -> None:
    if path == "-":
        writer(sys.stdout)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer(fh)


def _dispatch(args: argparse.Namespace, spec: sweep.SweepSpec, settings: dict) -> int:
    out = settings["out"]
    plot_path = getattr(args, "plot", None)

    if spec.mode is sweep.Mode.TIME_SERIES:
        records = sweep.run_time_series(spec)
        _emit(out, lambda fh: sweep.write_records_csv(spec, records, fh))
        if plot_path:
            from . import plotting
            plotting.plot_time_series(records, plot_path)
        return EXIT_OK

    if spec.mode is sweep.Mode.PHASE_DIAGRAM:
        records = sweep.run_phase_diagram(spec)
        _emit(out, lambda fh: sweep.write_records_csv(spec, records, fh))
        if plot_path:
            from . import plotting
            plotting.plot_phase_diagram(records, plot_path)
        return EXIT_OK

    if spec.mode is sweep.Mode.BOUND_CHECK:
        try:
            report = sweep.run_bound_check(spec, keep_points=2000 if plot_path else 0)
        except BoundViolationError as exc:
            if exc.report is not None:
                _emit(out, lambda fh: sweep.write_bound_report(spec, exc.report, fh))
            print(f"entswap: {exc}", file=sys.stderr)
            return EXIT_CHECK_FAILED
        _emit(out, lambda fh: sweep.write_bound_report(spec, report, fh))
        if plot_path:
            from . import plotting
            plotting.plot_bound_scatter(report, plot_path)
        return EXIT_OK

    report = sweep.run_verify(spec, quick=getattr(args, "quick", False))
    _emit(out, lambda fh: sweep.write_verify_report(spec, report, fh))
    if not report.passed:
        failed = ", ".join(row.name for row in report.rows if not row.passed)
        print(f"entswap: verification failed: {failed}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        settings = _resolve_settings(args)
        spec = _build_spec(args.mode, settings)
    except (ValueError, OSError) as exc:
        print(f"entswap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return _dispatch(args, spec, settings)
    except (EngineMismatchError, ClosedFormDomainError, DomainError, ValueError) as exc:
        print(f"entswap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundViolationError as exc:
        print(f"entswap: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (EntswapError, ArithmeticError) as exc:
        print(f"entswap: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
