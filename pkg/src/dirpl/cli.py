"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 validation, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import warnings
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import InvalidParameterError, NumericWarning, ScenarioError
from .mpm import build_geometry, synthesize_pas, write_pas_csv
from .patterns import AzimuthPattern, PatternSpec, write_pattern_csv
from .plcorr import sweep_curve
from .plotting import save_curve_figure, svg_line_chart
from .scenario_io import CurveFormatError, parse_scenario, read_curve_csv, write_curve_csv

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("dirpl")


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def preset_dir():
    return resources.files("dirpl").joinpath("presets")


def preset_names():
    return sorted(p.name[:-4] for p in preset_dir().iterdir() if p.name.endswith(".ini"))


def resolve_scenario(arg):
    """A scenario argument is a file path or the name of a shipped preset."""
    if os.path.exists(arg):
        return parse_scenario(arg)
    name = arg[:-4] if arg.endswith(".ini") else arg
    if name in preset_names():
        with resources.as_file(preset_dir().joinpath(name + ".ini")) as p:
            return parse_scenario(p)
    raise ScenarioError(f"no such scenario file or preset: {arg}")


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def cmd_run(args):
    scenario = resolve_scenario(args.scenario)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NumericWarning)
        curve = sweep_curve(scenario, workers=args.workers)
    for w in caught:
        log.warning("%s", w.message)
    bad = [r.d for r in curve.rows if not math.isfinite(r.pl_corr)]
    if bad:
        raise NumericFailure(f"non-finite correction at d = {', '.join(f'{d:g}' for d in bad)} m")
    fh, close = _open_out(args.output)
    try:
        write_curve_csv(fh, curve)
    finally:
        if close:
            fh.close()
    if args.figure:
        save_curve_figure(curve, args.figure, title=Path(args.scenario).stem)
    return EXIT_OK


def cmd_plot(args):
    if not args.csv:
        raise UsageError("plot needs at least one CSV file")
    series = []
    for path in args.csv:
        curve = read_curve_csv(path)
        series.append((Path(path).stem, curve.column("d"), curve.column("pl_out")))
    svg = svg_line_chart(series)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return EXIT_OK


def cmd_pattern_dump(args):
    scenario = resolve_scenario(args.scenario)
    spec = scenario.tx if args.side == "tx" else scenario.rx
    fh, close = _open_out(args.output)
    try:
        write_pattern_csv(fh, AzimuthPattern(spec), scenario.n_phi)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_pas_dump(args):
    scenario = resolve_scenario(args.scenario)
    geom = build_geometry(scenario.profile(), args.distance, scenario.gamma)
    if args.omni:
        tx = rx = AzimuthPattern(PatternSpec.omni())
    else:
        tx, rx = AzimuthPattern(scenario.tx), AzimuthPattern(scenario.rx)
    spec = synthesize_pas(geom, tx, rx, scenario.alpha_t, scenario.alpha_r, scenario.n_phi)
    fh, close = _open_out(args.output)
    try:
        write_pas_csv(fh, spec)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_presets(args):
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for name in preset_names():
            (out / f"{name}.ini").write_text(preset_dir().joinpath(name + ".ini").read_text())
    for name in preset_names():
        print(name)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="dirpl", description="Directional mmWave path loss from omnidirectional UMa models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    r = sub.add_parser("run", help="sweep distance and write the path-loss curve CSV")
    r.add_argument("scenario", help="scenario file or preset name")
    r.add_argument("-o", "--output", required=True, help="CSV path, '-' for stdout")
    r.add_argument("--figure", help="also render the curve with matplotlib (png, svg, pdf)")
    r.add_argument("--workers", type=int, default=None, help="evaluate sweep points in parallel")
    r.set_defaults(func=cmd_run)

    pl = sub.add_parser("plot", help="render curve CSVs to an SVG line chart")
    pl.add_argument("csv", nargs="*")
    pl.add_argument("-o", "--output", required=True)
    pl.set_defaults(func=cmd_plot)

    pd = sub.add_parser("pattern-dump", help="write a scenario antenna pattern as CSV")
    pd.add_argument("scenario")
    pd.add_argument("-o", "--output", required=True)
    pd.add_argument("--side", choices=("tx", "rx"), default="tx")
    pd.set_defaults(func=cmd_pattern_dump)

    ps = sub.add_parser("pas-dump", help="write the power azimuth spectrum at one distance")
    ps.add_argument("scenario")
    ps.add_argument("--distance", type=float, required=True, help="Tx-Rx distance in meters")
    ps.add_argument("-o", "--output", required=True)
    ps.add_argument("--omni", action="store_true", help="use omni antennas instead of the scenario patterns")
    ps.set_defaults(func=cmd_pas_dump)

    pr = sub.add_parser("presets", help="list shipped preset scenarios, optionally copying them")
    pr.add_argument("-o", "--output", help="directory to copy the preset files into")
    pr.set_defaults(func=cmd_presets)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s: %(message)s")
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (ScenarioError, InvalidParameterError, CurveFormatError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except NumericFailure as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
