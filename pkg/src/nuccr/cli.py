"""Command-line scans and audits.

Exit codes: 0 on success, 1 when an audit fails, 2 on usage/config errors.
"""

from __future__ import annotations

import argparse
import sys

from .params import default_params, load_config, params_from_dict
from .scan import (DEFAULT_PLANE_GRID, DEFAULT_WAVEPACKET_GRID, ScanRequest,
                   audit, available_quantities, default_budget_quantities,
                   emit_csv, emit_plot, format_csv, run_scan)
from .wavepacket import default_wavepacket_config, wavepacket_from_dict


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nuccr",
        description="Scan and audit quantum-correlation budgets of "
                    "three-flavor neutrino oscillations.")
    parser.add_argument("--model", choices=("plane", "wavepacket"),
                        default="plane",
                        help="plane-wave pure state or wave-packet mixed state")
    parser.add_argument("--flavor", choices=("e", "mu", "tau"), default="e",
                        help="initial neutrino flavor")
    parser.add_argument("--from", dest="start", type=float, default=None,
                        metavar="START",
                        help="axis start (L/E in km/GeV, or x in km)")
    parser.add_argument("--to", dest="stop", type=float, default=None,
                        metavar="STOP", help="axis end")
    parser.add_argument("--points", type=int, default=None,
                        help="number of grid points")
    parser.add_argument("--quantities", default=None,
                        help="comma-separated quantity/budget identifiers "
                             "(default: the model's budgets)")
    parser.add_argument("--config", default=None,
                        help="JSON file with oscillation/wave-packet parameters")
    parser.add_argument("--out", default=None, help="CSV output path")
    parser.add_argument("--plot", default=None,
                        help="vector plot output path (.svg or .pdf)")
    parser.add_argument("--audit", action="store_true",
                        help="run the identity audit instead of a scan")
    parser.add_argument("--list-quantities", action="store_true",
                        help="print the quantity registry for --model and exit")
    return parser


def _build_request(args) -> ScanRequest:
    cfg = load_config(args.config) if args.config else {}
    params = params_from_dict(cfg) if args.config else default_params()
    wp = None
    if args.model == "wavepacket":
        wp = (wavepacket_from_dict(cfg, params) if args.config
              else default_wavepacket_config(params))
    grid = DEFAULT_PLANE_GRID if args.model == "plane" else DEFAULT_WAVEPACKET_GRID
    start = grid[0] if args.start is None else args.start
    stop = grid[1] if args.stop is None else args.stop
    points = grid[2] if args.points is None else args.points
    if args.quantities:
        quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
    else:
        quantities = default_budget_quantities(args.model)
    return ScanRequest(model=args.model, initial_flavor=args.flavor,
                       start=start, stop=stop, points=points,
                       quantities=quantities, params=params, wp=wp)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.list_quantities:
        for qid, desc in available_quantities(args.model).items():
            print(f"{qid:24s} {desc}")
        return 0

    try:
        req = _build_request(args)
    except (ValueError, OSError) as exc:
        print(f"nuccr: error: {exc}", file=sys.stderr)
        return 2

    if args.audit:
        report = audit(req)
        print(report.format_table())
        return 0 if report.passed else 1

    try:
        rows = run_scan(req)
        if args.out:
            emit_csv(rows, args.out)
        if args.plot:
            emit_plot(rows, args.plot, axis_label=req.axis_name)
        if not args.out and not args.plot:
            sys.stdout.write(format_csv(rows))
    except OSError as exc:
        print(f"nuccr: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
