"""Command line entry point: ``cds-aoa scan``, ``cds-aoa replay``, ``cds-aoa synth``.

Exit codes: 0 clean run, 1 anomalies found (only with ``--fail-on-anomaly``),
2 bad input or usage.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .aoa_checks import DEFAULT_PAIRS, Condition
from .curve_model import DiscountCurve
from .errors import CdsAnalyticsError
from .scanner import (
    CurveTable,
    emit_report,
    parse_pairs,
    read_discount_csv,
    read_quotes,
    scan,
    write_plot_data,
)

EXIT_CLEAN, EXIT_ANOMALIES, EXIT_INPUT = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cds-aoa", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="flag CDS curve pairs violating a no-arbitrage condition")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--pairs", default=",".join(f"{a:g}:{b:g}" for a, b in DEFAULT_PAIRS))
    p.add_argument("--condition", default="thm1", choices=["thm1", "thm2", "thm3", "irs"])
    p.add_argument("--discount", type=Path, help="CSV with t_years,discount_factor")
    p.add_argument("--irs", type=Path, help="CSV with T_years,rate_decimal")
    p.add_argument("--t0", type=float, default=0.0, help="IRS curve start T0")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--frequency", type=int, default=4)
    p.add_argument("--exclude", default="", help="comma-separated entity ids left out of MAR stats")
    p.add_argument("--report", type=Path)
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.add_argument("--plot-data", type=Path)
    p.add_argument("--fail-on-anomaly", action="store_true")

    r = sub.add_parser("replay", help="MTM, DV01 and CR01 of a paired trade over a quote history")
    r.add_argument("--input", required=True, type=Path)
    r.add_argument("--entity", required=True)
    r.add_argument("--short", type=float, default=5.0)
    r.add_argument("--long", type=float, default=10.0)
    r.add_argument("--notional", type=float, default=10_000_000.0)
    r.add_argument("--discount", type=Path)
    r.add_argument("--output", required=True, type=Path)

    g = sub.add_parser("synth", help="write a synthetic quote file with planted violations")
    g.add_argument("--output", required=True, type=Path)
    g.add_argument("--manifest", required=True, type=Path)
    g.add_argument("--curves", type=int, default=1000)
    g.add_argument("--violations", type=int, default=37)
    g.add_argument("--seed", type=int, default=None)
    return parser


def _cmd_scan(args) -> int:
    loaded = read_quotes(args.input)
    discount = read_discount_csv(args.discount) if args.discount else None
    irs = None
    if args.irs:
        from .irs_bridge import read_irs_csv

        irs = read_irs_csv(args.irs, args.t0)
    table = CurveTable.from_curves(loaded.curves)
    report = scan(
        table,
        parse_pairs(args.pairs),
        Condition.parse(args.condition),
        discount=discount,
        irs=irs,
        epsilon=args.epsilon,
        frequency=args.frequency,
        exclude=[e.strip() for e in args.exclude.split(",") if e.strip()],
    )
    if args.report:
        emit_report(report, args.format, args.report)
    if args.plot_data:
        write_plot_data(report, table, args.plot_data)
    print(
        f"scanned {report.curves_scanned} curves, {report.total_anomalies} anomalies"
        f" ({len(loaded.rejected)} rows rejected)"
    )
    for label, count in report.by_pair.items():
        print(f"  {label}: {count}")
    if report.total_anomalies and args.fail_on_anomaly:
        return EXIT_ANOMALIES
    return EXIT_CLEAN


def _cmd_replay(args) -> int:
    from .replay import replay_paired_trade, write_replay_csv

    curves = [c for c in read_quotes(args.input).curves if c.entity.entity_id == args.entity]
    if not curves:
        raise CdsAnalyticsError(f"no curves for entity {args.entity!r} in {args.input}")
    discount = read_discount_csv(args.discount) if args.discount else DiscountCurve.flat(0.0)
    rows = replay_paired_trade(curves, args.short, args.long, args.notional, discount)
    write_replay_csv(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output}")
    return EXIT_CLEAN


def _cmd_synth(args) -> int:
    from .synthetic import DEFAULT_SEED, write_synthetic

    seed = DEFAULT_SEED if args.seed is None else args.seed
    write_synthetic(
        args.output, args.manifest, n_curves=args.curves, n_violations=args.violations, seed=seed
    )
    print(f"wrote {args.curves} curves ({args.violations} planted) to {args.output}")
    return EXIT_CLEAN


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_CLEAN
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s"
    )
    handler = {"scan": _cmd_scan, "replay": _cmd_replay, "synth": _cmd_synth}[args.command]
    try:
        return handler(args)
    except (CdsAnalyticsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
