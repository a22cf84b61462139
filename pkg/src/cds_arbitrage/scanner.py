"""Anomaly scanning over CDS quote datasets.

Pipeline: :func:`read_quotes` (CSV -> curves) -> :class:`CurveTable`
(columnar spreads) -> :func:`scan` (vectorized pair checks) ->
:class:`ScanReport` -> :func:`emit_report`.

Counts are per (date, entity, pair): an entity inverted on consecutive days
contributes one record per day.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .aoa_checks import (
    DEFAULT_PAIRS,
    Condition,
    hyperbola_plot_data,
    irs_weights,
    thm1_weights,
    thm2_weights,
    thm3_weights,
    violates,
)
from .curve_model import (
    BP,
    CdsCurve,
    CdsQuote,
    DiscountCurve,
    EntityMeta,
    QuoteKind,
    Rating,
    Region,
    Sector,
    Seniority,
    Tenor,
    format_years,
)
from .errors import DomainError, DuplicateQuoteError, SchemaError, UsageError

logger = logging.getLogger(__name__)

COLUMNS = (
    "as_of",
    "entity_id",
    "entity_name",
    "region",
    "sector",
    "currency",
    "rating",
    "seniority",
    "tenor_years",
    "spread_bp",
    "quote_kind",
)
GROUP_KEYS = ("pair", "month", "rating", "region", "sector", "currency", "seniority", "pair_rating")
ROLL_MONTHS = (3, 6, 9, 12)


# --------------------------------------------------------------------------
# ingestion
# --------------------------------------------------------------------------


class RowError(NamedTuple):
    line: int
    message: str


@dataclass
class IngestResult:
    curves: list[CdsCurve]
    rejected: list[RowError] = field(default_factory=list)
    warnings: list[RowError] = field(default_factory=list)


def _norm(text: str) -> str:
    return "".join(ch for ch in text.lower() if ch.isalnum())


_REGIONS = {_norm(r.value): r for r in Region} | {"northamerica": Region.NORTH_AMERICA, "na": Region.NORTH_AMERICA}
_SECTORS = {_norm(s.value): s for s in Sector} | {"bank": Sector.BANKING, "banks": Sector.BANKING}
_RATINGS = {_norm(r.value): r for r in Rating} | {"nr": Rating.NOT_RATED}
_SENIORITIES = {_norm(s.value): s for s in Seniority} | {"sr": Seniority.SENIOR, "sub": Seniority.SUBORDINATED}


def _parse_row(row: dict, line: int, warnings: list[RowError]):
    try:
        as_of = dt.date.fromisoformat(row["as_of"].strip())
    except ValueError:
        raise ValueError(f"bad as_of {row['as_of']!r}") from None
    entity_id = row["entity_id"].strip()
    if not entity_id:
        raise ValueError("empty entity_id")
    region = _REGIONS.get(_norm(row["region"]))
    if region is None:
        warnings.append(RowError(line, f"unknown region {row['region']!r} -> Other"))
        region = Region.OTHER
    sector = _SECTORS.get(_norm(row["sector"]))
    if sector is None:
        warnings.append(RowError(line, f"unknown sector {row['sector']!r} -> NonBanking"))
        sector = Sector.NON_BANKING
    rating = _RATINGS.get(_norm(row["rating"]), Rating.NOT_RATED)
    seniority = _SENIORITIES.get(_norm(row["seniority"]))
    if seniority is None:
        raise ValueError(f"unknown seniority {row['seniority']!r}")
    try:
        tenor = Tenor.of(row["tenor_years"].strip())
    except (ValueError, ZeroDivisionError, DomainError):
        raise ValueError(f"bad tenor_years {row['tenor_years']!r}") from None
    try:
        spread_bp = float(row["spread_bp"])
    except ValueError:
        raise ValueError(f"bad spread_bp {row['spread_bp']!r}") from None
    if not math.isfinite(spread_bp) or spread_bp < 0:
        raise ValueError(f"spread_bp must be finite and >= 0, got {row['spread_bp']!r}")
    kind_text = (row.get("quote_kind") or "mid").strip().lower() or "mid"
    try:
        kind = QuoteKind(kind_text)
    except ValueError:
        raise ValueError(f"bad quote_kind {row['quote_kind']!r}") from None
    entity = EntityMeta(
        entity_id,
        row["entity_name"].strip(),
        region,
        sector,
        row["currency"].strip().upper(),
        rating,
        seniority,
    )
    return as_of, entity, CdsQuote(tenor, spread_bp * BP, kind)


def read_quotes(path: str | Path) -> IngestResult:
    """Parse a quote CSV into curves, collecting line-numbered diagnostics.

    One curve per ``(as_of, entity_id, quote_kind)``. Unparseable rows are
    rejected and the rest load. Tenors are never interpolated.

    Raises
    ------
    SchemaError
        Missing required column.
    DuplicateQuoteError
        Two rows with the same date, entity, quote kind and tenor.
    """
    path = Path(path)
    rejected: list[RowError] = []
    warnings: list[RowError] = []
    groups: dict[tuple, dict[Tenor, tuple[int, EntityMeta, CdsQuote]]] = defaultdict(dict)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in COLUMNS if c != "quote_kind" and c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        for row in reader:
            line = reader.line_num
            try:
                as_of, entity, quote = _parse_row(row, line, warnings)
            except (ValueError, TypeError, AttributeError) as exc:
                rejected.append(RowError(line, str(exc)))
                continue
            key = (as_of, entity.entity_id, quote.quote_kind.value)
            bucket = groups[key]
            if quote.tenor in bucket:
                raise DuplicateQuoteError(
                    f"{path}:{line}: duplicate quote {entity.entity_id} {as_of} {quote.tenor}"
                    f" (first seen on line {bucket[quote.tenor][0]})"
                )
            bucket[quote.tenor] = (line, entity, quote)

    curves = []
    for key in sorted(groups):
        bucket = groups[key]
        tenors = sorted(bucket)
        entity = bucket[tenors[0]][1]
        if any(bucket[t][1] != entity for t in tenors):
            warnings.append(
                RowError(bucket[tenors[0]][0], f"{key[1]} {key[0]}: inconsistent entity attributes")
            )
        curves.append(CdsCurve(key[0], entity, tuple(bucket[t][2] for t in tenors)))
    for err in rejected:
        logger.warning("%s:%d rejected: %s", path, err.line, err.message)
    for err in warnings:
        logger.warning("%s:%d %s", path, err.line, err.message)
    return IngestResult(curves, rejected, warnings)


def ingest_csv(path: str | Path) -> list[CdsCurve]:
    """Curves from a quote CSV; rejected rows are logged and skipped."""
    return read_quotes(path).curves


def write_quotes_csv(curves: Iterable[CdsCurve], path: str | Path) -> None:
    """Write curves in the ingestion schema (spreads in bp, 4 decimals)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for c in curves:
            e = c.entity
            for q in c.quotes:
                writer.writerow(
                    [
                        c.as_of.isoformat(),
                        e.entity_id,
                        e.name,
                        e.region.value,
                        e.sector.value,
                        e.currency,
                        e.rating.value,
                        e.seniority.value,
                        q.tenor.label,
                        f"{q.spread_bp:.4f}",
                        q.quote_kind.value,
                    ]
                )


def read_discount_csv(path: str | Path) -> DiscountCurve:
    """Load ``t_years,discount_factor`` rows (header required)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"t_years", "discount_factor"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise SchemaError(f"{path}: discount CSV needs columns {sorted(need)}")
        rows = sorted((float(r["t_years"]), float(r["discount_factor"])) for r in reader)
    if not rows:
        raise SchemaError(f"{path}: no discount pillars")
    times, factors = zip(*rows)
    return DiscountCurve(times, factors)


# --------------------------------------------------------------------------
# columnar view
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CurveTable:
    """Spreads of many curves on a shared tenor axis; ``NaN`` marks a missing quote."""

    as_of: tuple[dt.date, ...]
    entities: tuple[EntityMeta, ...]
    tenors: np.ndarray
    spreads: np.ndarray
    effective_start: np.ndarray

    @classmethod
    def from_curves(cls, curves: Sequence[CdsCurve]) -> "CurveTable":
        all_tenors = sorted({q.tenor for c in curves for q in c.quotes})
        column = {t: j for j, t in enumerate(all_tenors)}
        spreads = np.full((len(curves), len(all_tenors)), np.nan)
        for i, c in enumerate(curves):
            for q in c.quotes:
                spreads[i, column[q.tenor]] = q.spread
        return cls(
            tuple(c.as_of for c in curves),
            tuple(c.entity for c in curves),
            np.array([float(t) for t in all_tenors]),
            spreads,
            np.array([c.effective_start for c in curves], dtype=float),
        )

    def __len__(self) -> int:
        return self.spreads.shape[0]

    def column(self, tenor) -> int | None:
        hits = np.flatnonzero(np.isclose(self.tenors, float(Tenor.of(tenor)), rtol=0, atol=1e-12))
        return int(hits[0]) if hits.size else None

    def curve(self, i: int) -> CdsCurve:
        row = self.spreads[i]
        keep = ~np.isnan(row)
        return CdsCurve.from_spreads(
            self.entities[i], self.tenors[keep], row[keep], self.as_of[i], self.effective_start[i]
        )

    def tile(self, copies: int) -> "CurveTable":
        """Repeat the table (benchmarking only)."""
        return CurveTable(
            self.as_of * copies,
            self.entities * copies,
            self.tenors,
            np.tile(self.spreads, (copies, 1)),
            np.tile(self.effective_start, copies),
        )


# --------------------------------------------------------------------------
# scanning
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AnomalyRecord:
    as_of: dt.date
    entity: EntityMeta
    pair: tuple[float, float]
    s1: float
    s2: float
    mar: float
    condition: Condition

    @property
    def pair_label(self) -> str:
        return pair_label(self.pair)

    def group(self, key: str) -> str:
        if key == "pair":
            return self.pair_label
        if key == "month":
            return self.as_of.strftime("%Y-%m")
        if key == "pair_rating":
            return f"{self.pair_label}|{self.entity.rating.value}"
        if key == "currency":
            return self.entity.currency
        if key in ("rating", "region", "sector", "seniority"):
            return getattr(self.entity, key).value
        if key == "entity":
            return self.entity.entity_id
        raise UsageError(f"unknown group key {key!r}; choose from {', '.join(GROUP_KEYS)}")


def pair_label(pair: tuple[float, float]) -> str:
    return f"{format_years(pair[0])}:{format_years(pair[1])}"


def parse_pairs(text: str) -> tuple[tuple[float, float], ...]:
    """``"0.5:1,1:2"`` -> ``((0.5, 1.0), (1.0, 2.0))``."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            a, b = (float(x) for x in chunk.split(":"))
        except ValueError:
            raise UsageError(f"bad pair {chunk!r}; expected T1:T2") from None
        if not 0 < a < b:
            raise UsageError(f"pair {chunk!r} must satisfy 0 < T1 < T2")
        pairs.append((a, b))
    if not pairs:
        raise UsageError("no maturity pairs given")
    return tuple(pairs)


class MarStats(NamedTuple):
    count: int
    mean: float
    max: float


class MonthlyCount(NamedTuple):
    month: str
    count: int
    roll_month: bool


@dataclass(frozen=True)
class ScanReport:
    condition: Condition
    records: tuple[AnomalyRecord, ...]
    curves_scanned: int
    pairs: tuple[tuple[float, float], ...] = DEFAULT_PAIRS
    skipped: dict = field(default_factory=dict)
    excluded: tuple[str, ...] = ()
    epsilon: float = 0.0

    @property
    def total_anomalies(self) -> int:
        return len(self.records)

    def counts(self, key: str) -> dict[str, int]:
        return dict(sorted(Counter(r.group(key) for r in self.records).items()))

    by_pair = property(lambda self: self.counts("pair"))
    by_month = property(lambda self: self.counts("month"))
    by_rating = property(lambda self: self.counts("rating"))
    by_region = property(lambda self: self.counts("region"))
    by_sector = property(lambda self: self.counts("sector"))
    by_currency = property(lambda self: self.counts("currency"))
    by_seniority = property(lambda self: self.counts("seniority"))

    @property
    def mar_stats(self) -> dict[str, dict[str, MarStats]]:
        return {key: mar_stats_by_group(self, key) for key in GROUP_KEYS}


def _weights(condition, tenors, t0, discount, irs, frequency):
    if condition is Condition.THM1:
        return thm1_weights(tenors, t0)
    if condition is Condition.IRS and irs is not None:
        from .irs_bridge import phi_integrals

        if abs(irs.start - t0) > 1e-12:
            raise UsageError(f"IRS curve T0={irs.start:g} but curves start at {t0:g}")
        return phi_integrals(irs, tenors)
    if discount is None:
        raise UsageError(f"condition {condition.value} needs a discount curve")
    if condition is Condition.THM2:
        return thm2_weights(discount, tenors, t0)
    if condition is Condition.THM3:
        return thm3_weights(discount, tenors, t0, frequency)
    return irs_weights(discount, tenors, t0)


def scan(
    curves: "Sequence[CdsCurve] | CurveTable",
    pairs: Sequence[tuple[float, float]] = DEFAULT_PAIRS,
    condition: Condition | str = Condition.THM1,
    discount: DiscountCurve | None = None,
    irs=None,
    epsilon: float = 0.0,
    frequency: int = 4,
    exclude: Iterable[str] = (),
) -> ScanReport:
    """Flag every (curve, pair) violating ``condition`` and aggregate the anomalies.

    Parameters
    ----------
    curves
        Curves or a prebuilt :class:`CurveTable`.
    pairs
        Maturity pairs ``(T1, T2)``; curves lacking either tenor are skipped
        for that pair and counted in ``report.skipped``.
    condition
        ``thm1`` needs nothing else; ``thm2``/``thm3`` need ``discount``;
        ``irs`` needs ``irs`` (IRS forward curve) or ``discount``.
    epsilon
        Margin a pair must exceed to count; 0 flags exact equality too.
    exclude
        Entity ids left out of MAR statistics (counts still include them).
    """
    condition = Condition.parse(condition)
    if epsilon < 0:
        raise UsageError("epsilon must be >= 0")
    table = curves if isinstance(curves, CurveTable) else CurveTable.from_curves(list(curves))
    pairs = tuple((float(a), float(b)) for a, b in pairs)
    n = len(table)
    flagged_rows: list[np.ndarray] = []
    flagged_pairs: list[tuple[float, float]] = []
    flagged_values: list[tuple[np.ndarray, np.ndarray]] = []
    skipped: dict[str, int] = {}

    starts = np.unique(table.effective_start) if n else np.array([])
    weights = {
        t0: _weights(condition, table.tenors, float(t0), discount, irs, frequency) for t0 in starts
    }
    for t1, t2 in pairs:
        label = pair_label((t1, t2))
        j1, j2 = table.column(t1), table.column(t2)
        if j1 is None or j2 is None:
            skipped[label] = n
            continue
        s1, s2 = table.spreads[:, j1], table.spreads[:, j2]
        present = ~(np.isnan(s1) | np.isnan(s2))
        skipped[label] = int(n - present.sum())
        if len(starts) == 1:
            w = weights[starts[0]]
            w1, w2 = w[j1], w[j2]
        else:
            w1 = np.array([weights[t][j1] for t in table.effective_start])
            w2 = np.array([weights[t][j2] for t in table.effective_start])
        valid = present & (table.effective_start < t1)
        with np.errstate(invalid="ignore"):
            lhs, rhs = w1 * s1, w2 * s2
            hit = valid & violates(lhs, rhs, epsilon)
        rows = np.flatnonzero(hit)
        flagged_rows.append(rows)
        flagged_pairs.append((t1, t2))
        flagged_values.append((np.broadcast_to(lhs, (n,))[rows], np.broadcast_to(rhs, (n,))[rows]))

    records = []
    for rows, pair, (lhs, rhs) in zip(flagged_rows, flagged_pairs, flagged_values):
        j1, j2 = table.column(pair[0]), table.column(pair[1])
        for i, l, r in zip(rows, lhs, rhs):
            ratio = max(l / r, 1.0) if r > 0 else math.inf
            records.append(
                AnomalyRecord(
                    table.as_of[i],
                    table.entities[i],
                    pair,
                    float(table.spreads[i, j1]),
                    float(table.spreads[i, j2]),
                    float(ratio),
                    condition,
                )
            )
    records.sort(key=lambda r: (r.as_of, r.entity.entity_id, r.pair))
    return ScanReport(
        condition, tuple(records), n, pairs, skipped, tuple(sorted(set(exclude))), epsilon
    )


# --------------------------------------------------------------------------
# aggregation
# --------------------------------------------------------------------------


def _month_index(month: str) -> int:
    year, mon = month.split("-")
    return int(year) * 12 + int(mon) - 1


def aggregate_monthly(
    report: ScanReport, start: str | None = None, end: str | None = None
) -> list[MonthlyCount]:
    """Anomaly counts per calendar month, zeros included, roll months tagged.

    The span defaults to the first..last month with a record; ``start`` and
    ``end`` (``"YYYY-MM"``) widen or fix it.
    """
    counts = report.counts("month")
    months = list(counts)
    if start is None and not months:
        return []
    lo = _month_index(start) if start else _month_index(months[0])
    hi = _month_index(end) if end else _month_index(months[-1])
    if start is None and months:
        lo = min(lo, _month_index(months[0]))
    if end is None and months:
        hi = max(hi, _month_index(months[-1]))
    out = []
    for idx in range(lo, hi + 1):
        label = f"{idx // 12:04d}-{idx % 12 + 1:02d}"
        out.append(MonthlyCount(label, counts.get(label, 0), idx % 12 + 1 in ROLL_MONTHS))
    return out


def mar_stats_by_group(
    report: ScanReport, group_key: str, exclude: Iterable[str] | None = None
) -> dict[str, MarStats]:
    """Count, mean and max MAR per group, leaving out ``exclude`` entity ids."""
    if group_key not in GROUP_KEYS and group_key != "entity":
        raise UsageError(f"unknown group key {group_key!r}; choose from {', '.join(GROUP_KEYS)}")
    skip = set(report.excluded if exclude is None else exclude)
    buckets: dict[str, list[float]] = defaultdict(list)
    for r in report.records:
        if r.entity.entity_id in skip:
            continue
        buckets[r.group(group_key)].append(r.mar)
    return {
        k: MarStats(len(v), float(np.mean(v)), float(np.max(v))) for k, v in sorted(buckets.items())
    }


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

_RECORD_FIELDS = (
    "as_of",
    "entity_id",
    "entity_name",
    "region",
    "sector",
    "currency",
    "rating",
    "seniority",
    "t1",
    "t2",
    "s1_bp",
    "s2_bp",
    "mar",
    "condition",
)


def _bp(x: float) -> str:
    return f"{x / BP:.4f}"


def _mar(x: float) -> str:
    return f"{x:.5f}"


def _record_row(r: AnomalyRecord) -> list[str]:
    e = r.entity
    return [
        r.as_of.isoformat(),
        e.entity_id,
        e.name,
        e.region.value,
        e.sector.value,
        e.currency,
        e.rating.value,
        e.seniority.value,
        format_years(r.pair[0]),
        format_years(r.pair[1]),
        _bp(r.s1),
        _bp(r.s2),
        _mar(r.mar),
        r.condition.value,
    ]


def report_dict(report: ScanReport) -> dict:
    """JSON-ready view with fixed rounding (bp to 4 decimals, MAR to 5)."""
    rows = [dict(zip(_RECORD_FIELDS, _record_row(r))) for r in report.records]
    for row in rows:
        for k in ("s1_bp", "s2_bp", "mar"):
            row[k] = float(row[k])
    return {
        "condition": report.condition.value,
        "epsilon": report.epsilon,
        "pairs": [pair_label(p) for p in report.pairs],
        "curves_scanned": report.curves_scanned,
        "total_anomalies": report.total_anomalies,
        "skipped_curves_by_pair": dict(sorted(report.skipped.items())),
        "counts": {
            f"by_{key}": report.counts(key)
            for key in ("pair", "month", "rating", "region", "sector", "currency", "seniority")
        },
        "mar_stats": {
            key: {
                g: {"count": s.count, "mean": float(_mar(s.mean)), "max": float(_mar(s.max))}
                for g, s in stats.items()
            }
            for key, stats in report.mar_stats.items()
        },
        "mar_excluded_entities": list(report.excluded),
        "monthly": [m._asdict() for m in aggregate_monthly(report)],
        "records": rows,
    }


def emit_report(report: ScanReport, format: str, path: str | Path) -> None:
    """Write a byte-stable JSON or sectioned CSV report.

    The CSV holds a ``# records`` section (one row per anomaly) followed by
    a ``# summary`` section (counts and MAR statistics per group).
    """
    path = Path(path)
    try:
        if format == "json":
            text = json.dumps(report_dict(report), sort_keys=True, indent=2) + "\n"
            path.write_text(text)
        elif format == "csv":
            with path.open("w", newline="") as fh:
                _write_csv_report(report, fh)
        else:
            raise UsageError(f"unknown report format {format!r}; use json or csv")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


def _write_csv_report(report: ScanReport, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    fh.write("# records\n")
    writer.writerow(_RECORD_FIELDS)
    for r in report.records:
        writer.writerow(_record_row(r))
    fh.write("# summary\n")
    writer.writerow(["group_key", "group", "count", "mean_mar", "max_mar"])
    writer.writerow(["total", "all", report.total_anomalies, "", ""])
    writer.writerow(["curves_scanned", "all", report.curves_scanned, "", ""])
    for key in GROUP_KEYS:
        stats = mar_stats_by_group(report, key)
        for group, count in report.counts(key).items():
            s = stats.get(group)
            writer.writerow(
                [key, group, count, _mar(s.mean) if s else "", _mar(s.max) if s else ""]
            )
    for m in aggregate_monthly(report):
        writer.writerow(["monthly", m.month, m.count, "", "roll" if m.roll_month else ""])


def read_csv_report(path: str | Path) -> dict[str, list[dict]]:
    """Split a CSV report back into its sections."""
    sections: dict[str, list[str]] = {}
    current = None
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            current = line[2:].strip()
            sections[current] = []
        elif current is not None:
            sections[current].append(line)
    return {name: list(csv.DictReader(lines)) for name, lines in sections.items()}


def write_plot_data(report: ScanReport, table: CurveTable, directory: str | Path) -> list[Path]:
    """One hyperbola CSV per anomaly, anchored at the record's short tenor.

    Linear and log-log series go into the same file, told apart by
    ``series_id``.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lookup = {(d, e.entity_id): i for i, (d, e) in enumerate(zip(table.as_of, table.entities))}
    written = []
    for r in report.records:
        curve = table.curve(lookup[(r.as_of, r.entity.entity_id)])
        linear = hyperbola_plot_data(curve, r.pair[0])
        loglog = hyperbola_plot_data(curve, r.pair[0], log_log=True)
        name = f"{r.as_of.isoformat()}_{r.entity.entity_id}_{r.pair_label.replace(':', '-')}.csv"
        target = directory / name
        with target.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "s", "series_id", "violation_flag"])
            for plot in (linear, loglog):
                for x, s, series, flag in plot.rows():
                    writer.writerow([f"{x:.8f}", f"{s:.8f}", series, flag])
        written.append(target)
    return written
