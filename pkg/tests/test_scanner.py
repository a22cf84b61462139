from __future__ import annotations

import csv
import datetime as dt
import json

import numpy as np
import pytest

from cds_arbitrage import (
    CdsCurve,
    Condition,
    CurveTable,
    DiscountCurve,
    DuplicateQuoteError,
    EntityMeta,
    Rating,
    Region,
    SchemaError,
    Sector,
    UsageError,
    aggregate_monthly,
    check_thm1_pair,
    emit_report,
    ingest_csv,
    mar_stats_by_group,
    read_quotes,
    scan,
)
from cds_arbitrage.fixtures import reference_curves, synthetic_manifest, synthetic_quotes_path
from cds_arbitrage.scanner import (
    COLUMNS,
    AnomalyRecord,
    ScanReport,
    parse_pairs,
    read_csv_report,
    write_plot_data,
    write_quotes_csv,
)

HEADER = ",".join(COLUMNS)


def _row(tenor, spread, date="2008-12-03", entity="MSFT", rating="AAA", region="NorthAmerica", sector="NonBanking"):
    return f"{date},{entity},Microsoft,{region},{sector},USD,{rating},Senior,{tenor},{spread},mid"


def _write(tmp_path, rows, name="quotes.csv"):
    path = tmp_path / name
    path.write_text("\n".join([HEADER, *rows]) + "\n")
    return path


class TestIngest:
    def test_single_curve(self, tmp_path):
        spreads = [25, 28, 35, 45, 32, 89.53, 45, 33.55]
        path = _write(tmp_path, [_row(t, s) for t, s in zip([0.5, 1, 2, 3, 4, 5, 7, 10], spreads)])
        curves = ingest_csv(path)
        assert len(curves) == 1
        assert len(curves[0].quotes) == 8
        assert curves[0].spread_at(5) == pytest.approx(0.008953)

    def test_gaps_kept(self, tmp_path):
        curves = ingest_csv(_write(tmp_path, [_row(0.5, 40), _row(5, 80)]))
        assert [float(t) for t in curves[0].tenors] == [0.5, 5.0]
        report = scan(curves)
        assert report.skipped["0.5:1"] == 1 and report.skipped["1:2"] == 1

    def test_malformed_row_rejected(self, tmp_path):
        result = read_quotes(_write(tmp_path, [_row(1, 40), _row(2, "abc"), _row(3, 50)]))
        assert len(result.curves) == 1 and len(result.curves[0].quotes) == 2
        assert [e.line for e in result.rejected] == [3]
        assert "abc" in result.rejected[0].message

    def test_missing_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("as_of,entity_id,tenor_years\n2008-12-03,X,1\n")
        with pytest.raises(SchemaError):
            ingest_csv(path)

    def test_duplicate(self, tmp_path):
        with pytest.raises(DuplicateQuoteError, match=":3"):
            ingest_csv(_write(tmp_path, [_row(1, 40), _row(1, 41)]))

    def test_unknown_categories(self, tmp_path):
        result = read_quotes(_write(tmp_path, [_row(1, 40, rating="B+", region="Mars", sector="Widgets")]))
        entity = result.curves[0].entity
        assert entity.rating is Rating.NOT_RATED
        assert entity.region is Region.OTHER
        assert entity.sector is Sector.NON_BANKING
        assert len(result.warnings) == 2

    def test_roundtrip_writer(self, tmp_path):
        path = tmp_path / "ref.csv"
        write_quotes_csv(reference_curves(), path)
        again = ingest_csv(path)
        assert {c.entity.entity_id for c in again} == {"MSFT", "AIB", "FRE"}
        by_id = {c.entity.entity_id: c for c in again}
        for c in reference_curves():
            assert np.array_equal(by_id[c.entity.entity_id].spreads, c.spreads)


class TestScan:
    def test_reference_fixtures(self, msft, aib):
        report = scan([msft, aib])
        assert [(r.entity.entity_id, r.pair) for r in report.records] == [
            ("MSFT", (5.0, 10.0)),
            ("AIB", (0.5, 1.0)),
        ]
        assert report.records[0].mar == pytest.approx(1.33428, abs=1e-5)

    def test_flat_curves_clean(self):
        curves = [
            CdsCurve.from_spreads(f"F{k}", [0.5, 1, 2, 5, 10], [0.01 * (k + 1)] * 5) for k in range(20)
        ]
        assert scan(curves).total_anomalies == 0

    def test_records_reverify(self):
        curves = ingest_csv(synthetic_quotes_path())
        for r in scan(curves).records:
            assert check_thm1_pair(r.s1, r.pair[0], r.s2, r.pair[1]) is not None
            assert r.mar >= 1 and r.pair[0] < r.pair[1]

    def test_group_counts_sum_to_total(self):
        report = scan(ingest_csv(synthetic_quotes_path()))
        for key in ("by_pair", "by_month", "by_rating", "by_region", "by_sector", "by_currency", "by_seniority"):
            assert sum(getattr(report, key).values()) == report.total_anomalies
        for stats in report.mar_stats.values():
            assert all(s.mean >= 1 for s in stats.values())

    def test_record_order(self, msft, aib, fre):
        report = scan([aib, msft, fre])
        keys = [(r.as_of, r.entity.entity_id, r.pair) for r in report.records]
        assert keys == sorted(keys)

    def test_thm2_needs_discount(self, msft):
        with pytest.raises(UsageError):
            scan([msft], condition="thm2")

    def test_conditions_agree_with_curve_checks(self, msft, aib):
        d = DiscountCurve.flat(0.03)
        for cond in ("thm2", "thm3", "irs"):
            report = scan([msft, aib], pairs=[(0.5, 1), (4, 5), (5, 10)], condition=cond, discount=d)
            assert report.condition is Condition.parse(cond)
            assert {r.pair for r in report.records} >= {(5.0, 10.0), (0.5, 1.0)}

    def test_irs_curve_condition(self, msft):
        from cds_arbitrage import IrsForwardCurve

        irs = IrsForwardCurve(0.0, [0.0, 12.0], [0.02, 0.02])
        report = scan([msft], condition="irs", irs=irs)
        assert [r.pair for r in report.records] == [(5.0, 10.0)]

    def test_epsilon(self):
        curve = CdsCurve.from_spreads("EQ", [1, 2], [0.02, 0.01])
        assert scan([curve], pairs=[(1, 2)]).total_anomalies == 1
        assert scan([curve], pairs=[(1, 2)], epsilon=1e-6).total_anomalies == 0

    def test_table_matches_list(self):
        curves = ingest_csv(synthetic_quotes_path())
        assert scan(CurveTable.from_curves(curves)).records == scan(curves).records

    def test_table_curve_roundtrip(self, msft):
        table = CurveTable.from_curves([msft])
        assert table.curve(0) == msft


class TestAggregation:
    def _record(self, day, mar=1.2, entity="X", pair=(1.0, 2.0), rating=Rating.AAA):
        meta = EntityMeta(entity, entity, rating=rating)
        return AnomalyRecord(day, meta, pair, 0.02, 0.01, mar, Condition.THM1)

    def _report(self, records):
        return ScanReport(Condition.THM1, tuple(records), len(records))

    def test_single_month(self):
        report = self._report([self._record(dt.date(2008, 9, d)) for d in (1, 15, 29)])
        assert aggregate_monthly(report) == [("2008-09", 3, True)]

    def test_window_with_zeros(self):
        report = self._report([self._record(dt.date(2008, 9, 15))])
        series = aggregate_monthly(report, "2007-01", "2010-06")
        assert len(series) == 42
        assert sum(m.count for m in series) == 1
        assert [m.month for m in series if m.roll_month][:2] == ["2007-03", "2007-06"]

    def test_empty(self):
        assert aggregate_monthly(self._report([])) == []

    def test_mar_stats(self):
        report = self._report([self._record(dt.date(2008, 1, 2), 1.2), self._record(dt.date(2008, 1, 3), 1.4)])
        stats = mar_stats_by_group(report, "rating")["AAA"]
        assert stats.count == 2
        assert stats.mean == pytest.approx(1.3)
        assert stats.max == pytest.approx(1.4)

    def test_single_record_group(self):
        report = self._report([self._record(dt.date(2008, 1, 2), 1.7)])
        s = mar_stats_by_group(report, "pair")["1:2"]
        assert s.mean == s.max == 1.7

    def test_outlier_exclusion(self, msft, fre):
        report = scan([msft, fre], exclude=["FRE"])
        assert report.total_anomalies == 2
        everything = mar_stats_by_group(report, "rating", exclude=[])
        assert everything["AAA"].max == pytest.approx(16.53, abs=5e-3)
        trimmed = mar_stats_by_group(report, "rating")
        assert trimmed["AAA"].max == pytest.approx(1.33428, abs=1e-5)

    def test_unknown_key(self):
        with pytest.raises(UsageError):
            mar_stats_by_group(self._report([]), "planet")


class TestReports:
    def test_json_deterministic(self, tmp_path, msft, aib):
        emit_report(scan([msft, aib]), "json", tmp_path / "a.json")
        emit_report(scan([aib, msft]), "json", tmp_path / "b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
        doc = json.loads((tmp_path / "a.json").read_text())
        assert doc["total_anomalies"] == 2
        assert doc["records"][0]["s1_bp"] == 89.53
        assert doc["records"][0]["mar"] == 1.33428

    def test_empty_report(self, tmp_path):
        report = scan([])
        emit_report(report, "json", tmp_path / "e.json")
        emit_report(report, "csv", tmp_path / "e.csv")
        assert json.loads((tmp_path / "e.json").read_text())["total_anomalies"] == 0
        sections = read_csv_report(tmp_path / "e.csv")
        assert sections["records"] == []

    def test_csv_record_count(self, tmp_path):
        report = scan(ingest_csv(synthetic_quotes_path()))
        emit_report(report, "csv", tmp_path / "r.csv")
        sections = read_csv_report(tmp_path / "r.csv")
        assert len(sections["records"]) == 37
        assert sections["records"][0]["s1_bp"].count(".") == 1
        assert len(sections["records"][0]["s1_bp"].split(".")[1]) == 4
        assert len(sections["records"][0]["mar"].split(".")[1]) == 5
        totals = [r for r in sections["summary"] if r["group_key"] == "total"]
        assert totals[0]["count"] == "37"

    def test_bad_format(self, tmp_path):
        with pytest.raises(UsageError):
            emit_report(scan([]), "xml", tmp_path / "r")

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError, match="nope"):
            emit_report(scan([]), "json", tmp_path / "nope" / "r.json")

    def test_plot_data(self, tmp_path, msft, aib):
        table = CurveTable.from_curves([msft, aib])
        written = write_plot_data(scan(table), table, tmp_path / "plots")
        assert len(written) == 2
        rows = list(csv.DictReader(written[0].read_text().splitlines()))
        assert {r["series_id"] for r in rows} == {"points", "hyperbola", "log_points", "log_line"}


def test_parse_pairs():
    assert parse_pairs("0.5:1, 5:10") == ((0.5, 1.0), (5.0, 10.0))
    with pytest.raises(UsageError):
        parse_pairs("2:1")
    with pytest.raises(UsageError):
        parse_pairs("a:b")


def test_manifest_consistency():
    manifest = synthetic_manifest()
    assert manifest["n_curves"] == 1000
    assert len(manifest["records"]) == 37
    assert all(1.05 <= r["mar"] <= 2.0 + 1e-9 for r in manifest["records"])
