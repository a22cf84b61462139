from __future__ import annotations

import datetime as dt
import itertools
from fractions import Fraction

import numpy as np
import pytest

from cds_arbitrage import (
    CdsCurve,
    CdsPosition,
    Direction,
    DiscountCurve,
    DomainError,
    PairedTrade,
    PaymentSchedule,
    RecoverySpec,
    SurvivalCurve,
    bootstrap_hazards,
    cds_mtm,
    cr01,
    discrete_defaultable_annuity,
    dv01,
    fair_spread_discrete,
    paired_trade_mtm,
    three_period_fair_spreads,
    three_period_payoff,
)
from cds_arbitrage.strategy import value_from_quotes

from oracles import brute_force_three_period


class TestThreePeriodPayoff:
    def test_default_at_one_cancels(self):
        assert three_period_payoff(0.03, 0.01, 1, 0.4) == 0

    def test_default_at_two(self):
        assert three_period_payoff(0.03, 0.01, 2, 0.4) == pytest.approx(0.02)

    def test_default_at_three(self):
        assert three_period_payoff(0.03, 0.01, 3, 0.4) == pytest.approx(0.61)

    def test_no_default(self):
        assert three_period_payoff(0.03, 0.01, "never", 0.4) == pytest.approx(0.01)

    def test_exact_arithmetic(self):
        assert three_period_payoff(Fraction(3, 100), Fraction(1, 100), 3, Fraction(2, 5)) == Fraction(61, 100)

    def test_bad_tau(self):
        with pytest.raises(DomainError):
            three_period_payoff(0.03, 0.01, 4, 0.4)


class TestThreePeriodFairSpreads:
    def test_equal_lgd(self):
        s1, s2 = three_period_fair_spreads(0.1, 0.6, 0.6)
        assert s1 == pytest.approx(0.06) and s2 == pytest.approx(0.06)

    def test_zero_intensity(self):
        assert three_period_fair_spreads(0.0, 0.6, 0.6) == (0.0, 0.0)

    def test_unequal_lgd(self):
        s1, s2 = three_period_fair_spreads(0.2, 0.5, 0.8)
        assert s1 == pytest.approx(0.10)
        assert s2 == pytest.approx(0.126667, abs=1e-6)
        assert (s1, s2) == pytest.approx(brute_force_three_period(0.2, 0.5, 0.8), abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            three_period_fair_spreads(1.0, 0.6, 0.6)
        with pytest.raises(DomainError):
            three_period_fair_spreads(0.1, 0.0, 0.6)

    def test_sharper_bound(self):
        for lam, l2, l3 in itertools.product(np.linspace(0.01, 0.95, 20), (0.2, 0.6, 1.0), (0.2, 0.6, 1.0)):
            s1, s2 = three_period_fair_spreads(lam, l2, l3)
            q1, q2 = 1 - lam, (1 - lam) ** 2
            assert s1 <= (1 + q2 / q1) * s2 + 1e-15


class TestPositions:
    def test_notional_nonnegative(self):
        with pytest.raises(DomainError):
            CdsPosition.standard(Direction.LONG_PROTECTION, -1.0, 0.01, 5)

    def test_paired_trade_validation(self):
        short = CdsPosition.standard(Direction.SHORT_PROTECTION, 1e7, 0.01, 5)
        long = CdsPosition.standard(Direction.LONG_PROTECTION, 1e7, 0.005, 10)
        PairedTrade(short, long)
        with pytest.raises(DomainError):
            PairedTrade(long, short)
        with pytest.raises(DomainError):
            PairedTrade(short, CdsPosition.standard(Direction.LONG_PROTECTION, 2e7, 0.005, 10))
        with pytest.raises(DomainError):
            PairedTrade(short, CdsPosition.standard(Direction.LONG_PROTECTION, 1e7, 0.005, 3))

    def test_from_curve_strikes_quotes(self, msft):
        trade = PairedTrade.from_curve(msft, 5, 10)
        assert trade.short_leg.contract_spread == msft.spread_at(5)
        assert trade.long_leg.contract_spread == msft.spread_at(10)
        assert trade.short_leg.maturity == 5.0 and trade.long_leg.maturity == 10.0


class TestMtm:
    def _market(self):
        return DiscountCurve.flat(0.02), SurvivalCurve((2, 5, 10), (0.01, 0.02, 0.03)), RecoverySpec(0.6)

    def test_fair_spread_has_zero_value(self):
        d, q, rec = self._market()
        sched = PaymentSchedule.regular(0, 5)
        fair = fair_spread_discrete(d, q, rec, sched)
        pos = CdsPosition(Direction.LONG_PROTECTION, 1e7, fair, sched, rec)
        assert abs(cds_mtm(pos, d, q)) < 1e-9 * 1e7

    def test_cheap_protection_positive(self):
        d, q, rec = self._market()
        sched = PaymentSchedule.regular(0, 5)
        fair = fair_spread_discrete(d, q, rec, sched)
        pos = CdsPosition(Direction.LONG_PROTECTION, 1e7, fair - 1e-4, sched, rec)
        assert cds_mtm(pos, d, q) > 0

    def test_antisymmetry(self):
        d, q, rec = self._market()
        long = CdsPosition.standard(Direction.LONG_PROTECTION, 1e7, 0.004, 7, recovery=rec)
        short = CdsPosition.standard(Direction.SHORT_PROTECTION, 1e7, 0.004, 7, recovery=rec)
        assert cds_mtm(long, d, q) + cds_mtm(short, d, q) == 0.0

    def test_spec_dollar_example(self, zero_rates, lgd60):
        q = SurvivalCurve.flat(0.01)
        pos = CdsPosition.standard(Direction.LONG_PROTECTION, 1e7, 0.005, 5, recovery=lgd60)
        annuity = (1 - np.exp(-0.05)) / 0.01
        assert cds_mtm(pos, zero_rates, q) == pytest.approx(0.001 * annuity * 1e7, rel=0.01)
        assert cds_mtm(pos, zero_rates, q) == pytest.approx(48_770, rel=0.01)

    def test_paired_trade_zero_at_inception(self, msft, zero_rates):
        trade = PairedTrade.from_curve(msft, 5, 10)
        q = bootstrap_hazards(msft, zero_rates)
        assert abs(paired_trade_mtm(trade, zero_rates, q)) < 1e-9 * 1e7

    def test_microsoft_next_day_tightening(self, msft, zero_rates):
        trade = PairedTrade.from_curve(msft, 5, 10)
        next_day = msft.with_spread(5, msft.spread_at(5) - 10e-4)
        next_day = CdsCurve(dt.date(2008, 12, 4), next_day.entity, next_day.quotes)
        assert value_from_quotes(trade.aged(1 / 365.25), zero_rates, next_day) > 0


class TestSensitivities:
    def test_zero_notional(self, msft, zero_rates):
        trade = PairedTrade.from_curve(msft, 5, 10, notional=0.0)
        assert dv01(trade, zero_rates, msft) == 0.0
        assert cr01(trade, zero_rates, msft) == 0.0

    def test_struck_at_quotes_has_no_rate_risk(self, msft, zero_rates):
        trade = PairedTrade.from_curve(msft, 5, 10)
        assert abs(dv01(trade, zero_rates, msft)) < 1e-6

    def _off_market(self):
        d = DiscountCurve.flat(0.03)
        quotes = CdsCurve.from_spreads("FLAT", [1, 3, 5, 7, 10], [0.012] * 5)
        pos = CdsPosition.standard(Direction.LONG_PROTECTION, 1e7, 0.008, 5)
        return d, quotes, pos

    def test_dv01_matches_central_difference(self):
        d, quotes, pos = self._off_market()
        up = value_from_quotes(pos, d.shifted(0.5e-4), quotes)
        down = value_from_quotes(pos, d.shifted(-0.5e-4), quotes)
        central = up - down
        got = dv01(pos, d, quotes)
        assert np.sign(got) == np.sign(central)
        assert got == pytest.approx(central, rel=0.05)

    def test_cr01_first_order_annuity(self):
        d = DiscountCurve.flat(0.03)
        quotes = CdsCurve.from_spreads("FLAT", [1, 3, 5, 7, 10], [0.012] * 5)
        pos = CdsPosition.standard(Direction.LONG_PROTECTION, 1e7, 0.012, 5)
        q = bootstrap_hazards(quotes, d)
        annuity = discrete_defaultable_annuity(d, q, pos.schedule)
        assert cr01(pos, d, quotes) == pytest.approx(annuity * 1e-4 * 1e7, rel=0.02)

    def test_doubling_bump_doubles(self):
        d, quotes, pos = self._off_market()
        assert dv01(pos, d, quotes, bump_bp=2) == pytest.approx(2 * dv01(pos, d, quotes), rel=0.1)
        assert cr01(pos, d, quotes, bump_bp=2) == pytest.approx(2 * cr01(pos, d, quotes), rel=0.1)

    def test_paired_trade_cr01_dominated_by_long_leg(self, zero_rates):
        quotes = CdsCurve.from_spreads("UP", [1, 2, 3, 5, 7, 10], [40, 50, 60, 70, 80, 90], in_bp=True)
        d = DiscountCurve.flat(0.02)
        trade = PairedTrade.from_curve(quotes, 1, 10)
        trade = PairedTrade(
            trade.short_leg, CdsPosition.standard(Direction.LONG_PROTECTION, 1e7, 0.0085, 10)
        )
        total = cr01(trade, d, quotes)
        long_only = cr01(trade.long_leg, d, quotes)
        assert total > 0
        assert abs(long_only) > abs(cr01(trade.short_leg, d, quotes))
        assert total > 10 * abs(dv01(trade, d, quotes))
