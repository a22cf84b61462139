from __future__ import annotations

import datetime as dt
import math
from fractions import Fraction

import numpy as np
import pytest

from cds_arbitrage import (
    CdsCurve,
    CdsQuote,
    DiscountCurve,
    DomainError,
    EntityMeta,
    ExtrapolationError,
    PaymentSchedule,
    QuoteKind,
    RecoverySpec,
    Tenor,
    discount_factor,
)
from cds_arbitrage.curve_model import year_fraction


class TestTenor:
    def test_decimal_tenors_compare_exactly(self):
        assert Tenor.of(0.5) == Tenor.of("0.5") == Tenor.of(Fraction(1, 2))
        assert Tenor.of(np.float64(7.0)) == Tenor.of(7)

    def test_label(self):
        assert Tenor.of(0.5).label == "0.5"
        assert Tenor.of(10).label == "10"

    @pytest.mark.parametrize("bad", [0, -1, float("nan"), float("inf")])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises((DomainError, ValueError)):
            Tenor.of(bad)


class TestCdsCurve:
    def test_from_spreads_in_bp(self, msft):
        assert msft.spread_at(5) == pytest.approx(0.008953, abs=1e-15)
        assert msft.quotes[5].spread_bp == pytest.approx(89.53)
        assert len(msft.quotes) == 8

    def test_tenors_must_increase(self):
        with pytest.raises(DomainError):
            CdsCurve.from_spreads("X", [1, 1], [0.01, 0.02])

    def test_negative_spread_rejected(self):
        with pytest.raises(DomainError):
            CdsQuote(Tenor.of(1), -0.001)

    def test_mixed_quote_kinds_rejected(self):
        quotes = (CdsQuote(Tenor.of(1), 0.01, QuoteKind.BID), CdsQuote(Tenor.of(2), 0.01, QuoteKind.ASK))
        with pytest.raises(DomainError):
            CdsCurve(dt.date(2020, 1, 1), EntityMeta("X", "X"), quotes)

    def test_tenors_beyond_effective_start(self):
        with pytest.raises(DomainError):
            CdsCurve.from_spreads("X", [1, 2], [0.01, 0.01], effective_start=1.0)

    def test_value_semantics(self, msft):
        bumped = msft.bumped(1e-4)
        assert msft.spread_at(5) == pytest.approx(0.008953)
        assert bumped.spread_at(5) == pytest.approx(0.009053)
        assert msft.with_spread(5, 0.006).spread_at(5) == 0.006

    def test_missing_tenor(self, msft):
        with pytest.raises(KeyError):
            msft.spread_at(6)

    def test_empty_entity_id(self):
        with pytest.raises(DomainError):
            EntityMeta("", "nameless")


class TestDiscountCurve:
    def test_flat_closed_form(self):
        d = DiscountCurve.flat(0.02)
        assert discount_factor(d, 1.0) == pytest.approx(math.exp(-0.02), abs=1e-9)

    def test_unit_at_zero(self):
        d = DiscountCurve.from_zero_rates([1, 5], [0.03, 0.04])
        assert d(0.0) == 1.0

    def test_negative_rate_log_linear(self):
        d = DiscountCurve([1.0], [1.005])
        assert d(0.5) == pytest.approx(1.002497, abs=1e-6)
        assert d(0.5) == pytest.approx(math.sqrt(1.005), abs=1e-15)

    def test_pillars_exact(self):
        times = np.array([0.25, 1, 3, 7])
        factors = np.array([0.999, 0.99, 0.95, 0.85])
        d = DiscountCurve(times, factors)
        np.testing.assert_allclose(d(times), factors, rtol=1e-14)

    def test_sampled_flat_curve_is_exponential(self):
        r = 0.035
        pillars = np.array([0.5, 2, 4, 10])
        d = DiscountCurve(pillars, np.exp(-r * pillars))
        t = np.linspace(0, 10, 57)
        np.testing.assert_allclose(d(t), np.exp(-r * t), rtol=1e-12)

    def test_no_extrapolation(self):
        d = DiscountCurve.flat(0.01, horizon=10)
        with pytest.raises(ExtrapolationError):
            d(10.5)

    def test_invalid_factors(self):
        with pytest.raises(DomainError):
            DiscountCurve([1.0], [0.0])
        with pytest.raises(DomainError):
            DiscountCurve([2.0, 1.0], [0.9, 0.95])

    def test_shift_is_parallel_in_zero_rates(self):
        d = DiscountCurve.from_zero_rates([1, 5, 10], [0.01, 0.02, 0.03])
        s = d.shifted(1e-4)
        t = np.array([1.0, 5.0, 10.0])
        np.testing.assert_allclose(-np.log(s(t)) / t - (-np.log(d(t)) / t), 1e-4, atol=1e-14)

    def test_forward_rate_piecewise(self):
        d = DiscountCurve.from_forward_rates([1, 2], [0.01, 0.03])
        assert d.forward_rate(0.5) == pytest.approx(0.01)
        assert d.forward_rate(1.5) == pytest.approx(0.03)


class TestSchedule:
    def test_regular_quarterly(self):
        s = PaymentSchedule.regular(0.0, 1.0, 4)
        np.testing.assert_allclose(s.as_array(), [0, 0.25, 0.5, 0.75, 1.0])

    def test_front_stub(self):
        s = PaymentSchedule.regular(0.1, 1.0, 4)
        np.testing.assert_allclose(s.as_array(), [0.1, 0.25, 0.5, 0.75, 1.0])

    def test_must_increase(self):
        with pytest.raises(DomainError):
            PaymentSchedule((0.0, 1.0, 1.0))

    def test_aged(self):
        s = PaymentSchedule.regular(0.0, 1.0, 4).aged(0.3)
        np.testing.assert_allclose(s.as_array(), [0.0, 0.2, 0.45, 0.7])
        with pytest.raises(DomainError):
            PaymentSchedule.regular(0.0, 1.0, 4).aged(1.0)


class TestRecovery:
    def test_default_recovery(self):
        assert RecoverySpec.from_recovery().lgd == pytest.approx(0.6)

    def test_bounds(self):
        with pytest.raises(DomainError):
            RecoverySpec(0.0)
        with pytest.raises(DomainError):
            RecoverySpec(1.2)

    def test_stepwise(self):
        r = RecoverySpec.stepwise([2.0, 3.0], [0.5, 0.8])
        np.testing.assert_allclose(r([1.0, 2.0, 2.5, 3.0, 9.0]), [0.5, 0.5, 0.8, 0.8, 0.8])
        assert r.breakpoints == (2.0,)


def test_year_fraction():
    assert year_fraction(dt.date(2008, 12, 3), dt.date(2009, 12, 3)) == pytest.approx(365 / 365.25)
