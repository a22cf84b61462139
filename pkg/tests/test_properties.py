from __future__ import annotations

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cds_arbitrage import (
    CdsCurve,
    DiscountCurve,
    SurvivalCurve,
    bootstrap_hazards,
    check_thm1_curve,
    check_thm1_pair,
    check_thm2_curve,
    check_thm3_curve,
    scan,
    three_period_payoff,
)
from cds_arbitrage.survival import model_spreads

TENORS = (0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0)

spread = st.floats(1e-4, 0.2, allow_nan=False)
spread_curves = st.lists(spread, min_size=len(TENORS), max_size=len(TENORS))


def _curve(spreads):
    return CdsCurve.from_spreads("P", TENORS, spreads)


@settings(max_examples=25, deadline=None)
@given(
    hazards=st.lists(st.floats(-0.5, 2.0), min_size=4, max_size=4),
    rate=st.floats(-0.02, 0.10),
)
def test_bootstrap_roundtrip(hazards, rate):
    tenors = (1.0, 3.0, 5.0, 10.0)
    discount = DiscountCurve.flat(rate)
    truth = SurvivalCurve(tenors, hazards)
    quotes = model_spreads(truth, tenors, discount)
    assume(np.all(quotes >= 0) and np.all(np.isfinite(quotes)))
    fitted = bootstrap_hazards(CdsCurve.from_spreads("RT", tenors, quotes), discount)
    np.testing.assert_allclose(model_spreads(fitted, tenors, discount), quotes, rtol=0, atol=1e-9)
    assert fitted.pathological == any(h < 0 for h in fitted.hazards)


@settings(max_examples=100, deadline=None)
@given(spreads=spread_curves, scale=st.floats(0.01, 100.0))
def test_scale_covariance(spreads, scale):
    base = check_thm1_curve(_curve(spreads), "all")
    scaled = check_thm1_curve(_curve(np.asarray(spreads) * scale), "all")
    # rescaling can only move exact ties, which the relative slack absorbs
    assert base.pairs() == scaled.pairs()


@settings(max_examples=50, deadline=None)
@given(spreads=spread_curves)
def test_conditions_coincide_at_zero_rates(spreads):
    curve = _curve(spreads)
    zero = DiscountCurve.flat(0.0)
    expected = check_thm1_curve(curve, "all").pairs()
    assert check_thm2_curve(curve, zero).pairs() == expected
    assert check_thm3_curve(curve, zero).pairs() == expected


@settings(max_examples=50, deadline=None)
@given(spreads=spread_curves, rates=st.lists(st.floats(0.0, 0.08), min_size=3, max_size=3))
def test_thm2_clean_implies_thm1_clean(spreads, rates):
    curve = _curve(spreads)
    discount = DiscountCurve.from_zero_rates([2.0, 5.0, 30.0], sorted(rates))
    if check_thm2_curve(curve, discount).clean:
        assert check_thm1_curve(curve, "all").clean


@given(s1=spread, t1=st.floats(0.25, 10.0), s2=spread, gap=st.floats(0.25, 20.0))
def test_thm1_violation_needs_inverted_spreads(s1, t1, s2, gap):
    if check_thm1_pair(s1, t1, s2, t1 + gap) is not None:
        assert s1 >= s2


@given(spreads=spread_curves)
def test_scan_agrees_with_curve_check(spreads):
    curve = _curve(spreads)
    pairs = list(zip(TENORS, TENORS[1:]))
    report = scan([curve], pairs=pairs)
    assert [r.pair for r in report.records] == check_thm1_curve(curve, pairs).pairs()


@given(
    times=st.lists(st.floats(0.05, 30.0), min_size=1, max_size=8, unique=True),
    rates=st.lists(st.floats(-0.03, 0.15), min_size=8, max_size=8),
)
def test_discount_pillars_exact(times, rates):
    times = sorted(times)
    factors = np.exp(-np.asarray(rates[: len(times)]) * np.asarray(times))
    curve = DiscountCurve(times, factors)
    np.testing.assert_array_equal(curve(np.asarray(times)), factors)


@given(
    s2=st.floats(0.0, 0.5),
    excess=st.floats(0.0, 0.5),
    r3=st.floats(0.0, 0.999),
    tau=st.sampled_from([1, 2, 3, "never"]),
)
def test_payoff_nonnegative_when_s1_covers_two_s2(s2, excess, r3, tau):
    s1 = 2 * s2 + excess
    payoff = three_period_payoff(s1, s2, tau, r3)
    assert payoff >= -1e-15
    if tau == 3:
        assert payoff > 0
