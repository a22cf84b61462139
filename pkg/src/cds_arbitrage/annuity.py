"""Standardized risk-free annuities, defaultable annuities and IRS fair rates.

Continuous annuities use a composite trapezoid rule at a daily step whose mesh
always contains the discount pillars, hazard-segment ends, LGD jumps and the
requested maturities. Evaluating several maturities in one call reuses one
mesh, so the values are nested partial sums of the same weights.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple, Sequence

import numpy as np

from ._numerics import DAY, mesh, trapezoid
from .curve_model import DiscountCurve, PaymentSchedule, RecoverySpec
from .errors import DomainError

if TYPE_CHECKING:
    from .survival import SurvivalCurve


class LegProfile(NamedTuple):
    """Cumulative leg integrals from ``start`` to each maturity."""

    maturities: np.ndarray
    annuity: np.ndarray
    defaultable_annuity: np.ndarray | None
    protection: np.ndarray | None


def _validate_span(start: float, maturities: np.ndarray) -> None:
    if start < 0:
        raise DomainError("start must be >= 0")
    if np.any(maturities <= start):
        raise DomainError(f"maturities must exceed start {start:g}")


def leg_profile(
    discount: DiscountCurve,
    start: float,
    maturities: Sequence[float],
    survival: "SurvivalCurve | None" = None,
    recovery: RecoverySpec | None = None,
    step: float = DAY,
    knots: Sequence[float] = (),
) -> LegProfile:
    """Trapezoid integrals of ``P``, ``P q`` and ``L λ q P`` on one shared mesh.

    The protection column is only filled when both ``survival`` and
    ``recovery`` are given. ``λ`` and piecewise-constant ``L`` are taken on
    each sub-interval's midpoint, so jumps at knots are never smeared.
    """
    mats = np.atleast_1d(np.asarray(maturities, dtype=float))
    _validate_span(start, mats)
    all_knots = [*discount.pillar_times, *mats, *knots]
    if survival is not None:
        all_knots.extend(survival.ends)
    if recovery is not None:
        all_knots.extend(recovery.breakpoints)
    left, right = mesh(start, float(mats.max()), all_knots, step)
    p_left, p_right = discount(left), discount(right)
    idx = np.searchsorted(right, mats)

    annuity = np.cumsum(trapezoid(left, right, p_left, p_right))[idx]
    if survival is None:
        return LegProfile(mats, annuity, None, None)

    pq_left = p_left * survival.survival_prob(left)
    pq_right = p_right * survival.survival_prob(right)
    defaultable = np.cumsum(trapezoid(left, right, pq_left, pq_right))[idx]
    if recovery is None:
        return LegProfile(mats, annuity, defaultable, None)

    mid = 0.5 * (left + right)
    hazard = survival.hazard_at(mid)
    if recovery.piecewise_constant:
        lgd_left = lgd_right = recovery(mid)
    else:
        lgd_left, lgd_right = recovery(left), recovery(right)
    protection = np.cumsum(
        trapezoid(left, right, hazard * lgd_left * pq_left, hazard * lgd_right * pq_right)
    )[idx]
    return LegProfile(mats, annuity, defaultable, protection)


def standardized_annuity(
    discount: DiscountCurve, start: float, end: float, step: float = DAY
) -> float:
    """Present value of paying rate 1 continuously on ``[start, end]``.

    Parameters
    ----------
    discount : DiscountCurve
        Risk-free curve covering ``end``.
    start, end : float
        Year offsets with ``start < end``.
    step : float
        Maximum trapezoid spacing, one day by default.

    Returns
    -------
    float
        ``∫ P(0,t) dt`` over the interval; strictly positive.
    """
    if end <= start:
        raise DomainError(f"annuity needs end > start, got [{start:g}, {end:g}]")
    return float(leg_profile(discount, start, [end], step=step).annuity[0])


def defaultable_annuity(
    discount: DiscountCurve,
    survival: "SurvivalCurve",
    start: float,
    end: float,
    step: float = DAY,
) -> float:
    """Survival-weighted annuity ``∫ P(0,t) q(t) dt`` (the premium-leg divisor)."""
    if end <= start:
        raise DomainError(f"annuity needs end > start, got [{start:g}, {end:g}]")
    return float(leg_profile(discount, start, [end], survival, step=step).defaultable_annuity[0])


def discrete_annuity(discount: DiscountCurve, schedule: PaymentSchedule) -> float:
    """``Σ (T_i - T_{i-1}) P(0, T_i)`` over the schedule."""
    dates = schedule.as_array()
    return float(np.sum(np.diff(dates) * discount(dates[1:])))


def discrete_defaultable_annuity(
    discount: DiscountCurve,
    survival: "SurvivalCurve",
    schedule: PaymentSchedule,
    accrued_on_default: bool = True,
) -> float:
    """Premium-leg annuity for discretely paid fees.

    With ``accrued_on_default`` (the default) the fee for a period accrues up
    to the default time, giving ``Σ (Q(T_i) - Q(T_{i-1})) P(0, T_i)`` with
    ``Q(T) = E[T ∧ τ] = ∫_0^T q``. Without it, the full period fee is owed
    whenever the name survives to the period start:
    ``Σ (T_i - T_{i-1}) q(T_{i-1}) P(0, T_i)``.
    """
    dates = schedule.as_array()
    pay = discount(dates[1:])
    if accrued_on_default:
        weights = np.diff(survival.integrated_survival(dates))
    else:
        weights = np.diff(dates) * survival.survival_prob(dates[:-1])
    return float(np.sum(weights * pay))


def irs_fair_rates(
    discount: DiscountCurve, start: float, maturities: Sequence[float], step: float = DAY
) -> np.ndarray:
    """Fair rates of continuously exchanged swaps on ``[start, T]`` for each ``T``.

    ``T == start`` returns the instantaneous forward at ``start`` from a
    one-sided difference of ``log P`` with spacing ``step``.
    """
    mats = np.atleast_1d(np.asarray(maturities, dtype=float))
    if np.any(mats < start):
        raise DomainError("swap maturities must be >= start")
    out = np.empty_like(mats)
    at_start = mats <= start
    if np.any(at_start):
        out[at_start] = -(discount.log_discount(start + step) - discount.log_discount(start)) / step
    later = ~at_start
    if np.any(later):
        profile = leg_profile(discount, start, mats[later], step=step)
        out[later] = (discount(start) - discount(mats[later])) / profile.annuity
    return out


def irs_fair_rate(discount: DiscountCurve, start: float, end: float, step: float = DAY) -> float:
    """``I_0(T0, T) = (P(0,T0) - P(0,T)) / A_0(T0, T)``; forward-rate limit at ``T = T0``."""
    return float(irs_fair_rates(discount, start, [end], step)[0])
