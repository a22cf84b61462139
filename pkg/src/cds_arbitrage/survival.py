"""Piecewise-constant hazard curves, fair CDS spreads and hazard bootstrapping.

Bootstrapped hazards are returned exactly as solved. A negative hazard is not
an error: it is what an arbitrageable quote set implies, and the curve's
``pathological`` flag records it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._numerics import DAY, bracketed_root, exp_integral
from .annuity import discrete_defaultable_annuity, leg_profile
from .curve_model import (
    DEFAULT_RECOVERY,
    CdsCurve,
    DiscountCurve,
    PaymentSchedule,
    RecoverySpec,
)
from .errors import BootstrapError, DegenerateCurveError, DomainError

logger = logging.getLogger(__name__)

HAZARD_BRACKET = (-5.0, 10.0)
_EDGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SurvivalCurve:
    """Survival probability ``q(t) = exp(-Σ λ_i Δ_i)`` from piecewise-flat hazards.

    Segment ``i`` covers ``(ends[i-1], ends[i]]`` with ``ends[-1] = 0``
    implied. Hazards may be negative, in which case ``q`` can exceed 1; it
    is never clamped.
    """

    ends: tuple[float, ...]
    hazards: tuple[float, ...]

    def __post_init__(self) -> None:
        ends = tuple(float(e) for e in self.ends)
        hazards = tuple(float(h) for h in self.hazards)
        if not ends or len(ends) != len(hazards):
            raise DomainError("need one hazard per segment end")
        if ends[0] <= 0 or any(b <= a for a, b in zip(ends, ends[1:])):
            raise DomainError("segment ends must be positive and strictly increasing")
        if not all(np.isfinite(hazards)):
            raise DomainError("hazards must be finite")
        object.__setattr__(self, "ends", ends)
        object.__setattr__(self, "hazards", hazards)
        starts = np.concatenate([[0.0], ends[:-1]])
        lam = np.asarray(hazards)
        widths = np.asarray(ends) - starts
        cum = np.concatenate([[0.0], np.cumsum(lam * widths)])
        q_start = np.exp(-cum[:-1])
        integ = np.concatenate([[0.0], np.cumsum(q_start * exp_integral(lam, widths))])
        object.__setattr__(self, "_starts", starts)
        object.__setattr__(self, "_lam", lam)
        object.__setattr__(self, "_cum", cum)
        object.__setattr__(self, "_integ", integ)

    @classmethod
    def flat(cls, hazard: float, horizon: float = 30.0) -> "SurvivalCurve":
        return cls((horizon,), (hazard,))

    @classmethod
    def from_period_default_probs(
        cls, ends: Sequence[float], probs: Sequence[float]
    ) -> "SurvivalCurve":
        """Hazards such that ``1 - q(e_i)/q(e_{i-1}) = probs[i]`` on each segment."""
        ends_arr = np.asarray(ends, dtype=float)
        widths = np.diff(np.concatenate([[0.0], ends_arr]))
        return cls(tuple(ends_arr), tuple(-np.log1p(-np.asarray(probs, dtype=float)) / widths))

    @property
    def horizon(self) -> float:
        return self.ends[-1]

    @property
    def pathological(self) -> bool:
        """True iff some hazard is negative or a period default probability exceeds 1."""
        probs = self.period_default_probs()
        return bool(np.any(self._lam < 0) or np.any(probs > 1) or np.any(probs < 0))

    def period_default_probs(self) -> np.ndarray:
        return -np.expm1(-self._lam * (np.asarray(self.ends) - self._starts))

    def _segment(self, t: np.ndarray) -> np.ndarray:
        if np.any(t < 0):
            raise DomainError("survival is defined for t >= 0")
        if np.any(t > self.horizon * (1 + _EDGE_TOL) + _EDGE_TOL):
            raise DomainError(f"t={float(np.max(t)):g} beyond last hazard segment {self.horizon:g}")
        return np.clip(np.searchsorted(self.ends, t, side="left"), 0, len(self.ends) - 1)

    def hazard_at(self, t):
        t = np.asarray(t, dtype=float)
        out = self._lam[self._segment(t)]
        return float(out) if out.ndim == 0 else out

    def cumulative_hazard(self, t):
        t = np.asarray(t, dtype=float)
        i = self._segment(t)
        out = self._cum[i] + self._lam[i] * (t - self._starts[i])
        return float(out) if out.ndim == 0 else out

    def survival_prob(self, t):
        out = np.exp(-np.asarray(self.cumulative_hazard(t)))
        return float(out) if out.ndim == 0 else out

    __call__ = survival_prob

    def integrated_survival(self, t):
        """``Q(t) = ∫_0^t q(u) du`` in closed form."""
        t = np.asarray(t, dtype=float)
        i = self._segment(t)
        q0 = np.exp(-self._cum[i])
        out = self._integ[i] + q0 * exp_integral(self._lam[i], t - self._starts[i])
        return float(out) if out.ndim == 0 else out


class DefaultProbability(NamedTuple):
    value: float
    nonsensical: bool


def survival_prob(curve: SurvivalCurve, t: float) -> float:
    return curve.survival_prob(t)


def conditional_default_prob(curve: SurvivalCurve, t1: float, t2: float) -> DefaultProbability:
    """``1 - q(t2)/q(t1)``, flagged when it leaves ``[0, 1]``."""
    if not t1 < t2:
        raise DomainError(f"need t1 < t2, got {t1:g} >= {t2:g}")
    value = float(-np.expm1(curve.cumulative_hazard(t1) - curve.cumulative_hazard(t2)))
    return DefaultProbability(value, not (0.0 <= value <= 1.0))


# --------------------------------------------------------------------------
# protection leg and fair spreads
# --------------------------------------------------------------------------


def protection_leg(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    recovery: RecoverySpec,
    start: float,
    end: float,
) -> float:
    """``-∫ L(t) P(0,t) dq(t)`` over ``(start, end]``, payment at the default time.

    Exact for piecewise-constant LGD: on each piece between pillars, hazard
    ends and LGD jumps the integrand is a single exponential. A smooth LGD
    function falls back to the daily trapezoid rule.
    """
    if end <= start:
        raise DomainError(f"protection leg needs end > start, got [{start:g}, {end:g}]")
    if not recovery.piecewise_constant:
        return float(leg_profile(discount, start, [end], survival, recovery).protection[0])
    inner = [
        k
        for k in (*discount.pillar_times, *survival.ends, *recovery.breakpoints)
        if start < k < end
    ]
    nodes = np.unique(np.concatenate([[start], inner, [end]]))
    a, b = nodes[:-1], nodes[1:]
    mid = 0.5 * (a + b)
    lam = survival.hazard_at(mid)
    fwd = discount.forward_rate(mid)
    weight = lam * recovery(mid) * survival.survival_prob(a) * discount(a)
    return float(np.sum(weight * exp_integral(lam + fwd, b - a)))


def fair_spreads_continuous(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    recovery: RecoverySpec,
    start: float,
    maturities: Sequence[float],
    step: float = DAY,
) -> np.ndarray:
    """Continuously-paid fair spreads at several maturities on one shared mesh."""
    profile = leg_profile(discount, start, maturities, survival, recovery, step=step)
    if np.any(profile.defaultable_annuity <= 0):
        raise DegenerateCurveError("defaultable annuity vanishes; survival curve is degenerate")
    return profile.protection / profile.defaultable_annuity


def fair_spread_continuous(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    recovery: RecoverySpec,
    start: float,
    end: float,
    step: float = DAY,
) -> float:
    """Fair spread for a continuously paid premium leg.

    Numerator and defaultable annuity are integrated on the same trapezoid
    mesh, so with a flat hazard and constant LGD the ratio is ``λ L`` to
    rounding error whatever the rates.
    """
    if end <= start:
        raise DomainError(f"need end > start, got [{start:g}, {end:g}]")
    return float(fair_spreads_continuous(discount, survival, recovery, start, [end], step)[0])


def fair_spread_discrete(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    recovery: RecoverySpec,
    schedule: PaymentSchedule,
    accrued_on_default: bool = True,
) -> float:
    """Fair spread for premiums paid on ``schedule``.

    Parameters
    ----------
    discount, survival, recovery
        Market inputs; both curves must span the schedule.
    schedule : PaymentSchedule
        ``T0 = t_0 < ... < t_n = T``.
    accrued_on_default : bool
        Premium accrues to the default time within the final period (market
        convention). ``False`` charges the full period fee whenever the name is
        alive at the period start, the convention of the three-date toy model.
    """
    annuity = discrete_defaultable_annuity(discount, survival, schedule, accrued_on_default)
    if annuity <= 0:
        raise DegenerateCurveError("defaultable annuity vanishes; survival curve is degenerate")
    prot = protection_leg(discount, survival, recovery, schedule.start, schedule.end)
    return prot / annuity


# --------------------------------------------------------------------------
# bootstrapping
# --------------------------------------------------------------------------


def bootstrap_hazards(
    curve: CdsCurve,
    discount: DiscountCurve,
    recovery: RecoverySpec = DEFAULT_RECOVERY,
    frequency: int = 4,
    accrued_on_default: bool = True,
) -> SurvivalCurve:
    """Sequentially solve one flat hazard per tenor so model spreads match quotes.

    Hazard ``k`` lives on ``(T_{k-1}, T_k]`` (the first segment starts at 0)
    and is solved with earlier segments frozen, by Brent's method inside
    ``HAZARD_BRACKET``. Negative solutions are kept.

    Raises
    ------
    BootstrapError
        If no sign change exists inside the bracket for some tenor.
    """
    tenors = curve.tenors
    spreads = curve.spreads
    t0 = curve.effective_start
    ends: list[float] = []
    hazards: list[float] = []
    for tenor, quote in zip(tenors, spreads):
        schedule = PaymentSchedule.regular(t0, float(tenor), frequency)
        trial_ends = (*ends, float(tenor))

        def residual(lam: float) -> float:
            trial = SurvivalCurve(trial_ends, (*hazards, lam))
            return (
                fair_spread_discrete(discount, trial, recovery, schedule, accrued_on_default)
                - quote
            )

        try:
            root = bracketed_root(residual, *HAZARD_BRACKET)
        except (DegenerateCurveError, FloatingPointError, OverflowError) as exc:
            raise BootstrapError(float(tenor), f"model spread undefined: {exc}") from exc
        if root is None:
            raise BootstrapError(
                float(tenor),
                f"quote {quote / 1e-4:.4f}bp not reachable with hazard in {HAZARD_BRACKET}",
            )
        ends.append(float(tenor))
        hazards.append(root)
    result = SurvivalCurve(tuple(ends), tuple(hazards))
    if result.pathological:
        logger.info(
            "%s %s: bootstrapped negative hazard(s) at %s",
            curve.entity.entity_id,
            curve.as_of,
            [e for e, h in zip(ends, hazards) if h < 0],
        )
    return result


def model_spreads(
    survival: SurvivalCurve,
    tenors: Sequence[float],
    discount: DiscountCurve,
    recovery: RecoverySpec = DEFAULT_RECOVERY,
    start: float = 0.0,
    frequency: int = 4,
    accrued_on_default: bool = True,
) -> np.ndarray:
    """Discrete fair spreads implied by ``survival`` at each tenor."""
    return np.array(
        [
            fair_spread_discrete(
                discount,
                survival,
                recovery,
                PaymentSchedule.regular(start, float(t), frequency),
                accrued_on_default,
            )
            for t in tenors
        ]
    )
