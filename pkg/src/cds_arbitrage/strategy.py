"""Paired CDS arbitrage trades: toy-model payoffs, mark-to-market and sensitivities."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Union

from .curve_model import (
    BP,
    DEFAULT_RECOVERY,
    CdsCurve,
    DiscountCurve,
    PaymentSchedule,
    RecoverySpec,
    Tenor,
)
from .annuity import discrete_defaultable_annuity
from .errors import DomainError
from .survival import SurvivalCurve, bootstrap_hazards, protection_leg

NEVER = "never"


# --------------------------------------------------------------------------
# three-date model (zero rates, effective date 1, payments at 2 and 3)
# --------------------------------------------------------------------------


def three_period_payoff(s1, s2, tau, r3):
    """Accumulated cash at date 3 of short CDS_1 / long CDS_2.

    ``tau`` is the default date (1, 2, 3) or ``"never"``. At ``tau = 2`` the
    two protection payments cancel; at ``tau = 3`` the long leg collects
    ``1 - r3``. Works with ``Fraction`` inputs for exact arithmetic.
    """
    if tau not in (1, 2, 3, NEVER, None):
        raise DomainError(f"tau must be 1, 2, 3 or 'never', got {tau!r}")
    alive_after_1 = tau in (2, 3, NEVER, None)
    alive_after_2 = tau in (3, NEVER, None)
    payoff = (s1 - s2) * alive_after_1 - s2 * alive_after_2
    if tau == 3:
        payoff += 1 - r3
    return payoff


def three_period_fair_spreads(lam, l2, l3):
    """Fair ``(s1, s2)`` when each date defaults with conditional probability ``lam``.

    ``s1 = L2 λ`` and ``s2 = λ (L2 + (1 - λ) L3) / (2 - λ)``.
    """
    if not 0 <= lam < 1:
        raise DomainError(f"per-period default probability must lie in [0, 1), got {lam!r}")
    if not (0 < l2 <= 1 and 0 < l3 <= 1):
        raise DomainError("LGDs must lie in (0, 1]")
    s1 = l2 * lam
    s2 = lam * (l2 + (1 - lam) * l3) / (2 - lam)
    return s1, s2


# --------------------------------------------------------------------------
# positions
# --------------------------------------------------------------------------


class Direction(str, enum.Enum):
    LONG_PROTECTION = "long_protection"
    SHORT_PROTECTION = "short_protection"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.LONG_PROTECTION else -1


@dataclass(frozen=True)
class CdsPosition:
    direction: Direction
    notional: float
    contract_spread: float
    schedule: PaymentSchedule
    recovery: RecoverySpec = DEFAULT_RECOVERY

    def __post_init__(self) -> None:
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.notional < 0:
            raise DomainError("notional must be >= 0")

    @classmethod
    def standard(
        cls,
        direction: Direction | str,
        notional: float,
        contract_spread: float,
        maturity: float,
        start: float = 0.0,
        frequency: int = 4,
        recovery: RecoverySpec = DEFAULT_RECOVERY,
    ) -> "CdsPosition":
        return cls(
            Direction(direction),
            notional,
            contract_spread,
            PaymentSchedule.regular(start, maturity, frequency),
            recovery,
        )

    @property
    def start(self) -> float:
        return self.schedule.start

    @property
    def maturity(self) -> float:
        return self.schedule.end

    def aged(self, elapsed: float) -> "CdsPosition":
        """The same contract seen ``elapsed`` years later (time origin moved to today)."""
        return replace(self, schedule=self.schedule.aged(elapsed))


@dataclass(frozen=True)
class PairedTrade:
    """Short protection to ``T1`` and long protection to ``T2 > T1`` on one name."""

    short_leg: CdsPosition
    long_leg: CdsPosition

    def __post_init__(self) -> None:
        if self.short_leg.direction is not Direction.SHORT_PROTECTION:
            raise DomainError("short leg must sell protection")
        if self.long_leg.direction is not Direction.LONG_PROTECTION:
            raise DomainError("long leg must buy protection")
        if self.short_leg.maturity >= self.long_leg.maturity:
            raise DomainError("short leg must mature before the long leg")
        if abs(self.short_leg.start - self.long_leg.start) > 1e-12:
            raise DomainError("legs must be co-initial")
        if self.short_leg.notional != self.long_leg.notional:
            raise DomainError("legs must share one notional")

    @classmethod
    def from_curve(
        cls,
        curve: CdsCurve,
        short_tenor,
        long_tenor,
        notional: float = 10_000_000.0,
        frequency: int = 4,
        recovery: RecoverySpec = DEFAULT_RECOVERY,
    ) -> "PairedTrade":
        """Strike both legs at today's quotes on ``curve``."""
        t0 = curve.effective_start
        legs = []
        for tenor, direction in (
            (short_tenor, Direction.SHORT_PROTECTION),
            (long_tenor, Direction.LONG_PROTECTION),
        ):
            tenor = Tenor.of(tenor)
            legs.append(
                CdsPosition.standard(
                    direction,
                    notional,
                    curve.spread_at(tenor),
                    float(tenor),
                    t0,
                    frequency,
                    recovery,
                )
            )
        return cls(*legs)

    def aged(self, elapsed: float) -> "PairedTrade":
        return PairedTrade(self.short_leg.aged(elapsed), self.long_leg.aged(elapsed))


Instrument = Union[CdsPosition, PairedTrade]


# --------------------------------------------------------------------------
# valuation
# --------------------------------------------------------------------------


def cds_mtm(position: CdsPosition, discount: DiscountCurve, survival: SurvivalCurve) -> float:
    """Protection-buyer value ``(protection leg - c · A^d_n) · N``, negated for sellers."""
    sched = position.schedule
    prot = protection_leg(discount, survival, position.recovery, sched.start, sched.end)
    annuity = discrete_defaultable_annuity(discount, survival, sched)
    return position.direction.sign * position.notional * (prot - position.contract_spread * annuity)


def paired_trade_mtm(trade: PairedTrade, discount: DiscountCurve, survival: SurvivalCurve) -> float:
    return cds_mtm(trade.short_leg, discount, survival) + cds_mtm(
        trade.long_leg, discount, survival
    )


def mtm(instrument: Instrument, discount: DiscountCurve, survival: SurvivalCurve) -> float:
    if isinstance(instrument, PairedTrade):
        return paired_trade_mtm(instrument, discount, survival)
    return cds_mtm(instrument, discount, survival)


def _recovery_of(instrument: Instrument) -> RecoverySpec:
    if isinstance(instrument, PairedTrade):
        return instrument.long_leg.recovery
    return instrument.recovery


def value_from_quotes(
    instrument: Instrument,
    discount: DiscountCurve,
    quotes: CdsCurve,
    frequency: int = 4,
) -> float:
    """Bootstrap ``quotes`` under ``discount`` and mark the instrument on the result."""
    survival = bootstrap_hazards(quotes, discount, _recovery_of(instrument), frequency)
    return mtm(instrument, discount, survival)


def dv01(
    instrument: Instrument,
    discount: DiscountCurve,
    quotes: CdsCurve,
    bump_bp: float = 1.0,
    frequency: int = 4,
) -> float:
    """``V(r + 1bp, s) - V(r, s)``.

    Zero rates are shifted in parallel and the hazards are re-bootstrapped
    from the unchanged quotes, so the quotes stay the market invariant. A
    position struck at today's quotes therefore has zero DV01.
    """
    base = value_from_quotes(instrument, discount, quotes, frequency)
    bumped = value_from_quotes(instrument, discount.shifted(bump_bp * BP), quotes, frequency)
    return bumped - base


def cr01(
    instrument: Instrument,
    discount: DiscountCurve,
    quotes: CdsCurve,
    bump_bp: float = 1.0,
    frequency: int = 4,
) -> float:
    """``V(r, s + 1bp) - V(r, s)`` with every quoted spread shifted, then re-bootstrapped."""
    base = value_from_quotes(instrument, discount, quotes, frequency)
    bumped = value_from_quotes(instrument, discount, quotes.bumped(bump_bp * BP), frequency)
    return bumped - base
