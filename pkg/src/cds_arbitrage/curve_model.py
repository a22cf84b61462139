"""Immutable domain types: tenors, quotes, CDS curves, discount curves, schedules.

All curves are value objects. Operations that "modify" a curve return a new
instance; nothing in the package mutates its inputs.
"""

from __future__ import annotations

import datetime as dt
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, ExtrapolationError

BP = 1e-4
CANONICAL_TENORS = (0.5, 1, 2, 3, 4, 5, 7, 10)
# Relative slack used when matching query points against pillar ends.
_EDGE_TOL = 1e-12


# --------------------------------------------------------------------------
# tenors and quotes
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Tenor:
    """A maturity measured in years, stored as an exact rational."""

    years: Fraction

    def __post_init__(self) -> None:
        years = _to_fraction(self.years)
        if years <= 0:
            raise DomainError(f"tenor must be positive, got {years}")
        object.__setattr__(self, "years", years)

    @classmethod
    def of(cls, value: "Tenor | float | int | str | Fraction") -> "Tenor":
        if isinstance(value, Tenor):
            return value
        return cls(_to_fraction(value))

    def __float__(self) -> float:
        return float(self.years)

    @property
    def label(self) -> str:
        return format_years(self.years)

    def __str__(self) -> str:
        return f"{self.label}y"


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite tenor {value!r}")
        # go through the shortest repr so 0.1 means one tenth, not its binary image
        return Fraction(repr(float(value)))
    return Fraction(value)


def format_years(value: float | Fraction) -> str:
    """Compact label for a year count: ``0.5``, ``1``, ``10``."""
    frac = _to_fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{float(frac):g}"


class QuoteKind(str, enum.Enum):
    MID = "mid"
    BID = "bid"
    ASK = "ask"


@dataclass(frozen=True)
class CdsQuote:
    tenor: Tenor
    spread: float
    quote_kind: QuoteKind = QuoteKind.MID

    def __post_init__(self) -> None:
        object.__setattr__(self, "tenor", Tenor.of(self.tenor))
        object.__setattr__(self, "quote_kind", QuoteKind(self.quote_kind))
        if not (self.spread >= 0) or not math.isfinite(self.spread):
            raise DomainError(f"spread must be finite and >= 0, got {self.spread!r}")

    @property
    def spread_bp(self) -> float:
        return self.spread / BP


# --------------------------------------------------------------------------
# entity metadata
# --------------------------------------------------------------------------


class Region(str, enum.Enum):
    ASIA = "Asia"
    EUROPE = "Europe"
    NORTH_AMERICA = "NorthAmerica"
    OTHER = "Other"


class Sector(str, enum.Enum):
    BANKING = "Banking"
    NON_BANKING = "NonBanking"


class Rating(str, enum.Enum):
    AAA = "AAA"
    AA = "AA"
    A = "A"
    BBB = "BBB"
    NIG = "NIG"
    NOT_RATED = "NotRated"


class Seniority(str, enum.Enum):
    SENIOR = "Senior"
    SENIOR_SECURED = "SeniorSecured"
    SUBORDINATED = "Subordinated"


@dataclass(frozen=True)
class EntityMeta:
    entity_id: str
    name: str = ""
    region: Region = Region.OTHER
    sector: Sector = Sector.NON_BANKING
    currency: str = "USD"
    rating: Rating = Rating.NOT_RATED
    seniority: Seniority = Seniority.SENIOR

    def __post_init__(self) -> None:
        if not self.entity_id:
            raise DomainError("entity_id must be nonempty")
        object.__setattr__(self, "region", Region(self.region))
        object.__setattr__(self, "sector", Sector(self.sector))
        object.__setattr__(self, "rating", Rating(self.rating))
        object.__setattr__(self, "seniority", Seniority(self.seniority))


# --------------------------------------------------------------------------
# CDS curve
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CdsCurve:
    """Co-initial CDS quotes on one entity, observed on one date."""

    as_of: dt.date
    entity: EntityMeta
    quotes: tuple[CdsQuote, ...]
    effective_start: float = 0.0

    def __post_init__(self) -> None:
        quotes = tuple(self.quotes)
        object.__setattr__(self, "quotes", quotes)
        if self.effective_start < 0:
            raise DomainError("effective_start must be >= 0")
        if not quotes:
            raise DomainError("a CDS curve needs at least one quote")
        tenors = [q.tenor for q in quotes]
        if any(a >= b for a, b in zip(tenors, tenors[1:])):
            raise DomainError("curve tenors must be strictly increasing")
        if len({q.quote_kind for q in quotes}) != 1:
            raise DomainError("all quotes on a curve must share one quote kind")
        if float(tenors[0]) <= self.effective_start:
            raise DomainError("all tenors must exceed the effective start")

    @classmethod
    def from_spreads(
        cls,
        entity: EntityMeta | str,
        tenors: Iterable,
        spreads: Iterable[float],
        as_of: dt.date = dt.date(2000, 1, 1),
        effective_start: float = 0.0,
        in_bp: bool = False,
        quote_kind: QuoteKind = QuoteKind.MID,
    ) -> "CdsCurve":
        """Build a curve from parallel tenor/spread sequences."""
        if isinstance(entity, str):
            entity = EntityMeta(entity, entity)
        scale = BP if in_bp else 1.0
        quotes = tuple(
            CdsQuote(Tenor.of(t), float(s) * scale, quote_kind) for t, s in zip(tenors, spreads)
        )
        return cls(as_of, entity, quotes, effective_start)

    @property
    def quote_kind(self) -> QuoteKind:
        return self.quotes[0].quote_kind

    @property
    def tenors(self) -> np.ndarray:
        return np.array([float(q.tenor) for q in self.quotes])

    @property
    def spreads(self) -> np.ndarray:
        return np.array([q.spread for q in self.quotes])

    def has_tenor(self, tenor) -> bool:
        tenor = Tenor.of(tenor)
        return any(q.tenor == tenor for q in self.quotes)

    def spread_at(self, tenor) -> float:
        tenor = Tenor.of(tenor)
        for q in self.quotes:
            if q.tenor == tenor:
                return q.spread
        raise KeyError(f"{self.entity.entity_id} {self.as_of}: no {tenor} quote")

    def bumped(self, shift: float) -> "CdsCurve":
        """Parallel shift of every quoted spread (decimal units)."""
        quotes = tuple(CdsQuote(q.tenor, q.spread + shift, q.quote_kind) for q in self.quotes)
        return CdsCurve(self.as_of, self.entity, quotes, self.effective_start)

    def with_spread(self, tenor, spread: float) -> "CdsCurve":
        tenor = Tenor.of(tenor)
        quotes = tuple(
            CdsQuote(q.tenor, spread if q.tenor == tenor else q.spread, q.quote_kind)
            for q in self.quotes
        )
        return CdsCurve(self.as_of, self.entity, quotes, self.effective_start)


# --------------------------------------------------------------------------
# discount curve
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiscountCurve:
    """Risk-free discount factors with log-linear interpolation.

    ``(0, 1)`` is implicit; monotonicity is not required, so negative rates
    are representable. Queries past the last pillar raise
    :class:`ExtrapolationError`.
    """

    times: np.ndarray
    factors: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float).ravel()
        factors = np.asarray(self.factors, dtype=float).ravel()
        if times.shape != factors.shape or times.size == 0:
            raise DomainError("need equally many (nonzero) pillar times and factors")
        if times[0] == 0.0:
            if factors[0] != 1.0:
                raise DomainError("P(0) must equal 1")
        else:
            times = np.concatenate([[0.0], times])
            factors = np.concatenate([[1.0], factors])
        if np.any(np.diff(times) <= 0) or times[0] < 0:
            raise DomainError("pillar times must be >= 0 and strictly increasing")
        if np.any(~np.isfinite(factors)) or np.any(factors <= 0):
            raise DomainError("discount factors must be finite and positive")
        times.setflags(write=False)
        factors.setflags(write=False)
        log_factors = np.log(factors)
        log_factors.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "_log_factors", log_factors)

    # constructors ---------------------------------------------------------

    @classmethod
    def flat(cls, rate: float, horizon: float = 30.0) -> "DiscountCurve":
        """Flat continuously compounded rate; exact everywhere by log-linearity."""
        return cls([horizon], [math.exp(-rate * horizon)])

    @classmethod
    def from_zero_rates(cls, times: Sequence[float], rates: Sequence[float]) -> "DiscountCurve":
        times = np.asarray(times, dtype=float)
        return cls(times, np.exp(-np.asarray(rates, dtype=float) * times))

    @classmethod
    def from_forward_rates(cls, times: Sequence[float], forwards: Sequence[float]) -> "DiscountCurve":
        """Piecewise-flat instantaneous forwards; ``forwards[i]`` applies up to ``times[i]``."""
        times = np.asarray(times, dtype=float)
        widths = np.diff(np.concatenate([[0.0], times]))
        return cls(times, np.exp(-np.cumsum(np.asarray(forwards, dtype=float) * widths)))

    # queries --------------------------------------------------------------

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def pillar_times(self) -> np.ndarray:
        return self.times[1:]

    def _check_domain(self, t: np.ndarray) -> np.ndarray:
        if np.any(t < 0):
            raise DomainError("discount factors are defined for t >= 0 only")
        limit = self.horizon
        over = t > limit
        if np.any(over):
            if np.any(t[over] > limit * (1 + _EDGE_TOL) + _EDGE_TOL):
                raise ExtrapolationError(
                    f"t={float(np.max(t)):g} beyond last pillar {limit:g}; no extrapolation"
                )
            t = np.minimum(t, limit)
        return t

    def log_discount(self, t):
        t = self._check_domain(np.asarray(t, dtype=float))
        return np.interp(t, self.times, self._log_factors)

    def __call__(self, t):
        out = np.exp(self.log_discount(t))
        return float(out) if out.ndim == 0 else out

    def forward_rate(self, t):
        """Instantaneous forward on the piece containing ``t`` (right-continuous)."""
        t = self._check_domain(np.asarray(t, dtype=float))
        slopes = -np.diff(self._log_factors) / np.diff(self.times)
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, slopes.size - 1)
        out = slopes[idx]
        return float(out) if out.ndim == 0 else out

    def shifted(self, shift: float) -> "DiscountCurve":
        """Parallel shift of continuously compounded zero rates: P(t) -> P(t) e^{-shift t}."""
        t = self.times[1:]
        return DiscountCurve(t, self.factors[1:] * np.exp(-shift * t))

    def forward_price(self, start: float, end: float) -> float:
        return self(end) / self(start)


def discount_factor(curve: DiscountCurve, t: float) -> float:
    """Discount factor P(0, t), exact at pillars and log-linear between them."""
    return curve(t)


# --------------------------------------------------------------------------
# schedules and recovery
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PaymentSchedule:
    """Premium dates ``t_0 = T0 < t_1 < ... < t_n = T`` as year offsets."""

    dates: tuple[float, ...]

    def __post_init__(self) -> None:
        dates = tuple(float(d) for d in self.dates)
        if len(dates) < 2:
            raise DomainError("a schedule needs T0 and at least one payment date")
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise DomainError("schedule dates must be strictly increasing")
        if dates[0] < 0:
            raise DomainError("schedule cannot start before 0")
        object.__setattr__(self, "dates", dates)

    @classmethod
    def regular(cls, start: float, end: float, frequency: int = 4) -> "PaymentSchedule":
        """Dates rolled backward from ``end`` at ``1/frequency`` with a short front stub."""
        if end <= start:
            raise DomainError(f"schedule end {end} must exceed start {start}")
        if frequency <= 0:
            raise DomainError("frequency must be positive")
        step = 1.0 / frequency
        n = math.ceil((end - start) / step - 1e-9)
        dates = [end - k * step for k in range(n)]
        dates = [d for d in dates if d > start + 1e-9]
        return cls((start, *reversed(dates)))

    @property
    def start(self) -> float:
        return self.dates[0]

    @property
    def end(self) -> float:
        return self.dates[-1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.dates)

    def truncated(self, end: float) -> "PaymentSchedule":
        """Dates up to and including ``end`` (which must be a schedule date)."""
        kept = [d for d in self.dates if d <= end + 1e-12]
        if abs(kept[-1] - end) > 1e-9:
            raise DomainError(f"{end} is not a date of this schedule")
        return PaymentSchedule(tuple(kept))

    def aged(self, elapsed: float) -> "PaymentSchedule":
        """Remaining schedule after ``elapsed`` years, re-based so that today is 0."""
        start = max(self.dates[0] - elapsed, 0.0)
        remaining = [d - elapsed for d in self.dates[1:] if d - elapsed > start + 1e-9]
        if not remaining:
            raise DomainError("schedule has fully run off")
        return PaymentSchedule((start, *remaining))


@dataclass(frozen=True)
class RecoverySpec:
    """Deterministic loss-given-default, constant or a function of default time.

    ``breakpoints`` marks where a piecewise-constant ``lgd`` function jumps;
    between breakpoints the leg integrals are done in closed form.
    """

    lgd: float | Callable[[np.ndarray], np.ndarray] = 0.6
    breakpoints: tuple[float, ...] = ()
    piecewise_constant: bool = True

    def __post_init__(self) -> None:
        if not callable(self.lgd):
            if not (0.0 < float(self.lgd) <= 1.0):
                raise DomainError(f"LGD must lie in (0, 1], got {self.lgd!r}")
            object.__setattr__(self, "lgd", float(self.lgd))

    @classmethod
    def from_recovery(cls, recovery: float = 0.4) -> "RecoverySpec":
        return cls(1.0 - recovery)

    @classmethod
    def stepwise(cls, ends: Sequence[float], values: Sequence[float]) -> "RecoverySpec":
        """LGD ``values[i]`` for default times in ``(ends[i-1], ends[i]]``; last value extends."""
        ends_arr = np.asarray(ends, dtype=float)
        vals = np.asarray(values, dtype=float)
        if ends_arr.shape != vals.shape:
            raise DomainError("ends and values must align")
        if np.any(vals <= 0) or np.any(vals > 1):
            raise DomainError("LGD values must lie in (0, 1]")

        def lgd(t):
            idx = np.searchsorted(ends_arr, np.asarray(t, dtype=float), side="left")
            return vals[np.minimum(idx, vals.size - 1)]

        return cls(lgd, tuple(float(e) for e in ends_arr[:-1]), True)

    @classmethod
    def function(cls, lgd: Callable[[np.ndarray], np.ndarray]) -> "RecoverySpec":
        """Smooth deterministic LGD; leg integrals fall back to quadrature."""
        return cls(lgd, (), False)

    @property
    def is_constant(self) -> bool:
        return not callable(self.lgd)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.is_constant:
            return np.full(t.shape, self.lgd)
        out = np.asarray(self.lgd(t), dtype=float)
        if np.any(out <= 0):
            raise DomainError("LGD must stay strictly positive")
        return out


DEFAULT_RECOVERY = RecoverySpec.from_recovery(0.4)


def year_fraction(start: dt.date, end: dt.date) -> float:
    """ACT/365.25 year fraction, used only at the ingestion boundary."""
    return (end - start).days / 365.25
