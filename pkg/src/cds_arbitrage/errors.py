"""Exception hierarchy for the CDS term-structure analytics."""

from __future__ import annotations


class CdsAnalyticsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CdsAnalyticsError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class ExtrapolationError(DomainError):
    """A curve was queried beyond its last pillar."""


class DegenerateCurveError(CdsAnalyticsError, ArithmeticError):
    """A ratio has a vanishing denominator (zero annuity, zero IRS rate, ...)."""


class InvalidCurveError(CdsAnalyticsError, ValueError):
    """A curve implies economically impossible quantities (e.g. F <= 0)."""


class BootstrapError(CdsAnalyticsError):
    """Hazard bootstrapping could not bracket a root for one tenor."""

    def __init__(self, tenor: float, message: str) -> None:
        super().__init__(f"tenor {tenor:g}y: {message}")
        self.tenor = tenor


class UsageError(CdsAnalyticsError, ValueError):
    """Invalid option passed by a caller (unknown group key, bad pair spec)."""


class SchemaError(CdsAnalyticsError, ValueError):
    """An input file does not carry the required columns."""


class DuplicateQuoteError(CdsAnalyticsError, ValueError):
    """Two rows quote the same (date, entity, tenor)."""
