"""Model-free no-arbitrage checks on CDS term structures.

Every condition has the same shape: a maturity weight ``w(T)`` such that
``T -> w(T) s(T)`` must be strictly increasing. A pair ``T1 < T2`` violates
the condition when ``w(T1) s1 >= w(T2) s2``; equality counts as a violation.

====================  =====================================
condition             weight ``w(T)``
====================  =====================================
``Thm1``              ``T - T0``
``Thm2``              ``A_0(T0, T)`` (continuous annuity)
``Thm3``              ``A_n`` (discrete annuity)
``IrsCorollary``      ``(1 - F_0(T0, T)) / I_0(T0, T)``
====================  =====================================
"""

from __future__ import annotations

import csv
import enum
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .annuity import irs_fair_rates, leg_profile
from .curve_model import BP, CANONICAL_TENORS, CdsCurve, DiscountCurve, Tenor
from .errors import DegenerateCurveError, DomainError

DEFAULT_PAIRS: tuple[tuple[float, float], ...] = ((0.5, 1), (1, 2), (2, 5), (5, 10))
# Values closer than this (relative) are treated as equal, so that decimal
# inputs that are equal on paper stay equal after binary rounding.
EQUALITY_RTOL = 1e-12


class Condition(str, enum.Enum):
    THM1 = "Thm1"
    THM2 = "Thm2"
    THM3 = "Thm3"
    IRS = "IrsCorollary"

    @classmethod
    def parse(cls, value: "Condition | str") -> "Condition":
        if isinstance(value, Condition):
            return value
        aliases = {"thm1": cls.THM1, "thm2": cls.THM2, "thm3": cls.THM3, "irs": cls.IRS}
        try:
            return aliases.get(value.lower()) or cls(value)
        except ValueError:
            raise DomainError(f"unknown condition {value!r}") from None


@dataclass(frozen=True)
class Violation:
    tenor_short: float
    tenor_long: float
    lhs: float
    rhs: float
    mar: float


@dataclass(frozen=True)
class AoAVerdict:
    condition: Condition
    violations: tuple[Violation, ...]
    skipped: tuple[tuple[float, float, str], ...] = ()
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def clean(self) -> bool:
        return not self.violations

    def pairs(self) -> list[tuple[float, float]]:
        return [(v.tenor_short, v.tenor_long) for v in self.violations]


def violates(lhs, rhs, epsilon: float = 0.0):
    """``lhs >= rhs + epsilon`` at decimal resolution; works on arrays."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    slack = EQUALITY_RTOL * np.maximum(np.abs(lhs), np.abs(rhs))
    out = lhs - rhs >= epsilon - slack
    return bool(out) if out.ndim == 0 else out


def _ratio(lhs: float, rhs: float) -> float:
    return lhs / rhs if rhs > 0 else float("inf")


# --------------------------------------------------------------------------
# zero-rate (thm1) primitives
# --------------------------------------------------------------------------


def check_thm1_pair(
    s1: float, t1: float, s2: float, t2: float, t0: float = 0.0, epsilon: float = 0.0
) -> Violation | None:
    """Return the violation for ``(T1-T0) s1 >= (T2-T0) s2``, else ``None``."""
    if not t0 < t1 < t2:
        raise DomainError(f"need T0 < T1 < T2, got {t0:g}, {t1:g}, {t2:g}")
    if s1 < 0 or s2 < 0:
        raise DomainError("spreads must be >= 0")
    lhs, rhs = (t1 - t0) * s1, (t2 - t0) * s2
    if violates(lhs, rhs, epsilon):
        return Violation(t1, t2, lhs, rhs, _ratio(lhs, rhs))
    return None


def mar(s1: float, t1: float, s2: float, t2: float) -> float:
    """Maturity adjusted spread ratio ``T1 s1 / (T2 s2)``; ``>= 1`` flags an anomaly."""
    if s2 == 0 or t2 == 0:
        raise DegenerateCurveError("MAR undefined for a zero long-leg spread or maturity")
    if s1 < 0 or s2 < 0 or t1 <= 0 or t2 <= 0:
        raise DomainError("MAR inputs must be positive")
    return (t1 * s1) / (t2 * s2)


# --------------------------------------------------------------------------
# maturity weights
# --------------------------------------------------------------------------


def thm1_weights(tenors: Sequence[float], t0: float = 0.0) -> np.ndarray:
    return np.asarray(tenors, dtype=float) - t0


def thm2_weights(discount: DiscountCurve, tenors: Sequence[float], t0: float = 0.0) -> np.ndarray:
    """Continuous annuities ``A_0(T0, T)`` on a mesh holding every canonical tenor."""
    tenors = np.asarray(tenors, dtype=float)
    _check_discount_span(discount, tenors)
    return leg_profile(discount, t0, tenors, knots=CANONICAL_TENORS).annuity


def thm3_weights(
    discount: DiscountCurve, tenors: Sequence[float], t0: float = 0.0, frequency: int = 4
) -> np.ndarray:
    """Discrete annuities ``A_n`` on the grid ``T0 + k/frequency`` augmented by the tenors."""
    tenors = np.asarray(tenors, dtype=float)
    _check_discount_span(discount, tenors)
    last = float(tenors.max())
    n = int(np.ceil((last - t0) * frequency - 1e-9))
    grid = t0 + np.arange(n + 1) / frequency
    dates = np.unique(np.concatenate([grid[grid < last], tenors, [t0]]))
    dates = dates[dates >= t0]
    cumulative = np.concatenate([[0.0], np.cumsum(np.diff(dates) * discount(dates[1:]))])
    return cumulative[np.searchsorted(dates, tenors)]


def irs_weights(discount: DiscountCurve, tenors: Sequence[float], t0: float = 0.0) -> np.ndarray:
    """``(1 - F_0(T0, T)) / I_0(T0, T)`` with ``F = P_T / P_T0``."""
    tenors = np.asarray(tenors, dtype=float)
    _check_discount_span(discount, tenors)
    rates = irs_fair_rates(discount, t0, tenors)
    if np.any(np.abs(rates) < 1e-14):
        raise DegenerateCurveError(
            "IRS fair rate vanishes (zero-rate curve); use the annuity form (Thm2) instead"
        )
    forward = discount(tenors) / discount(t0)
    return (1.0 - forward) / rates


def _check_discount_span(discount: DiscountCurve, tenors: np.ndarray) -> None:
    if tenors.size and tenors.max() > discount.horizon * (1 + 1e-12):
        raise DomainError(
            f"discount curve ends at {discount.horizon:g}y, tenors reach {tenors.max():g}y"
        )


# --------------------------------------------------------------------------
# curve-level checks
# --------------------------------------------------------------------------


def resolve_pairs(curve: CdsCurve, pairs) -> list[tuple[float, float]]:
    """``None``/``"all"`` -> every ordered tenor pair; ``"default"`` -> the four standard pairs."""
    if pairs is None or pairs == "all":
        return [(float(a), float(b)) for a, b in itertools.combinations(curve.tenors, 2)]
    if pairs == "default":
        return list(DEFAULT_PAIRS)
    return [(float(a), float(b)) for a, b in pairs]


def pairwise_verdict(
    condition: Condition,
    curve: CdsCurve,
    weights: dict[Tenor, float],
    pairs: Iterable[tuple[float, float]],
    epsilon: float = 0.0,
    metadata: dict | None = None,
) -> AoAVerdict:
    """Compare ``w s`` across ``pairs``; pairs with a missing tenor are skipped, not interpolated."""
    violations = []
    skipped = []
    for t1, t2 in pairs:
        if t1 >= t2:
            raise DomainError(f"pair ({t1:g}, {t2:g}) is not ordered")
        k1, k2 = Tenor.of(t1), Tenor.of(t2)
        missing = [str(k) for k in (k1, k2) if not curve.has_tenor(k)]
        if missing:
            skipped.append((t1, t2, "missing " + ",".join(missing)))
            continue
        lhs = weights[k1] * curve.spread_at(k1)
        rhs = weights[k2] * curve.spread_at(k2)
        if violates(lhs, rhs, epsilon):
            violations.append(Violation(t1, t2, lhs, rhs, _ratio(lhs, rhs)))
    violations.sort(key=lambda v: (v.tenor_short, v.tenor_long))
    return AoAVerdict(condition, tuple(violations), tuple(skipped), dict(metadata or {}))


def weights_by_tenor(curve: CdsCurve, values: np.ndarray) -> dict[Tenor, float]:
    return {q.tenor: float(w) for q, w in zip(curve.quotes, values)}


def check_thm1_curve(curve: CdsCurve, pairs="default", epsilon: float = 0.0) -> AoAVerdict:
    """Zero-rate check, ``(T - T0) s(T)`` strictly increasing, on the requested pairs."""
    weights = weights_by_tenor(curve, thm1_weights(curve.tenors, curve.effective_start))
    return pairwise_verdict(
        Condition.THM1, curve, weights, resolve_pairs(curve, pairs), epsilon
    )


def check_thm2_curve(
    curve: CdsCurve, discount: DiscountCurve, pairs=None, epsilon: float = 0.0
) -> AoAVerdict:
    """``A_0(T0, T) s(T)`` strictly increasing; valid for negative rates as well."""
    values = thm2_weights(discount, curve.tenors, curve.effective_start)
    return pairwise_verdict(
        Condition.THM2,
        curve,
        weights_by_tenor(curve, values),
        resolve_pairs(curve, pairs),
        epsilon,
    )


def check_thm3_curve(
    curve: CdsCurve,
    discount: DiscountCurve,
    frequency: int = 4,
    pairs=None,
    epsilon: float = 0.0,
) -> AoAVerdict:
    """Discrete-payment version: ``A_n s_n`` strictly increasing in ``n``."""
    values = thm3_weights(discount, curve.tenors, curve.effective_start, frequency)
    return pairwise_verdict(
        Condition.THM3,
        curve,
        weights_by_tenor(curve, values),
        resolve_pairs(curve, pairs),
        epsilon,
        {"frequency": frequency},
    )


def check_irs_corollary(
    curve: CdsCurve, discount: DiscountCurve, pairs=None, epsilon: float = 0.0
) -> AoAVerdict:
    """``(1 - F_0(T0,T)) s(T) / I_0(T0,T)`` strictly increasing.

    Raises
    ------
    DegenerateCurveError
        When an IRS fair rate is zero (flat zero rates); use the Thm2 form.
    """
    values = irs_weights(discount, curve.tenors, curve.effective_start)
    return pairwise_verdict(
        Condition.IRS,
        curve,
        weights_by_tenor(curve, values),
        resolve_pairs(curve, pairs),
        epsilon,
        {"form": "forward_bond"},
    )


# --------------------------------------------------------------------------
# graphical diagnostic
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HyperbolaPlot:
    """Quoted points against the no-arbitrage boundary through an anchor.

    Linear mode: points ``(x_i, s_i)`` with ``x_i = T_i - T0`` and the
    hyperbola ``s = C / x``. Log-log mode: ``(log x_i, log s_i)`` and the line
    of slope -1 through the anchor. Spreads are in decimal units.
    """

    x: np.ndarray
    s: np.ndarray
    violation: np.ndarray
    boundary_x: np.ndarray
    boundary_s: np.ndarray
    anchor: tuple[float, float]
    log_log: bool

    def rows(self):
        """``(x, s, series_id, violation_flag)`` rows; linear-mode spreads are reported in bp."""
        scale = 1.0 if self.log_log else 1.0 / BP
        pts = "log_points" if self.log_log else "points"
        line = "log_line" if self.log_log else "hyperbola"
        for x, s, flag in zip(self.x, self.s, self.violation):
            yield float(x), float(s) * scale, pts, int(flag)
        for x, s in zip(self.boundary_x, self.boundary_s):
            yield float(x), float(s) * scale, line, 0

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "s", "series_id", "violation_flag"])
            for x, s, series, flag in self.rows():
                writer.writerow([f"{x:.8f}", f"{s:.8f}", series, flag])


def hyperbola_plot_data(curve: CdsCurve, anchor_tenor, log_log: bool = False) -> HyperbolaPlot:
    """Plot series for the hyperbola diagnostic anchored at ``anchor_tenor``.

    Points with ``x_i > x_a`` lying on or below the boundary are tagged; the
    tag set equals the thm1 violations that use the anchor as short leg.
    """
    anchor_tenor = Tenor.of(anchor_tenor)
    if not curve.has_tenor(anchor_tenor):
        raise DomainError(f"anchor {anchor_tenor} not quoted on this curve")
    x = curve.tenors - curve.effective_start
    s = curve.spreads
    x_a = float(anchor_tenor) - curve.effective_start
    s_a = curve.spread_at(anchor_tenor)
    c = x_a * s_a
    grid = np.linspace(x_a, max(float(x.max()), x_a), 100)
    after = x > x_a
    if log_log:
        with np.errstate(divide="ignore"):
            lx, ls = np.log(x), np.log(s)
        line = np.log(s_a) + np.log(x_a) - lx
        tags = after & violates(line, ls)
        return HyperbolaPlot(
            lx, ls, tags, np.log(grid), np.log(c) - np.log(grid), (np.log(x_a), np.log(s_a)), True
        )
    tags = after & violates(c, x * s)
    return HyperbolaPlot(x, s, tags, grid, c / grid, (x_a, s_a), False)
