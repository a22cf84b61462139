"""Forward bond prices from IRS forward curves, and the combined CDS/IRS check.

With ``I(T) = I_0(T0, T)`` the fair rate of a continuously exchanged swap on
``[T0, T]``, the forward bond price is recovered as

    F_0(T0, T) = 1 - I(T) ∫_{T0}^{T} Φ_0(U, T) dU,   Φ_0(U, T) = exp(-∫_U^T I(V) dV).

``I`` is interpolated linearly between samples and every sample is a mesh
node, so the inner integral ``∫ I`` is exact and only the outer one carries
trapezoid error.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ._numerics import DAY, mesh, trapezoid
from .annuity import irs_fair_rates
from .aoa_checks import AoAVerdict, Condition, weights_by_tenor, pairwise_verdict, resolve_pairs
from .curve_model import CdsCurve, DiscountCurve
from .errors import DomainError, InvalidCurveError, SchemaError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IrsForwardCurve:
    """Forward swap rates ``I_0(T0, T)`` sampled in ``T``, linear in between.

    The first sample must sit at ``T0``; it is the instantaneous forward rate
    there. ``extrapolated`` records that it was filled in by
    :meth:`from_samples` rather than supplied.
    """

    start: float
    times: np.ndarray
    rates: np.ndarray
    extrapolated: bool = False

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float).ravel()
        rates = np.asarray(self.rates, dtype=float).ravel()
        if times.shape != rates.shape or times.size < 2:
            raise DomainError("need at least two (T, I) samples")
        if np.any(np.diff(times) <= 0):
            raise DomainError("sample maturities must be strictly increasing")
        if abs(times[0] - self.start) > 1e-12:
            raise DomainError(f"first sample must sit at T0={self.start:g}")
        times.setflags(write=False)
        rates.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "rates", rates)

    @classmethod
    def from_samples(
        cls, start: float, times: Sequence[float], rates: Sequence[float]
    ) -> "IrsForwardCurve":
        """Accept samples that may omit ``T0``; the limit is then extrapolated linearly."""
        times = np.asarray(times, dtype=float)
        rates = np.asarray(rates, dtype=float)
        if times[0] < start - 1e-12:
            raise DomainError("samples before T0")
        if abs(times[0] - start) <= 1e-12:
            return cls(start, times, rates)
        if times.size < 2:
            raise DomainError("need two samples to extrapolate the T0 limit")
        slope = (rates[1] - rates[0]) / (times[1] - times[0])
        limit = rates[0] - slope * (times[0] - start)
        logger.info("IRS curve: forward-rate limit at T0=%g extrapolated to %.6g", start, limit)
        return cls(start, np.concatenate([[start], times]), np.concatenate([[limit], rates]), True)

    @classmethod
    def from_discount(
        cls, discount: DiscountCurve, start: float, horizon: float, step: float = DAY
    ) -> "IrsForwardCurve":
        """Sample fair swap rates of ``discount`` on a ``step`` grid out to ``start + horizon``."""
        n = int(np.ceil(horizon / step - 1e-9))
        times = start + np.minimum(np.arange(n + 1) * step, horizon)
        return cls(start, times, irs_fair_rates(discount, start, times, step))

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def _check(self, t: np.ndarray) -> None:
        if np.any(t < self.start - 1e-12) or np.any(t > self.horizon * (1 + 1e-12) + 1e-12):
            raise DomainError(
                f"IRS curve covers [{self.start:g}, {self.horizon:g}], queried outside"
            )

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        self._check(t)
        out = np.interp(t, self.times, self.rates)
        return float(out) if out.ndim == 0 else out


def _cumulative(irs: IrsForwardCurve, maturities: np.ndarray, step: float):
    """``J(T) = ∫_{T0}^T I`` and ``G(T) = ∫_{T0}^T e^{J(U)} dU`` at each maturity."""
    left, right = mesh(irs.start, float(maturities.max()), [*irs.times, *maturities], step)
    i_left, i_right = irs(left), irs(right)
    j_right = np.cumsum(trapezoid(left, right, i_left, i_right))
    j_left = np.concatenate([[0.0], j_right[:-1]])
    g_right = np.cumsum(trapezoid(left, right, np.exp(j_left), np.exp(j_right)))
    idx = np.searchsorted(right, maturities)
    return j_right[idx], g_right[idx]


def phi(irs: IrsForwardCurve, lower: float, upper: float, step: float = DAY) -> float:
    """``Φ_0(U, T) = exp(-∫_U^T I_0(T0, V) dV)``."""
    if not irs.start <= lower <= upper:
        raise DomainError(f"need T0 <= U <= T, got U={lower:g}, T={upper:g}")
    irs._check(np.asarray(upper))
    if upper == lower:
        return 1.0
    left, right = mesh(lower, upper, irs.times, step)
    return float(np.exp(-np.sum(trapezoid(left, right, irs(left), irs(right)))))


def phi_integrals(irs: IrsForwardCurve, maturities: Sequence[float], step: float = DAY) -> np.ndarray:
    """``∫_{T0}^{T} Φ_0(U, T) dU`` for each maturity (0 at ``T = T0``)."""
    mats = np.atleast_1d(np.asarray(maturities, dtype=float))
    irs._check(mats)
    out = np.zeros_like(mats)
    later = mats > irs.start
    if np.any(later):
        j, g = _cumulative(irs, mats[later], step)
        out[later] = np.exp(-j) * g
    return out


def forward_bond_prices(
    irs: IrsForwardCurve, maturities: Sequence[float], step: float = DAY
) -> np.ndarray:
    mats = np.atleast_1d(np.asarray(maturities, dtype=float))
    return 1.0 - irs(mats) * phi_integrals(irs, mats, step)


def forward_bond_from_irs(irs: IrsForwardCurve, maturity: float, step: float = DAY) -> float:
    """Forward bond price ``F_0(T0, T)`` implied by the IRS forward curve."""
    return float(forward_bond_prices(irs, [maturity], step)[0])


def forward_rate_from_irs(irs: IrsForwardCurve, maturity: float, step: float = DAY) -> float:
    """Instantaneous forward ``f_{0,T} = -∂_T F / F`` by central difference on ``F``.

    Falls back to a one-sided difference within ``step`` of either end.

    Raises
    ------
    InvalidCurveError
        If the IRS curve implies ``F <= 0`` at ``maturity``.
    """
    if maturity <= irs.start:
        raise DomainError("forward rate defined for T > T0")
    lo = max(maturity - step, irs.start)
    hi = min(maturity + step, irs.horizon)
    f_lo, f_mid, f_hi = forward_bond_prices(irs, [lo, maturity, hi], step)
    if f_mid <= 0:
        raise InvalidCurveError(
            f"IRS curve implies non-positive forward bond price {f_mid:.6g} at T={maturity:g}"
        )
    return -(f_hi - f_lo) / (hi - lo) / f_mid


def nonmonotone_forward_points(
    irs: IrsForwardCurve, maturities: Sequence[float], step: float = DAY
) -> list[float]:
    """Maturities at which ``F`` rises; impossible if all forward rates are nonnegative."""
    mats = np.sort(np.asarray(maturities, dtype=float))
    prices = forward_bond_prices(irs, mats, step)
    return [float(t) for t, d in zip(mats[1:], np.diff(prices)) if d > 1e-12]


def check_irs_cds_aoa(
    irs: IrsForwardCurve,
    curve: CdsCurve,
    pairs=None,
    epsilon: float = 0.0,
    step: float = DAY,
) -> AoAVerdict:
    """``(∫_{T0}^T Φ_0(U, T) dU) s(T)`` must be strictly increasing in ``T``."""
    if abs(curve.effective_start - irs.start) > 1e-12:
        raise DomainError("CDS curve and IRS curve must share T0")
    tenors = curve.tenors
    if tenors.max() > irs.horizon * (1 + 1e-12):
        raise DomainError(f"IRS curve ends at {irs.horizon:g}y, CDS tenors reach {tenors.max():g}y")
    weights = weights_by_tenor(curve, phi_integrals(irs, tenors, step))
    return pairwise_verdict(
        Condition.IRS,
        curve,
        weights,
        resolve_pairs(curve, pairs),
        epsilon,
        {"form": "irs_curve", "t0_extrapolated": irs.extrapolated},
    )


def read_irs_csv(path: str | Path, start: float = 0.0) -> IrsForwardCurve:
    """Load ``T_years,rate_decimal`` rows (header required)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"T_years", "rate_decimal"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise SchemaError(f"{path}: IRS CSV needs columns {sorted(need)}")
        rows = sorted((float(r["T_years"]), float(r["rate_decimal"])) for r in reader)
    if not rows:
        raise SchemaError(f"{path}: no IRS samples")
    times, rates = zip(*rows)
    return IrsForwardCurve.from_samples(start, times, rates)
