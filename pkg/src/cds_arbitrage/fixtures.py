"""Hand-built reference curves and the bundled datasets.

The Microsoft, AIB and Freddie-Mac-style curves reproduce the quoted
spreads of three historical inversions; tenors without a published quote
are filled with plausible values that keep the inversion where it was
observed. The Microsoft replay path is synthetic: after the inception date
the 5y quote tightens and the 10y widens toward an ordinary upward curve.
"""

from __future__ import annotations

import datetime as dt
import json
from importlib import resources
from pathlib import Path

import numpy as np

from .curve_model import (
    CANONICAL_TENORS,
    CdsCurve,
    EntityMeta,
    Rating,
    Region,
    Sector,
    Seniority,
)

MSFT = EntityMeta(
    "MSFT", "Microsoft Corp", Region.NORTH_AMERICA, Sector.NON_BANKING, "USD", Rating.AAA, Seniority.SENIOR
)
AIB = EntityMeta(
    "AIB", "Allied Irish Banks", Region.EUROPE, Sector.BANKING, "EUR", Rating.A, Seniority.SENIOR
)
FRE = EntityMeta(
    "FRE", "Freddie Mac", Region.NORTH_AMERICA, Sector.BANKING, "USD", Rating.AAA, Seniority.SENIOR
)

MSFT_DATE = dt.date(2008, 12, 3)
AIB_DATE = dt.date(2008, 12, 4)
FRE_DATE = dt.date(2008, 9, 8)

MSFT_SPREADS_BP = (25.0, 28.0, 35.0, 45.0, 32.0, 89.53, 45.0, 33.55)
AIB_SPREADS_BP = (400.0, 150.0, 160.0, 165.0, 170.0, 175.0, 172.0, 170.0)
FRE_SPREADS_BP = (60.0, 70.0, 1538.0, 40.0, 38.0, 37.22, 39.0, 41.0)

# Where the replay path drifts to; upward in T·s, so no inversion remains.
_MSFT_RELAXED_BP = np.array([22.0, 26.0, 34.0, 42.0, 50.0, 60.0, 52.0, 46.0])

SYNTHETIC_QUOTES = "synthetic_quotes.csv"
SYNTHETIC_MANIFEST = "synthetic_manifest.json"
REFERENCE_QUOTES = "reference_quotes.csv"


def _curve(entity: EntityMeta, as_of: dt.date, spreads_bp) -> CdsCurve:
    return CdsCurve.from_spreads(entity, CANONICAL_TENORS, spreads_bp, as_of, in_bp=True)


def microsoft_curve() -> CdsCurve:
    """Microsoft on its inversion date: 5y at 89.53bp over a 10y at 33.55bp."""
    return _curve(MSFT, MSFT_DATE, MSFT_SPREADS_BP)


def aib_curve() -> CdsCurve:
    """AIB with the 6m quote far above the 1y."""
    return _curve(AIB, AIB_DATE, AIB_SPREADS_BP)


def freddie_mac_curve() -> CdsCurve:
    """A 2y spike of 1538bp against a normal 5y, giving a MAR near 16.5."""
    return _curve(FRE, FRE_DATE, FRE_SPREADS_BP)


def reference_curves() -> list[CdsCurve]:
    return [freddie_mac_curve(), microsoft_curve(), aib_curve()]


def business_days(start: dt.date, count: int) -> list[dt.date]:
    days = np.busday_offset(np.datetime64(start, "D"), np.arange(count), roll="forward")
    return [d.astype(dt.date) for d in days]


def microsoft_replay_path(days: int = 60, seed: int = 3122008) -> list[CdsCurve]:
    """Daily Microsoft curves starting on the inversion date.

    Quotes relax geometrically (half-life about three business days) toward
    an upward curve, with a little multiplicative noise on top.
    """
    rng = np.random.default_rng(seed)
    start = np.array(MSFT_SPREADS_BP)
    curves = []
    for k, day in enumerate(business_days(MSFT_DATE, days)):
        w = 0.8**k
        level = w * start + (1 - w) * _MSFT_RELAXED_BP
        if k:
            level = level * np.exp(rng.normal(0.0, 0.01, level.size))
        curves.append(_curve(MSFT, day, np.round(level, 4)))
    return curves


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    return Path(str(resources.files("cds_arbitrage") / "data" / name))


def synthetic_quotes_path() -> Path:
    return data_path(SYNTHETIC_QUOTES)


def synthetic_manifest() -> dict:
    return json.loads(data_path(SYNTHETIC_MANIFEST).read_text())
