"""Synthetic quote datasets with a known set of planted inversions.

Base curves are increasing in spread, so ``T s(T)`` is strictly increasing
and no pair is flagged. A planted violation raises the short-leg spread of
one default pair until its MAR reaches a drawn target in ``[1.05, 2]``.
"""

from __future__ import annotations

import datetime as dt
import json
from collections import Counter
from pathlib import Path

import numpy as np

from .aoa_checks import DEFAULT_PAIRS
from .curve_model import (
    CANONICAL_TENORS,
    CdsCurve,
    EntityMeta,
    Rating,
    Region,
    Sector,
    Seniority,
    format_years,
)
from .scanner import write_quotes_csv

DEFAULT_SEED = 20070101
START = dt.date(2007, 1, 1)
END = dt.date(2010, 6, 30)
_CURRENCY = {Region.ASIA: "JPY", Region.EUROPE: "EUR", Region.NORTH_AMERICA: "USD", Region.OTHER: "AUD"}


def _entities(rng: np.random.Generator, count: int) -> list[EntityMeta]:
    regions = list(Region)
    ratings = list(Rating)
    seniorities = list(Seniority)
    out = []
    for k in range(count):
        region = regions[rng.choice(len(regions), p=[0.2, 0.35, 0.4, 0.05])]
        out.append(
            EntityMeta(
                f"E{k:03d}",
                f"Synthetic Entity {k:03d}",
                region,
                Sector.BANKING if rng.random() < 0.3 else Sector.NON_BANKING,
                _CURRENCY[region],
                ratings[rng.integers(len(ratings))],
                seniorities[rng.choice(len(seniorities), p=[0.8, 0.05, 0.15])],
            )
        )
    return out


def _base_spreads_bp(rng: np.random.Generator, tenors: np.ndarray) -> np.ndarray:
    level = rng.uniform(20.0, 400.0)
    slope = rng.uniform(0.05, 0.8)
    shape = level * (1.0 + slope * np.log1p(tenors)) / (1.0 + slope * np.log1p(10.0))
    bumps = np.cumsum(rng.uniform(0.0, 0.02 * level, tenors.size))
    return np.round(shape + bumps, 4)


def generate_synthetic(
    n_curves: int = 1000,
    n_violations: int = 37,
    seed: int = DEFAULT_SEED,
    n_entities: int = 80,
    start: dt.date = START,
    end: dt.date = END,
) -> tuple[list[CdsCurve], dict]:
    """Curves plus a manifest of planted violations and their group counts.

    The manifest lists each planted record (date, entity, pair, MAR) and the
    expected per-group counts the scanner must reproduce.
    """
    if n_violations > n_curves:
        raise ValueError("cannot plant more violations than curves")
    rng = np.random.default_rng(seed)
    tenors = np.array(CANONICAL_TENORS, dtype=float)
    entities = _entities(rng, n_entities)
    days = np.arange(np.datetime64(start, "D"), np.datetime64(end, "D") + 1)
    days = days[np.is_busday(days)]
    slots = set()
    while len(slots) < n_curves:
        slots.add((int(rng.integers(days.size)), int(rng.integers(n_entities))))
    slots = sorted(slots)

    planted = set(rng.choice(n_curves, size=n_violations, replace=False).tolist())
    planted_pairs = {i: DEFAULT_PAIRS[k % len(DEFAULT_PAIRS)] for k, i in enumerate(sorted(planted))}

    curves = []
    records = []
    for i, (day_idx, ent_idx) in enumerate(slots):
        as_of = days[day_idx].astype(dt.date)
        entity = entities[ent_idx]
        spreads = _base_spreads_bp(rng, tenors)
        if i in planted:
            t1, t2 = planted_pairs[i]
            j1 = int(np.flatnonzero(tenors == t1)[0])
            j2 = int(np.flatnonzero(tenors == t2)[0])
            target = rng.uniform(1.05, 2.0)
            spreads[j1] = round(target * t2 * spreads[j2] / t1, 4)
            mar = t1 * spreads[j1] / (t2 * spreads[j2])
            records.append(
                {
                    "as_of": as_of.isoformat(),
                    "entity_id": entity.entity_id,
                    "pair": f"{format_years(t1)}:{format_years(t2)}",
                    "mar": round(float(mar), 5),
                    "rating": entity.rating.value,
                    "region": entity.region.value,
                    "sector": entity.sector.value,
                    "currency": entity.currency,
                    "seniority": entity.seniority.value,
                    "month": as_of.strftime("%Y-%m"),
                }
            )
        curves.append(CdsCurve.from_spreads(entity, tenors, spreads, as_of, in_bp=True))

    counts = {
        f"by_{key}": dict(sorted(Counter(r[key] for r in records).items()))
        for key in ("pair", "month", "rating", "region", "sector", "currency", "seniority")
    }
    manifest = {
        "seed": seed,
        "n_curves": n_curves,
        "n_violations": n_violations,
        "window": [start.isoformat(), end.isoformat()],
        "counts": counts,
        "records": records,
    }
    return curves, manifest


def write_synthetic(
    quotes_path: str | Path, manifest_path: str | Path, **kwargs
) -> tuple[list[CdsCurve], dict]:
    curves, manifest = generate_synthetic(**kwargs)
    write_quotes_csv(curves, quotes_path)
    Path(manifest_path).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return curves, manifest
