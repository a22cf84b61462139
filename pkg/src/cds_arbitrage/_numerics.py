"""Quadrature meshes and root bracketing shared by the analytics modules."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np
from scipy import optimize

DAY = 1.0 / 365.0


def mesh(start: float, stop: float, knots: Iterable[float] = (), step: float = DAY):
    """Sub-interval edges of a composite trapezoid mesh on ``[start, stop]``.

    Every knot inside the interval becomes a mesh node and each piece between
    consecutive knots is split uniformly with spacing at most ``step``.
    Returns ``(left, right)`` arrays; ``right[-1] == stop`` exactly.
    """
    inner = np.asarray([k for k in knots if start < k < stop], dtype=float)
    nodes = np.unique(np.concatenate([[start], inner, [stop]]))
    widths = np.diff(nodes)
    counts = np.maximum(1, np.ceil(widths / step - 1e-9).astype(np.int64))
    piece = np.repeat(np.arange(widths.size), counts)
    offset = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    left = nodes[piece] + widths[piece] * (offset / counts[piece])
    right = nodes[piece] + widths[piece] * ((offset + 1) / counts[piece])
    last = np.cumsum(counts) - 1
    right[last] = nodes[1:]
    left[last - counts + 1] = nodes[:-1]
    return left, right


def trapezoid(left: np.ndarray, right: np.ndarray, f_left: np.ndarray, f_right: np.ndarray):
    """Per-sub-interval trapezoid contributions (not summed)."""
    return 0.5 * (f_left + f_right) * (right - left)


def exp_integral(rate, width):
    """``(1 - exp(-rate * width)) / rate``, stable as ``rate -> 0``."""
    rate = np.asarray(rate, dtype=float)
    width = np.asarray(width, dtype=float)
    x = rate * width
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, rate)
    exact = -np.expm1(-x) / safe
    series = width * (1.0 - 0.5 * x + x * x / 6.0)
    return np.where(small, series, exact)


def bracketed_root(
    func: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-15
) -> float | None:
    """Brent's method on ``[lo, hi]``; ``None`` when the bracket has no sign change."""
    f_lo, f_hi = func(lo), func(hi)
    if not (np.isfinite(f_lo) and np.isfinite(f_hi)):
        return None
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        return None
    return optimize.brentq(func, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
