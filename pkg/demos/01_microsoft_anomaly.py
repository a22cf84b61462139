# %% [markdown]
# # A short-dated spread that is too wide
#
# If protection is bought at a constant premium, buying it for ten years can
# never cost less in total fee than buying it for five. On a flat zero-rate
# world that means `T * s(T)` must rise with maturity. This notebook checks a
# quoted Microsoft curve from early December 2008 against that rule.

# %%
import tempfile
from pathlib import Path

import numpy as np

from cds_arbitrage import check_thm1_curve, hyperbola_plot_data, mar
from cds_arbitrage.fixtures import microsoft_curve

curve = microsoft_curve()
print(curve.as_of, curve.entity.name)
for tenor, s in zip(curve.tenors, curve.spreads):
    print(f"{float(tenor):5.1f}y  {s / 1e-4:7.2f} bp   T*s = {float(tenor) * s:.6f}")

# %% [markdown]
# The 5y quote sits far above its neighbours. The adjacent-pair check finds it.

# %%
verdict = check_thm1_curve(curve)
for v in verdict.violations:
    print(f"{v.tenor_short:g}y vs {v.tenor_long:g}y: {v.lhs:.6f} >= {v.rhs:.6f}  MAR {v.mar:.5f}")

# %% [markdown]
# MAR is the ratio of the two total fees. Anything at or above one is a
# free option: sell 5y protection, buy 10y protection, same notional.

# %%
print(mar(curve.spread_at(5), 5, curve.spread_at(10), 10))

# %% [markdown]
# ## The hyperbola picture
#
# Fix the 5y point. Every later quote must sit strictly above the hyperbola
# `s = 5 * s(5) / T`. On log axes that boundary is a line of slope -1.

# %%
plot = hyperbola_plot_data(curve, 5)
below = plot.x[plot.violation]
print("tenors on or below the boundary:", below)

log_plot = hyperbola_plot_data(curve, 5, log_log=True)
slope = np.diff(log_plot.boundary_s) / np.diff(log_plot.boundary_x)
print("boundary slope on log axes:", slope.min().round(12), slope.max().round(12))

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    ax.plot(plot.boundary_x, plot.boundary_s / 1e-4, label="boundary")
    ax.scatter(plot.x, plot.s / 1e-4, c=np.where(plot.violation, "red", "black"))
    ax.set_xlabel("tenor (y)")
    ax.set_ylabel("spread (bp)")
    ax.legend()
    out = Path(tempfile.gettempdir()) / "microsoft_hyperbola.png"
    fig.savefig(out, dpi=120)
    print("wrote", out)
