# %% [markdown]
# # What a hazard bootstrap does with an arbitrageable curve
#
# A piecewise-flat hazard bootstrap reproduces every quote exactly. When the
# quotes violate the fee monotonicity rule, the only way to do that is with a
# negative hazard somewhere, i.e. survival probabilities that rise over time.

# %%
import numpy as np

from cds_arbitrage import DiscountCurve, bootstrap_hazards
from cds_arbitrage.fixtures import aib_curve, microsoft_curve
from cds_arbitrage.survival import model_spreads

zero = DiscountCurve.flat(0.0)

for curve in (microsoft_curve(), aib_curve()):
    q = bootstrap_hazards(curve, zero)
    print(curve.entity.entity_id, "pathological:", q.pathological)
    for end, h in zip(q.ends, q.hazards):
        flag = "  <-- negative" if h < 0 else ""
        print(f"   up to {end:5.1f}y  hazard {h:+.5f}{flag}")

# %% [markdown]
# The fit is still exact: repricing the tenors recovers the quotes.

# %%
curve = microsoft_curve()
q = bootstrap_hazards(curve, zero)
fitted = model_spreads(q, [float(t) for t in curve.tenors], zero)
print("max repricing error (bp):", np.max(np.abs(fitted - curve.spreads)) / 1e-4)

# %% [markdown]
# Survival past the 5y point climbs back up, which no probability measure
# allows.

# %%
grid = np.array([4.0, 5.0, 6.0, 8.0, 10.0])
for t, value in zip(grid, q(grid)):
    print(f"q({t:g}) = {value:.6f}")

# %% [markdown]
# The recovery rate behind these quotes is not known. The sign pattern does
# not depend on it: only the magnitudes scale.

# %%
from cds_arbitrage import RecoverySpec

for recovery in (0.0, 0.2, 0.4, 0.6, 0.8):
    q = bootstrap_hazards(microsoft_curve(), zero, RecoverySpec.from_recovery(recovery))
    negative = [f"{e:g}y: {h:+.4f}" for e, h in zip(q.ends, q.hazards) if h < 0]
    print(f"R = {recovery:.1f}  ", ", ".join(negative))
