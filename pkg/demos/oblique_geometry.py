# %% [markdown]
# Oblique errors
# --------------
# A point's distance to a line can be measured vertically, horizontally or
# anywhere in between.  The obliqueness ``lam`` picks the direction: 1 is
# vertical, 0 horizontal.

# %%
import numpy as np

from obliq import SummaryStats
from obliq.oblique import lambda_for_slope, oblique_angle, solve_slope_for_lambda, sse_oblique

stats = SummaryStats.from_moments(sxx=1.0, syy=1.0, sxy=0.5)

# %%
# Each lam has its own best slope, sliding from OLS(x|y) down to OLS(y|x).
for lam in np.linspace(0, 1, 11):
    sol = solve_slope_for_lambda(lam, stats)
    print(f"lam={lam:.1f}  slope={sol.beta1:.6f}  angle={sol.theta_deg:7.2f} deg")

# %%
# The objective really is smallest there (reduced form, best intercept).
lam = 0.75
best = solve_slope_for_lambda(lam, stats).beta1
grid = np.linspace(0.5, 2.0, 7)
print([round(sse_oblique(None, b, lam, stats), 4) for b in grid])
print("minimum", sse_oblique(None, best, lam, stats), "at", best)

# %%
# Going backwards: any slope between the two OLS lines belongs to one lam.
# The geometric mean slope sits at exactly one half.
print(lambda_for_slope(1.0, stats))
print(lambda_for_slope(0.8, stats))

# %%
# Angles for a slope-1 line: 45 (vertical), 90, 135 (horizontal).
print(oblique_angle(np.array([1.0, 0.5, 0.0]), 1.0))
