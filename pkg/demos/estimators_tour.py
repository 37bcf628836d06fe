# %% [markdown]
# Estimators on one set of sums
# -----------------------------
# Sxx = 1, rho = 0.5, fourth-order sums 10 and 5, with Syy varied.  At
# Syy = 1 the two OLS slopes are 0.5 and 2.

# %%
from obliq import estimate_all
from obliq.tables import table4_stats

stats = table4_stats(1.0)
for fit in estimate_all(stats):
    print(f"{fit.method.value:8s} slope={fit.beta1:.4f} lam={fit.lam:.4f} "
          f"theta={fit.theta_deg:7.2f} {' '.join(fit.notes)}")

# %%
# Copas jumps from one OLS slope to the other as Syy crosses Sxx; the
# moment slope barely moves.
for syy in (0.999, 1.0, 1.001):
    fits = {f.method.value: f.beta1 for f in estimate_all(table4_stats(syy))}
    print(syy, round(fits["copas"], 4), round(fits["mom"], 4))

# %%
# Rescale x by 10: the geometric mean follows, the perpendicular slope does not.
from obliq import geometric_mean, perpendicular

s = table4_stats(1.0)
t = s.scaled(10.0, 1.0)
print(geometric_mean(t).beta1 * 10, geometric_mean(s).beta1)
print(perpendicular(t).beta1 * 10, perpendicular(s).beta1)
