# %% [markdown]
# Error variances implied by a slope
# ----------------------------------
# Given a slope, second moments fix both error variances.  Their ratio fed
# into the likelihood slope hands back the slope you started with.

# %%
import numpy as np

from obliq import kappa_tilde, madansky_variances, mle, mle_circularity
from obliq.tables import table4_stats

stats = table4_stats(1.0)

# %%
# kappa~ runs from infinity at OLS(y|x) to zero at OLS(x|y).
for b in np.linspace(0.5, 2.0, 7):
    ev = madansky_variances(b, stats)
    print(f"b={b:.2f}  delta^2={ev.sigma_delta_sq:.4f}  tau^2={ev.sigma_tau_sq:.4f}  "
          f"kappa~={ev.kappa_tilde:.4g}")

# %%
b = 0.6417
k = kappa_tilde(b, stats)
print(k, mle(stats, k).beta1, mle_circularity(b, stats))

# %%
# Outside [0.5, 2] one variance goes negative.
print(madansky_variances(3.0, stats))
