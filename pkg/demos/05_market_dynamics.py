# %% [markdown]
# # Market dynamics
#
# Supply and demand time costs each satisfy a second-order linear equation in
# the function count. Its characteristic roots decide whether a market grows,
# decays or oscillates; four normalised cases have closed forms built from
# the golden ratio.

# %%
import numpy as np

from funcecon.dynamics import (
    DynamicsParams,
    canonical,
    characteristic_roots,
    perfect_fit_check,
    solve,
)

for kappa, ratio in [(-1.0, 1.0), (1.0, 1.0), (1.0, 0.25)]:
    r = characteristic_roots(DynamicsParams("supply", kappa, 1.0, ratio))
    print(f"kappa {kappa:+.1f}, M/c {ratio:.2f}: {r.regime.value:18s} roots {r.roots}")

# %% [markdown]
# The canonical curves all start at 2. Kinds a and b grow; kinds c and d
# oscillate under an exponential envelope.

# %%
m = np.linspace(0, 5, 6)
for kind in "abcd":
    print(kind, np.round(canonical(kind)(m), 4))

# %% [markdown]
# Comparing a supply curve with a demand curve: identical curves fit
# everywhere, otherwise their crossings are the zero-price points.

# %%
fit = perfect_fit_check(canonical("c"), canonical("b"), np.linspace(0, 12, 512))
print(fit.kind.value, np.round(fit.crossings, 6))

sol = solve(DynamicsParams("demand", 2.0, 1.0, -0.5), (1.0, 0.5))
print("max ODE residual:", float(np.max(np.abs(sol.residual(np.linspace(0, 5, 100))))))
