# %% [markdown]
# # Probability weighting and its fixed points
#
# People overweight small probabilities and underweight large ones. Iterating
# the weighting map shows where beliefs settle: with an exponent below one
# every start converges to an interior anchor p*; above one, p* repels and
# beliefs collapse to 0 or run away to 1.

# %%
import numpy as np

from funcecon.behavior import (
    WeightingRegime,
    bias_constraint,
    business_cycle,
    iterate,
    weight,
)

weird, poor = WeightingRegime.weird(), WeightingRegime.poor()
print(f"WEIRD: gamma {weird.gamma:.4f}, p* {weird.fixed_point:.6f}, bias-free M/c {bias_constraint(weird):.6f}")
print(f"Poor:  gamma {poor.gamma:.4f}, p* {poor.fixed_point:.6f}, bias-free M/c {bias_constraint(poor):.6f}")
print("w(0.1) under WEIRD weighting:", weight(weird.gamma, 0.1))

# %%
for p0 in (0.05, 0.5, 0.95):
    res = iterate(weird.gamma, p0)
    print(f"WEIRD from {p0}: {res.verdict.value} after {len(res.trajectory) - 1} steps")

for p0 in (poor.fixed_point - 0.01, poor.fixed_point + 0.01):
    res = iterate(poor.gamma, p0, tol=1e-6)
    print(f"Poor from {p0:.4f}: {res.verdict.value} after {len(res.trajectory) - 1} steps")

# %% [markdown]
# The business cycle compares the initial belief with the anchor. Starting
# below p* ends in a pleasant surprise; starting above it, in overinvestment.

# %%
for p0 in (0.2, weird.fixed_point, 0.9):
    acc = business_cycle(p0, weird.gamma, 100.0)
    print(f"p0 {p0:.4f}: delta {acc.subjective_delta:+8.3f} -> {acc.feeling.value}")

print("trajectory sample:", np.round(iterate(weird.gamma, 0.05).trajectory[:6], 4))
