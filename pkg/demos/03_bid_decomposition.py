# %% [markdown]
# # Splitting a customer's expectations into architect designs
#
# A bistochastic expectation matrix is a convex mixture of permutations. Each
# permutation is one architect's way of assigning functions to components,
# and its weight is that architect's influence. Cost and information
# operators then price every design.

# %%
import numpy as np

from funcecon.bid_engine import (
    DiagOperator,
    budget_bounds,
    decompose_expectations,
    rom_bounds,
    selection_report,
    superpose,
)

M = np.array([
    [0.5, 0.3, 0.2, 0.0],
    [0.3, 0.5, 0.0, 0.2],
    [0.2, 0.0, 0.5, 0.3],
    [0.0, 0.2, 0.3, 0.5],
])
decomp = decompose_expectations(M)
print(f"{len(decomp)} terms, reconstruction error {np.max(np.abs(decomp.reconstruct() - M)):.1e}")
for w, p in decomp:
    print(f"  weight {w:.3f}  permutation {p.mapping}")

# %% [markdown]
# The rough order of magnitude bounds every budget before any design is
# chosen; the rearrangement bounds are tighter and are attained by pairing
# sorted costs with sorted (or reversed) information.

# %%
E = DiagOperator.cost([1.0, 2.0, 3.0, 4.0])
I = DiagOperator.information([4.0, 5.0, 6.0, 7.0])
print("ROM interval:", rom_bounds(E, I, I_theta=4.0, E_p=10.0, M_F=M))
print("rearrangement interval:", budget_bounds(E, I))

# %%
report = selection_report(decomp, E, I)
print(f"W+ = {report.W_plus:.4f}, W- = {report.W_minus:.4f}, pathology = {report.pathology}")
for row in report.rows():
    print(f"  beta {row['beta']}: weight {row['weight']:.2f} budget {row['budget']:.1f} -> {row['class']}")

# %% [markdown]
# Superposing a chosen subset of designs shows which component links the
# combined technical solution actually uses.

# %%
print(superpose([p for _, p in list(decomp)[:2]]))
