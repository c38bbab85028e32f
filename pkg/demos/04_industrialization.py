# %% [markdown]
# # Industrialization: block patterns, budgets and externalities
#
# A large expectation matrix often has block structure: a coarse permutation
# places small bistochastic blocks. Decomposing the expanded matrix never
# mixes blocks, so each block can be budgeted on its own.

# %%
import numpy as np

from funcecon.birkhoff import PermutationMatrix
from funcecon.industrialization import (
    BlockPattern,
    block_birkhoff,
    block_budget,
    block_expand,
    block_reconstruction,
    comparative_advantage,
    externality_metric,
    restrict,
    uniform_split,
)

pattern = BlockPattern(PermutationMatrix((1, 3, 5, 2, 6, 0, 4)), (2,) * 7)
rng = np.random.default_rng(0)
blocks = {}
for i in range(7):
    w = rng.uniform(0.2, 0.8)
    blocks[i] = np.array([[w, 1 - w], [1 - w, w]])
B = block_expand(pattern, blocks)
decomp = block_birkhoff(B)
print(f"expanded order {B.matrix.shape[0]}, {len(decomp)} terms")
print("block 0 rebuilt:\n", block_reconstruction(decomp, pattern, 0))

# %%
E = np.arange(1.0, 8.0)
I = np.arange(7.0, 0.0, -1.0)
split = uniform_split(E, I, pattern)
first = decomp.permutations[0]
for i in range(3):
    local = restrict(first, pattern, i)
    j = pattern.base.mapping[i]
    print(f"block {i}: budget {block_budget(split.E_split[i], split.I_split[j], local):.3f}")

# %% [markdown]
# The H metric sums cost x link x information. A negative total is a major
# default; negative cells inside a positive total are a minor one.

# %%
T = np.eye(2)
for e in [(1, 2), (3, -1), (1, -3), (-1, -2)]:
    rep = externality_metric(e, (1, 1), T)
    print(f"E = {e}: H = {rep.H:+.0f} -> {rep.classification.value}")

cands = {1: ((2.0,), (1.0,), [[1]]), 2: ((1.0,), (1.0,), [[1]]), 3: ((1.0,), (1.0,), [[1]])}
res = comparative_advantage(cands)
print(f"comparative advantage: {res.chosen} (unique: {res.unique}, tied: {res.tied})")
