# %% [markdown]
# # Valuation with capacities
#
# A capacity generalises a probability measure: it is monotone and runs from
# 0 on the empty event to 1 on the whole state space, but need not be
# additive. Organisations are scored by how much capacity their departments
# capture across the events that each function produces.

# %%
from funcecon.valuation import (
    Capacity,
    OrgStructure,
    ValueParams,
    additivity_check,
    org_capacity,
    outcome_value,
    payoff,
    profitability_complexity,
    project_value,
    prospect_value,
)

print("payoff of outcomes (3, 5) at capability 2:", payoff([3, 5], 2))

# %% [markdown]
# Three capacities on four states: an additive one and two power
# distortions. Under a convex power the whole is worth more than its parts,
# so splitting states across departments loses capacity. A concave power
# works the other way.

# %%
org = OrgStructure(4, departments=[[0, 1], [2, 3]], function_events=[[[0, 2], [1, 3]], [[0, 1], [2, 3]]])
for label, cap in [
    ("additive", Capacity.additive([0.1, 0.2, 0.3, 0.4])),
    ("power 2.0", Capacity.power(4, 2.0)),
    ("power 0.5", Capacity.power(4, 0.5)),
]:
    c_org = org_capacity(org, cap)
    print(f"{label:10s} org capacity = {c_org:.4f}  {additivity_check(org, cap).value:15s} "
          f"profitability complexity (c_tech=1) = {profitability_complexity(c_org, 1)}")

# %% [markdown]
# Prospects weigh ranked outcomes by capacity increments; the value function
# scales outcomes by time cost over complexity and is steeper for losses.

# %%
cap = Capacity.power(3, 1.5)
print("prospect value:", prospect_value([(10.0, [0]), (4.0, [1]), (-2.0, [2])], cap, lambda e: e))
params = ValueParams(rho=1.0, c_gain=2.0, c_loss=1.0)
for e in (-4.0, -1.0, 0.0, 1.0, 4.0):
    print(f"v({e:+.1f}) = {outcome_value(e, params):+.3f}")
print("project value of (4, -2):", project_value([4, -2], params))
