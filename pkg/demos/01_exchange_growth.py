# %% [markdown]
# # Exchange, capital and the growth threshold
#
# A market is described by two reference frames. The supply frame pins the
# time cost of work at a given number of functions; the demand frame does the
# same for the buyer. Prices move exponentially in the function count, and the
# capital stored on each side follows from integrating those curves.

# %%
import math

from funcecon.exchange import (
    ExchangeSpec,
    FrameReference,
    demand_price,
    global_capital,
    growth_report,
    inflation_diagnostic,
    supply_price,
)

supply = FrameReference.supply(rho_O=1.0, m_O=1.0, c_O=1.0)
demand = FrameReference.demand(rho_O=1.0, m_O=1.0, c_O=1.0)

print(" m   supply price   demand price")
for m in (0.0, 0.5, 1.0, 2.0, 3.0):
    print(f"{m:3.1f}  {supply_price(supply, m):12.6f}  {demand_price(demand, m):12.6f}")

# %% [markdown]
# When both frames are saturated (as many functions as complexity) the growth
# condition reduces to a single ratio: capital grows only if the demand-side
# reference cost exceeds the supply side by more than e^-2, about 13.5 %.

# %%
spec = ExchangeSpec(supply, demand, rho_star=1.0, c=1.0)
report = growth_report(spec)
print(f"threshold r* = {report.threshold:.10f}  (e^-2 = {math.exp(-2):.10f})")
print(f"global capital = {global_capital(spec):.6f}, growth = {report.delta_K:.6f}, regime = {report.regime.value}")

for r in (0.10, 0.1353352832366127, 0.20):
    probe = ExchangeSpec(supply, FrameReference.demand(rho_O=r, m_O=1.0, c_O=1.0), rho_star=1.0, c=1.0)
    g = growth_report(probe)
    print(f"r = {r:.4f}: delta_K = {g.delta_K:+.6f}, grows = {g.grows}")

# %% [markdown]
# Doubling the complexity on the demand side pushes the threshold the other
# way: buyers need more functions for the same cost, which reads as
# inflationary pressure.

# %%
harder = ExchangeSpec(supply, FrameReference.demand(rho_O=1.0, m_O=1.0, c_O=2.0), rho_star=1.0, c=1.0)
print("pressure:", inflation_diagnostic(spec, harder).value)
