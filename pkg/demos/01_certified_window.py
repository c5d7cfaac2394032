"""Walk through the constant ledger behind a certified continuity window.

For a query (p_star, r, mu_total, epsilon) the library produces every
intermediate constant in closed form and the final two-sided window radius
delta0: whenever |p - p_star| < delta0, the p-ball and the p_star-ball of
radius r are within epsilon of each other in the L1 pseudometric.
"""

import numpy as np

from lpball import ProblemParams, base_constants, delta_window

params = ProblemParams(p_star=2.0, r=1.0, mu_total=1.0, epsilon=0.4)
base = base_constants(params)

print("query: p_star=2, r=1, total measure=1, epsilon=0.4")
print(f"  c_star      = {base.c_star}")
print(f"  d_star      = {base.d_star}")
print(f"  alpha_star  = {base.alpha_star}   (cap level; the maps clip at 2x this)")
print(f"  sigma_star  = {base.sigma_star}   (epsilon must stay below this)")
print()

ledger = delta_window(params)
print("one-sided window radii (each the min of its log-ratio ingredients):")
print(f"  delta1 (below p_star, cap widening)   = {ledger.delta1:.6e}")
print(f"  delta2 (above p_star, cap preserved)  = {ledger.delta2:.6e}")
print(f"  delta3 (below p_star, reverse route)  = {ledger.delta3:.6e}")
print(f"  delta4 (above p_star, reverse route)  = {ledger.delta4:.6e}")
print(f"  delta0 = {ledger.delta0:.6e}")
lo, hi = ledger.window()
print(f"  certified window: ({lo:.8f}, {hi:.8f})")
print()

print("the full ledger serializes with every named constant:")
print(ledger.to_json())
print()

print("window radius as the tolerance epsilon varies:")
sigma = base.sigma_star
for frac in (0.1, 0.3, 0.5, 0.7, 0.9):
    eps = frac * sigma
    d0 = delta_window(ProblemParams(2.0, 1.0, 1.0, eps)).delta0
    bar = "#" * max(1, int(np.log10(d0) + 14))
    print(f"  epsilon = {eps:<8.3g} delta0 = {d0:.3e}  {bar}")
print()
print("The windows are honest but conservative: tiny radii certify a")
print("genuinely uniform guarantee over every measure space of this size.")
