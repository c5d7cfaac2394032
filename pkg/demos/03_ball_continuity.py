"""Measure how the p-ball moves as p leaves p_star, three ways at once:
a dense grid oracle (tiny instances only), seeded sampled lower bounds,
and the analytic certificate on the certified window.
"""

import math

from lpball import (
    BallSpec,
    ProblemParams,
    SamplerConfig,
    brute_force_hausdorff,
    delta_window,
    dist_to_ball,
    hausdorff_estimate,
    make_space,
    simple_function,
)

space = make_space([1.0, 1.0], 1)
params = ProblemParams(p_star=2.0, r=1.0, mu_total=2.0, epsilon=0.4)
ledger = delta_window(params)
sampler = SamplerConfig(seed=42, n_samples=10_000)

print("== the hand-checkable case ==")
diag = simple_function(space, [1 / math.sqrt(2)] * 2)
d = dist_to_ball(diag, BallSpec(p=1.0, r=1.0))
print(f"distance from the Euclidean-sphere diagonal to the 1-ball: {d:.6f}")
print(f"analytic value sqrt(2) - 1                               : {math.sqrt(2) - 1:.6f}")
print()

oracle = brute_force_hausdorff(space, BallSpec(p=2.0, r=1.0), BallSpec(p=1.0, r=1.0), 1e-3)
est = hausdorff_estimate(space, BallSpec(p=2.0, r=1.0), BallSpec(p=1.0, r=1.0), sampler)
print(f"grid oracle  H(B_2, B_1) = {oracle:.4f}   (resolution 1e-3)")
print(f"sampled lower bound      = {est.lower:.6f}   ({est.samples_used} candidates)")
print()

print("== sweep toward p_star = 2 ==")
print(f"{'p':>10} {'sampled lower':>14} {'certificate':>12} {'in window':>10}")
p_grid = [3.0, 2.5, 2.25, 2.1, 2.01, 2.0 + ledger.delta0 / 2]
for p in p_grid:
    e = hausdorff_estimate(space, BallSpec(p=p, r=1.0), BallSpec(p=2.0, r=1.0),
                           sampler, params=params, ledger=ledger)
    cert = f"{e.upper:.3f}" if e.upper is not None else "-"
    print(f"{p:>10.6f} {e.lower:>14.6f} {cert:>12} {str(ledger.contains(p)):>10}")
print()
print("The lower bounds decay to zero as p approaches p_star; inside the")
print(f"window (radius {ledger.delta0:.3e}) the distance is certified <= epsilon = "
      f"{params.epsilon}.")
