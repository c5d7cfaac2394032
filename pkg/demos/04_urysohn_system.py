"""Drive an integral input-output map with ball-constrained inputs.

The operator F(x)(xi) = sum_s w_s K(xi, s, x(s)) inherits everything from
its Lipschitz field: an L1 output bound psi_0 for inputs in the p-ball,
an L1 operator Lipschitz constant psi_star, and continuity of the output
set in p with modulus psi_star * epsilon on the certified window.
"""

import numpy as np

from lpball import (
    ProblemParams,
    SamplerConfig,
    delta_window,
    linear_kernel,
    make_space,
    output_bound_check,
    output_set_distance,
    saturating_kernel,
    system_constants,
    validate_kernel,
)

inputs = make_space([0.7, 1.2], 1)
outputs = make_space([1.0, 0.5, 0.8], 1)
rng = np.random.default_rng(3)

print("== a random linear kernel ==")
kernel = linear_kernel(rng.uniform(-1.5, 1.5, (3, 2)), inputs, outputs)
report = validate_kernel(kernel, SamplerConfig(seed=1, n_samples=2000))
print(f"Lipschitz field audit: max ratio {report.max_ratio:.6f} over "
      f"{report.probes} probes -> {'ok' if report.passed else 'VIOLATED'}")

consts = system_constants(kernel, r=1.2)
print(f"psi_star = {consts.psi_star:.4f}  k_star = {consts.k_star:.4f}  "
      f"theta_star = {consts.theta_star}  psi_0 = {consts.psi_0:.4f}")

bound = output_bound_check(kernel, p=1.8, r=1.2, sampler=SamplerConfig(seed=2, n_samples=500))
print(f"output bound: worst sampled ||F(x)||_1 = {bound.max_output_l1:.4f} "
      f"<= psi_0 = {bound.bound:.4f} over {bound.inputs_checked} inputs")
print()

print("== a saturating kernel ==")
sat = saturating_kernel(rng.uniform(0.0, 2.0, (3, 2)), inputs, outputs, amplitude=0.7)
print(f"audit passed: {validate_kernel(sat, SamplerConfig(seed=4, n_samples=2000)).passed}")
print(f"psi_0 = {system_constants(sat, 1.2).psi_0:.4f}")
print()

print("== output-set continuity in p ==")
square = make_space([1.0, 1.0], 1)
diag = linear_kernel(np.eye(2), square, square)
params = ProblemParams(p_star=2.0, r=1.0, mu_total=2.0, epsilon=0.4)
ledger = delta_window(params)
psi_star = system_constants(diag, 1.0).psi_star
sampler = SamplerConfig(seed=11, n_samples=2000)
print(f"{'p':>10} {'sampled lower':>14} {'certificate':>12}")
for p in (2.5, 2.1, 2.01, 2.0 + ledger.delta0 / 2):
    est = output_set_distance(diag, p, 2.0, 1.0, params, ledger, sampler)
    cert = f"{est.upper:.3f}" if est.upper is not None else "-"
    print(f"{p:>10.6f} {est.lower:>14.6f} {cert:>12}")
print()
print(f"Inside the window the output sets are certified within psi_star * epsilon "
      f"= {psi_star * params.epsilon}.")
