"""Integral input-output maps F(x)(xi) = sum_s w_s K(xi, s, x(s)) on atoms.

A kernel is the triple (pointwise evaluator, Lipschitz field psi, the two
measure spaces).  The Lipschitz field drives everything quantitative:

    phi(xi)  = max_s psi(xi, s)
    psi_star = ||phi||_1              (operator Lipschitz constant in L1)
    k_star   = ||K(.,.,0)||_1         (product-measure norm of the offset)
    theta_star = max(1, mu(input))    (Hoelder constant from the p-ball)
    psi_0    = psi_star * theta_star * r + k_star   (output L1 bound)

Three built-in families carry exact Lipschitz fields by construction, so
they satisfy the kernel conditions with equality rather than by audit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bounds import BoundLedger, ProblemParams
from .hausdorff import CERT_NONE, CERT_THEOREM, HausdorffEstimate
from .sampling import SamplerConfig, ball_samples, sup_candidates
from .spaces import MeasureSpace, SimpleFunction, lp_norm
from .witness import rescale, truncate

__all__ = [
    "Kernel",
    "SystemConstants",
    "ValidationReport",
    "OutputBoundReport",
    "KernelConditionError",
    "linear_kernel",
    "affine_kernel",
    "saturating_kernel",
    "kernel_from_config",
    "kernel_from_json",
    "validate_kernel",
    "apply_operator",
    "system_constants",
    "output_bound_check",
    "output_set_distance",
]


class KernelConditionError(RuntimeError):
    """The kernel violates its declared Lipschitz field."""


@dataclass(frozen=True, eq=False)
class Kernel:
    """Pointwise kernel evaluator with its Lipschitz field and spaces.

    eval_fn(xi_index, s_index, x) must return a vector in R^dim_out and be
    pure; psi[xi, s] >= 0 must dominate the Lipschitz constant of
    x -> K(xi, s, x) at every atom pair.
    """

    eval_fn: Callable[[int, int, np.ndarray], np.ndarray]
    psi: np.ndarray
    input_space: MeasureSpace
    output_space: MeasureSpace
    family: str = "custom"
    config: Optional[dict] = None

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=float)
        if psi.shape != (self.output_space.atom_count, self.input_space.atom_count):
            raise ValueError(
                f"psi shape {psi.shape} must be (output atoms, input atoms) = "
                f"({self.output_space.atom_count}, {self.input_space.atom_count})"
            )
        if np.any(psi < 0.0) or not np.all(np.isfinite(psi)):
            raise ValueError("psi entries must be finite and >= 0")
        psi = psi.copy()
        psi.flags.writeable = False
        object.__setattr__(self, "psi", psi)

    @property
    def dim_in(self) -> int:
        return self.input_space.dim

    @property
    def dim_out(self) -> int:
        return self.output_space.dim

    def eval(self, xi: int, s: int, x: np.ndarray) -> np.ndarray:
        out = np.asarray(self.eval_fn(xi, s, np.asarray(x, dtype=float)), dtype=float)
        return out.reshape(self.dim_out)

    def phi(self) -> np.ndarray:
        """Per-output-atom essential sup of the Lipschitz field (max over atoms)."""
        return self.psi.max(axis=1)

    def zero_values(self) -> np.ndarray:
        """K(xi, s, 0) for all atom pairs, shape (out, in, dim_out)."""
        z = np.zeros(self.dim_in)
        out = np.empty((self.output_space.atom_count, self.input_space.atom_count, self.dim_out))
        for xi in range(self.output_space.atom_count):
            for s in range(self.input_space.atom_count):
                out[xi, s] = self.eval(xi, s, z)
        return out

    def to_config(self) -> dict:
        if self.config is None:
            raise ValueError("only built-in kernel families serialize to config")
        return dict(self.config)


def _as_gain_matrix(a, n_out: int, n_in: int) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.shape != (n_out, n_in):
        raise ValueError(f"gain matrix must have shape ({n_out}, {n_in}), got {arr.shape}")
    return arr


def linear_kernel(A, input_space: MeasureSpace, output_space: MeasureSpace) -> Kernel:
    """K(xi, s, x) = A[xi, s] * x with exact psi = |A| (scalar gains, dim preserved)."""
    if input_space.dim != output_space.dim:
        raise ValueError("scalar-gain linear kernel requires matching dimensions")
    A = _as_gain_matrix(A, output_space.atom_count, input_space.atom_count)

    def ev(xi, s, x):
        return A[xi, s] * x

    cfg = {
        "family": "linear",
        "A": A.tolist(),
        "input_space": input_space.to_dict(),
        "output_space": output_space.to_dict(),
    }
    return Kernel(eval_fn=ev, psi=np.abs(A), input_space=input_space,
                  output_space=output_space, family="linear", config=cfg)


def affine_kernel(A, b, input_space: MeasureSpace, output_space: MeasureSpace) -> Kernel:
    """K(xi, s, x) = A[xi, s] * x + b[xi, s]; the offset is the zero-input value."""
    if input_space.dim != output_space.dim:
        raise ValueError("scalar-gain affine kernel requires matching dimensions")
    A = _as_gain_matrix(A, output_space.atom_count, input_space.atom_count)
    b_arr = np.asarray(b, dtype=float)
    if b_arr.shape == (output_space.atom_count, input_space.atom_count):
        b_arr = b_arr[:, :, None] * np.ones(output_space.dim)
    if b_arr.shape != (output_space.atom_count, input_space.atom_count, output_space.dim):
        raise ValueError("offset b must have shape (out, in) or (out, in, dim)")

    def ev(xi, s, x):
        return A[xi, s] * x + b_arr[xi, s]

    cfg = {
        "family": "affine",
        "A": A.tolist(),
        "b": b_arr.tolist(),
        "input_space": input_space.to_dict(),
        "output_space": output_space.to_dict(),
    }
    return Kernel(eval_fn=ev, psi=np.abs(A), input_space=input_space,
                  output_space=output_space, family="affine", config=cfg)


def saturating_kernel(
    gains,
    input_space: MeasureSpace,
    output_space: MeasureSpace,
    amplitude: float = 1.0,
) -> Kernel:
    """Componentwise tanh saturation at the given amplitude.

    K(xi, s, x) = amplitude * tanh(g[xi, s] * x / amplitude); the slope at 0
    makes psi = g exact.
    """
    if input_space.dim != output_space.dim:
        raise ValueError("saturating kernel requires matching dimensions")
    if not (amplitude > 0.0):
        raise ValueError("amplitude must be > 0")
    g = _as_gain_matrix(gains, output_space.atom_count, input_space.atom_count)
    if np.any(g < 0.0):
        raise ValueError("saturating gains must be >= 0")

    def ev(xi, s, x):
        return amplitude * np.tanh(g[xi, s] * x / amplitude)

    cfg = {
        "family": "saturating",
        "psi": g.tolist(),
        "amplitude": amplitude,
        "input_space": input_space.to_dict(),
        "output_space": output_space.to_dict(),
    }
    return Kernel(eval_fn=ev, psi=g, input_space=input_space,
                  output_space=output_space, family="saturating", config=cfg)


def kernel_from_config(cfg: dict) -> Kernel:
    """Build a kernel from its JSON-friendly config dict."""
    family = cfg.get("family")
    inp = MeasureSpace.from_dict(cfg["input_space"])
    out = MeasureSpace.from_dict(cfg["output_space"])
    if family == "linear":
        return linear_kernel(cfg["A"], inp, out)
    if family == "affine":
        return affine_kernel(cfg["A"], cfg["b"], inp, out)
    if family == "saturating":
        return saturating_kernel(cfg["psi"], inp, out, amplitude=cfg.get("amplitude", 1.0))
    raise ValueError(f"unknown kernel family {family!r}")


def kernel_from_json(text: str) -> Kernel:
    return kernel_from_config(json.loads(text))


@dataclass(frozen=True)
class ValidationReport:
    max_ratio: float
    passed: bool
    probes: int


def validate_kernel(kernel: Kernel, probes: SamplerConfig, tol: float = 1e-9) -> ValidationReport:
    """Probe the Lipschitz condition ||K(xi,s,x1) - K(xi,s,x2)|| <= psi[xi,s] ||x1 - x2||.

    Samples atom pairs and argument pairs across several magnitude scales
    and reports the worst observed ratio.  A nonzero difference where
    psi[xi, s] = 0 is a hard failure.
    """
    rng = np.random.default_rng(probes.seed)
    n_out, n_in = kernel.psi.shape
    max_ratio = 0.0
    for _ in range(probes.n_samples):
        xi = int(rng.integers(n_out))
        s = int(rng.integers(n_in))
        scale = 10.0 ** rng.uniform(-2.0, 2.0)
        x1 = rng.standard_normal(kernel.dim_in) * scale
        x2 = rng.standard_normal(kernel.dim_in) * scale
        dx = float(np.linalg.norm(x1 - x2))
        if dx == 0.0:
            continue
        dk = float(np.linalg.norm(kernel.eval(xi, s, x1) - kernel.eval(xi, s, x2)))
        lip = kernel.psi[xi, s]
        if lip == 0.0:
            if dk > tol * max(1.0, dx):
                raise KernelConditionError(
                    f"psi[{xi}, {s}] = 0 but the kernel moved by {dk} over that atom pair"
                )
            continue
        max_ratio = max(max_ratio, dk / (lip * dx))
    return ValidationReport(
        max_ratio=float(max_ratio), passed=bool(max_ratio <= 1.0 + tol), probes=probes.n_samples
    )


def apply_operator(kernel: Kernel, x: SimpleFunction) -> SimpleFunction:
    """Integrate the kernel against x: output atom xi gets sum_s w_s K(xi, s, x(s))."""
    if x.space != kernel.input_space:
        raise ValueError("input function lives on the wrong measure space")
    w = kernel.input_space.weight_array
    out = np.zeros((kernel.output_space.atom_count, kernel.dim_out))
    for xi in range(kernel.output_space.atom_count):
        acc = np.zeros(kernel.dim_out)
        for s in range(kernel.input_space.atom_count):
            acc += w[s] * kernel.eval(xi, s, x.values[s])
        out[xi] = acc
    return SimpleFunction(values=out, space=kernel.output_space)


@dataclass(frozen=True)
class SystemConstants:
    psi_star: float
    k_star: float
    theta_star: float
    psi_0: float

    def to_dict(self) -> dict:
        return {
            "psi_star": self.psi_star,
            "k_star": self.k_star,
            "theta_star": self.theta_star,
            "psi_0": self.psi_0,
        }


def system_constants(kernel: Kernel, r: float) -> SystemConstants:
    """psi_star, k_star, theta_star and the output bound psi_0 for radius r."""
    if not (r > 0.0):
        raise ValueError("r must be > 0")
    w_out = kernel.output_space.weight_array
    w_in = kernel.input_space.weight_array
    psi_star = float(np.dot(w_out, kernel.phi()))
    zero_norms = np.linalg.norm(kernel.zero_values(), axis=2)
    k_star = float(w_out @ zero_norms @ w_in)
    theta_star = max(1.0, kernel.input_space.total_measure)
    return SystemConstants(
        psi_star=psi_star,
        k_star=k_star,
        theta_star=theta_star,
        psi_0=psi_star * theta_star * r + k_star,
    )


@dataclass(frozen=True)
class OutputBoundReport:
    max_output_l1: float
    bound: float
    inputs_checked: int
    passed: bool


def output_bound_check(
    kernel: Kernel, p: float, r: float, sampler: SamplerConfig, tol: float = 1e-9
) -> OutputBoundReport:
    """Sample inputs in the p-ball and assert every output satisfies ||F(x)||_1 <= psi_0.

    The bound is a theorem for Lipschitz kernels, so any violation means an
    implementation bug and raises.
    """
    if not (p > 1.0):
        raise ValueError("output bound check requires p > 1")
    consts = system_constants(kernel, r)
    rng = np.random.default_rng(sampler.seed)
    inputs = ball_samples(kernel.input_space, p, r, rng, sampler.n_samples)
    inputs += ball_samples(kernel.input_space, p, r, rng, max(1, sampler.n_samples // 10), on_sphere=True)
    worst = 0.0
    for x in inputs:
        out_l1 = lp_norm(apply_operator(kernel, x), 1.0)
        worst = max(worst, out_l1)
        if out_l1 > consts.psi_0 + tol:
            raise KernelConditionError(
                f"output bound violated: ||F(x)||_1 = {out_l1} > psi_0 = {consts.psi_0}"
            )
    return OutputBoundReport(
        max_output_l1=worst, bound=consts.psi_0, inputs_checked=len(inputs), passed=True
    )


def _output_l1(a: SimpleFunction, b: SimpleFunction) -> float:
    return float(np.dot(a.space.weight_array, np.linalg.norm(a.values - b.values, axis=1)))


def _stack_outputs(outputs) -> np.ndarray:
    return np.stack([f.values for f in outputs])


def _directed_output_lower(
    kernel: Kernel,
    p_from: float,
    p_to: float,
    r: float,
    alpha_cap: float,
    sampler: SamplerConfig,
) -> float:
    """max over sampled inputs x of the distance from F(x) to a sampled hull
    of the other output set, sharpened by the transported witness F(w_x)."""
    space = kernel.input_space
    w_out = kernel.output_space.weight_array
    from_cands = sup_candidates(space, p_from, r, sampler, bridge_ps=(p_to,))
    to_cands = sup_candidates(space, p_to, r, sampler, bridge_ps=(p_from,))
    hull = _stack_outputs([apply_operator(kernel, z) for z in to_cands])
    fx = _stack_outputs([apply_operator(kernel, x) for x in from_cands])
    transported = _stack_outputs(
        [apply_operator(kernel, rescale(truncate(x, alpha_cap), p_from, p_to, r))
         for x in from_cands]
    )
    # per-x distance to its transported witness, then min over the shared hull
    d = np.linalg.norm(fx - transported, axis=2) @ w_out
    block = max(1, int(16_000_000 // max(1, hull.size)))
    for start in range(0, fx.shape[0], block):
        chunk = fx[start:start + block]
        gaps = np.linalg.norm(chunk[:, None] - hull[None], axis=3) @ w_out
        d[start:start + block] = np.minimum(d[start:start + block], gaps.min(axis=1))
    return float(d.max(initial=0.0))


def output_set_distance(
    kernel: Kernel,
    p_a: float,
    p_b: float,
    r: float,
    params: ProblemParams,
    ledger: BoundLedger,
    sampler: SamplerConfig,
) -> HausdorffEstimate:
    """Estimate the L1 Hausdorff distance between the output sets of two input balls.

    The lower bound is heuristic (output sets need not be convex, and the
    inner infimum runs over a sampled hull).  The certificate is
    psi_star * epsilon whenever |p_a - p_b| < delta0 and one exponent is
    p_star: nearby inputs transport to outputs within the operator's L1
    Lipschitz constant.
    """
    if params.p_star not in (p_a, p_b):
        raise ValueError("one of p_a, p_b must equal params.p_star")
    if not (params.epsilon < ledger.base.sigma_star):
        raise ValueError(
            f"epsilon={params.epsilon} must lie in (0, sigma_star={ledger.base.sigma_star})"
        )
    if p_a == p_b:
        cands = sup_candidates(kernel.input_space, p_a, r, sampler)
        return HausdorffEstimate(
            lower=0.0,
            upper=0.0,
            samples_used=2 * len(cands),
            certificate_source=CERT_NONE,
            seed=sampler.seed,
        )
    cap = 2.0 * ledger.base.alpha_star
    lo_ab = _directed_output_lower(kernel, p_a, p_b, r, cap, sampler)
    lo_ba = _directed_output_lower(kernel, p_b, p_a, r, cap, sampler)
    upper = None
    source = CERT_NONE
    if abs(p_a - p_b) < ledger.delta0:
        upper = system_constants(kernel, r).psi_star * params.epsilon
        source = CERT_THEOREM
    n_cands = kernel.input_space.atom_count + 1 + sampler.n_samples
    return HausdorffEstimate(
        lower=max(lo_ab, lo_ba),
        upper=upper,
        samples_used=2 * n_cands,
        certificate_source=source,
        seed=sampler.seed,
    )
