"""Acceptance gate: each test realizes one numbered criterion at its stated
tolerance and prints one pass/fail line (run with -s to watch them)."""

import json
import math
import time

import numpy as np
import pytest
from mpmath import mp, mpf
from mpmath import log as mplog
from mpmath import sqrt as mpsqrt

from lpball import (
    BallSpec,
    ProblemParams,
    SamplerConfig,
    ball_contains,
    base_constants,
    brute_force_hausdorff,
    delta_window,
    dist_to_ball,
    hausdorff_estimate,
    linear_kernel,
    affine_kernel,
    saturating_kernel,
    lp_norm,
    make_space,
    output_bound_check,
    output_set_distance,
    rescale,
    simple_function,
    system_constants,
    truncate,
    truncation_defect_bound,
    witness_into_ball,
)
from lpball.cli import build_config, run_experiment
from conftest import grid_scan_distance, random_ball_member, random_space

mp.dps = 40

TWO_ATOMS = make_space([1.0, 1.0], 1)
PARAMS = ProblemParams(p_star=2.0, r=1.0, mu_total=2.0, epsilon=0.4)


def _report(criterion: int, budget: float, elapsed: float, detail: str) -> None:
    status = "PASS" if elapsed < budget else "FAIL (over budget)"
    print(f"[acceptance] criterion {criterion}: {status} in {elapsed:.2f}s "
          f"(< {budget:.0f}s) :: {detail}")
    assert elapsed < budget, f"criterion {criterion} exceeded its runtime budget"


# ---------------------------------------------------------------- criterion 1

def _mp_ledger(ps: float, r: float, mu: float, eps: float) -> dict:
    """Arbitrary-precision re-evaluation of the whole constant chain,
    straight from the defining formulas."""
    P, R, MU, E = mpf(ps), mpf(r), mpf(mu), mpf(eps)
    c = max(mpf(1), mpsqrt(R), R ** ((P - 1) / (2 * P)))
    d = (MU + 1) * (c + 1)
    a_star = max(2 * R, R * (8 * R / E) ** (2 / (P - 1)))
    s_star = min(R / 2, 4 * d, 4 * R * MU, 4 * d * mpsqrt(R))
    a1, a2 = 2 * a_star, 3 * a_star

    def lg(b, a):
        return mplog(a) / mplog(b)

    L1 = lg(E / (4 * R * MU), 1 - E / (4 * a1 * MU))
    L2 = lg(a1 / R, 1 + E / (4 * a1 * MU))
    L3 = lg(a1 / R, a2 / a1)
    L4 = lg(R / a1, 1 - E / (4 * a1 * MU))
    L5 = lg(64 * R * d ** 2 / E ** 2, 1 + E / (4 * a1 * MU))
    s1 = P * (1 - 1 / (1 + L1))
    s2 = P * (1 - 1 / (1 + L2))
    s3 = P * (1 - 1 / (1 + L3))
    s4 = P * (1 / (1 - L4) - 1)
    s5 = P * (1 / (1 - L5) - 1)
    t1, t2, t3, t4, t5 = P * L4, P * L5, P * L3, P * L1, P * L2
    half = (P - 1) / 2
    g1 = min(s1, s2, s3, half)
    g2 = min(s4, s5, P)
    g3 = min(t1, t2, half)
    g4 = min(t3, t4, t5, P)
    d_lo, d_up = min(g1, g2), min(g3, g4)
    return {
        "c_star": c, "d_star": d, "alpha_star": a_star, "sigma_star": s_star,
        "sigma1": s1, "sigma2": s2, "sigma3": s3, "sigma4": s4, "sigma5": s5,
        "tau1": t1, "tau2": t2, "tau3": t3, "tau4": t4, "tau5": t5,
        "gamma1": g1, "gamma2": g2, "gamma3": g3, "gamma4": g4,
        "delta1": g1, "delta2": g2, "delta3": g3, "delta4": g4,
        "delta_lower": d_lo, "delta_upper": d_up, "delta0": min(d_lo, d_up),
    }


def test_criterion_1_constant_ledger_audit():
    start = time.time()
    rng = np.random.default_rng(1001)
    worst_rel = 0.0
    for _ in range(200):
        ps = float(rng.uniform(1.2, 6.0))
        r = float(rng.uniform(0.1, 10.0))
        mu = float(rng.uniform(0.1, 10.0))
        sigma = base_constants(ProblemParams(ps, r, mu, 1.0)).sigma_star
        eps = float(rng.uniform(0.01, 0.99)) * sigma
        led = delta_window(ProblemParams(ps, r, mu, eps))

        half = (ps - 1.0) / 2.0
        for v in (led.sigma1, led.sigma2, led.sigma3, led.sigma4, led.sigma5,
                  led.tau1, led.tau2, led.tau3, led.tau4, led.tau5,
                  led.gamma1, led.gamma2, led.gamma3, led.gamma4):
            assert v > 0.0
        assert led.gamma1 <= half and led.gamma3 <= half
        assert led.gamma2 <= ps and led.gamma4 <= ps
        assert 0.0 < led.delta0 <= half

        oracle = _mp_ledger(ps, r, mu, eps)
        mine = {k: v for k, v in led.to_dict().items() if k != "alpha_choices"}
        for key, exact in oracle.items():
            rel = abs(mine[key] - float(exact)) / max(1e-300, abs(float(exact)))
            worst_rel = max(worst_rel, rel)
            assert rel <= 1e-12, (key, ps, r, mu, eps, rel)
    _report(1, 5.0, time.time() - start,
            f"200 ledgers audited, worst relative deviation {worst_rel:.2e}")


# ---------------------------------------------------------------- criterion 2

def test_criterion_2_truncation_bound():
    start = time.time()
    rng = np.random.default_rng(1002)
    for _ in range(500):
        sp = random_space(rng)
        ps = float(rng.uniform(1.3, 4.0))
        r = float(rng.uniform(0.3, 3.0))
        mu = sp.total_measure
        sigma = base_constants(ProblemParams(ps, r, mu, 1.0)).sigma_star
        eps = float(rng.uniform(0.05, 0.95)) * sigma
        p = float(rng.uniform((ps + 1.0) / 2.0, 2.0 * ps))
        f = random_ball_member(rng, sp, p, r, on_sphere=bool(rng.integers(2)), spiky=True)

        alpha_any = float(rng.uniform(0.05, 3.0)) * r
        defect = lp_norm(
            simple_function(sp, f.values - truncate(f, alpha_any).values), 1.0
        )
        assert defect <= truncation_defect_bound(p, r, alpha_any) + 1e-9

        alpha_star = base_constants(ProblemParams(ps, r, mu, eps)).alpha_star
        alpha_big = alpha_star * float(rng.uniform(1.0, 4.0))
        defect_big = lp_norm(
            simple_function(sp, f.values - truncate(f, alpha_big).values), 1.0
        )
        assert defect_big <= truncation_defect_bound(p, r, alpha_big) + 1e-9
        assert defect_big <= eps / 4.0 + 1e-9
    _report(2, 5.0, time.time() - start, "500 random truncations within both bounds")


# ---------------------------------------------------------------- criterion 3

def test_criterion_3_rescale_ball_mapping():
    start = time.time()
    rng = np.random.default_rng(1003)
    for _ in range(500):
        sp = random_space(rng)
        from_p = float(rng.uniform(1.05, 6.0))
        to_p = float(rng.uniform(1.05, 6.0))
        r = float(rng.uniform(0.2, 4.0))
        f = random_ball_member(rng, sp, from_p, r, on_sphere=bool(rng.integers(2)))
        g = rescale(f, from_p, to_p, r)
        assert lp_norm(g, to_p) <= r + 1e-9
        expected = r * (f.atom_norms / r) ** (from_p / to_p)
        scale = np.maximum(expected, 1e-300)
        assert np.all(np.abs(g.atom_norms - expected) / scale <= 1e-12)
    _report(3, 5.0, time.time() - start, "500 rescales stayed in the target ball")


# ---------------------------------------------------------------- criterion 4

def test_criterion_4_witness_theorems():
    start = time.time()
    p2 = ProblemParams(p_star=2.0, r=1.0, mu_total=2.0, epsilon=0.4)
    led = delta_window(p2)
    rng = np.random.default_rng(1004)
    p_values = 2.0 + led.delta0 * rng.uniform(-1.0, 1.0, 20)
    checked = 0
    for p in p_values:
        p = float(p)
        for p_from, p_to in ((2.0, p), (p, 2.0)):
            for _ in range(50):
                f = random_ball_member(rng, TWO_ATOMS, p_from, 1.0,
                                       on_sphere=bool(rng.integers(2)))
                res = witness_into_ball(f, p_from, p_to, p2, led)
                assert res.certified, (p_from, p_to)
                assert ball_contains(res.target_ball, res.witness, 1e-9)
                assert res.l1_distance <= p2.epsilon + 1e-9
                checked += 1
    _report(4, 10.0, time.time() - start,
            f"{checked} witnesses inside their target balls within epsilon")


# ---------------------------------------------------------------- criterion 5

def test_criterion_5_projection_oracle_equivalence():
    start = time.time()
    analytic = dist_to_ball(
        simple_function(TWO_ATOMS, [1 / math.sqrt(2)] * 2), BallSpec(p=1.0, r=1.0)
    )
    assert analytic == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-6)

    rng = np.random.default_rng(1005)
    worst = 0.0
    for i in range(50):
        w = rng.uniform(0.6, 0.92, 2)
        sp = make_space(w, 1)
        p = 1.0 if i % 10 == 0 else float(rng.uniform(1.0, 4.0))
        ball = BallSpec(p=p, r=float(rng.uniform(0.5, 1.1)))
        y_vals = rng.standard_normal(2) * float(rng.uniform(0.2, 2.0))
        d = dist_to_ball(simple_function(sp, y_vals), ball)
        scan = grid_scan_distance(y_vals, w, ball, 1e-3)
        assert d <= scan + 1e-9  # the scan only sees a subset of the ball
        gap = abs(d - scan)
        worst = max(worst, gap)
        assert gap <= 2e-3, (i, d, scan)
    _report(5, 30.0, time.time() - start,
            f"50 instances, worst solver/grid gap {worst:.2e}")


# ---------------------------------------------------------------- criterion 6

def test_criterion_6_ball_hausdorff_oracle():
    start = time.time()
    target = math.sqrt(2.0) - 1.0
    oracle = brute_force_hausdorff(
        TWO_ATOMS, BallSpec(p=2.0, r=1.0), BallSpec(p=1.0, r=1.0), 1e-3
    )
    assert oracle == pytest.approx(target, abs=2e-3)
    est = hausdorff_estimate(
        TWO_ATOMS, BallSpec(p=2.0, r=1.0), BallSpec(p=1.0, r=1.0),
        SamplerConfig(seed=1006, n_samples=10_000),
    )
    assert est.lower >= 0.41
    assert est.samples_used >= 2 * 10_000
    _report(6, 60.0, time.time() - start,
            f"grid oracle {oracle:.4f}, sampled lower bound {est.lower:.5f}")


# ---------------------------------------------------------------- criterion 7

def test_criterion_7_continuity_trend():
    start = time.time()
    led = delta_window(PARAMS)
    cfg = SamplerConfig(seed=1007, n_samples=10_000)
    lowers = []
    for p in (3.0, 2.5, 2.25, 2.1, 2.01):
        est = hausdorff_estimate(
            TWO_ATOMS, BallSpec(p=p, r=1.0), BallSpec(p=2.0, r=1.0), cfg,
            params=PARAMS, ledger=led,
        )
        lowers.append(est.lower)
    assert all(a > b for a, b in zip(lowers, lowers[1:])), lowers
    assert lowers[-1] < 0.02

    for p_in in (2.0 - led.delta0 / 2, 2.0 + led.delta0 / 2):
        est = hausdorff_estimate(
            TWO_ATOMS, BallSpec(p=p_in, r=1.0), BallSpec(p=2.0, r=1.0), cfg,
            params=PARAMS, ledger=led,
        )
        assert est.upper == PARAMS.epsilon
        assert est.lower <= PARAMS.epsilon
    _report(7, 60.0, time.time() - start,
            "lower estimates " + ", ".join(f"{v:.4f}" for v in lowers))


# ---------------------------------------------------------------- criterion 8

def test_criterion_8_urysohn_suite():
    start = time.time()
    rng = np.random.default_rng(1008)
    inp = make_space([0.7, 1.2], 1)
    out = make_space([1.0, 0.5, 0.8], 1)
    a = rng.uniform(-1.5, 1.5, (3, 2))
    families = [
        linear_kernel(a, inp, out),
        affine_kernel(a, rng.uniform(-0.5, 0.5, (3, 2)), inp, out),
        saturating_kernel(rng.uniform(0.0, 2.0, (3, 2)), inp, out, amplitude=0.7),
    ]

    # (a) output bound on 500 sampled inputs per family (raises on violation)
    for kernel in families:
        rep = output_bound_check(kernel, 1.8, 1.2, SamplerConfig(seed=81, n_samples=500))
        assert rep.passed and rep.inputs_checked >= 500

    # (b) operator Lipschitz constant in L1 on 500 random pairs
    for kernel in families:
        psi_star = system_constants(kernel, 1.0).psi_star
        for _ in range(167):
            x = simple_function(inp, rng.standard_normal((2, 1)) * 2)
            y = simple_function(inp, rng.standard_normal((2, 1)) * 2)
            from lpball import apply_operator

            fx, fy = apply_operator(kernel, x), apply_operator(kernel, y)
            lhs = float(np.dot(out.weight_array, np.abs(fx.values - fy.values)[:, 0]))
            rhs = psi_star * float(np.dot(inp.weight_array, np.abs(x.values - y.values)[:, 0]))
            assert lhs <= rhs + 1e-10

    # (c) diagonal kernel: output-set estimates reproduce ball estimates
    diag = linear_kernel(np.eye(2), TWO_ATOMS, TWO_ATOMS)
    led = delta_window(PARAMS)
    cfg = SamplerConfig(seed=1008, n_samples=1500)
    worst_gap = 0.0
    for p in (2.5, 2.1):
        ball_est = hausdorff_estimate(TWO_ATOMS, BallSpec(p=p, r=1.0),
                                      BallSpec(p=2.0, r=1.0), cfg,
                                      params=PARAMS, ledger=led)
        out_est = output_set_distance(diag, p, 2.0, 1.0, PARAMS, led, cfg)
        worst_gap = max(worst_gap, abs(ball_est.lower - out_est.lower))
        assert abs(ball_est.lower - out_est.lower) <= 1e-3

    # (d) certificate dispatched exactly on the window
    psi_star = system_constants(diag, 1.0).psi_star
    inside = output_set_distance(diag, 2.0 + led.delta0 / 2, 2.0, 1.0, PARAMS, led, cfg)
    assert inside.upper == psi_star * PARAMS.epsilon
    assert inside.certificate_source == "theorem5_1"
    outside = output_set_distance(diag, 2.0 + 2 * led.delta0, 2.0, 1.0, PARAMS, led, cfg)
    assert outside.upper is None and outside.certificate_source == "none"
    _report(8, 60.0, time.time() - start,
            f"3 families bounded and Lipschitz; diagonal gap {worst_gap:.2e}")


# ---------------------------------------------------------------- criterion 9

def test_criterion_9_cli_reproducibility(tmp_path):
    start = time.time()
    led = delta_window(PARAMS)
    p_in = 2.0 + led.delta0 / 2
    grid = f"1.9,{p_in!r},2.0,2.1"
    ball_args = ["--mode", "ball_continuity", "--pstar", "2.0", "--r", "1.0",
                 "--epsilon", "0.4", "--weights", "1,1", "--p-grid", grid,
                 "--samples", "400", "--seed", "1009"]

    kernel_path = tmp_path / "kernel.json"
    kernel_path.write_text(json.dumps(
        linear_kernel(np.eye(2), TWO_ATOMS, TWO_ATOMS).to_config()
    ))
    ury_args = ["--mode", "urysohn", "--pstar", "2.0", "--r", "1.0",
                "--epsilon", "0.4", "--p-grid", grid, "--samples", "400",
                "--seed", "1009", "--kernel", str(kernel_path)]

    emitted = []
    for tag, args in (("ball", ball_args), ("urysohn", ury_args)):
        outs = []
        for run in ("first", "second"):
            path = tmp_path / f"{tag}_{run}.csv"
            report = run_experiment(build_config(args + ["--out", str(path)]))
            assert report.ok
            outs.append(path.read_bytes())
            emitted.extend(report.rows)
        assert outs[0] == outs[1], f"{tag} CSV not byte-identical"

    certified_rows = 0
    for row in emitted:
        if row.certified_upper is not None:
            certified_rows += 1
            assert row.h1_lower <= row.certified_upper + 1e-9
    assert certified_rows > 0
    _report(9, 60.0, time.time() - start,
            f"byte-identical reruns in both modes; sandwich held in "
            f"{certified_rows} certified rows of {len(emitted)}")
