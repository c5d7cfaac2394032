import numpy as np
import pytest

from lpball import SamplerConfig, ball_contains, ball_samples, lp_norm, make_space, sup_candidates
from lpball.sampling import flat_candidate, spike_candidates
from lpball.spaces import BallSpec


def test_spike_and_flat_live_on_the_sphere():
    sp = make_space([1.0, 0.25, 4.0], 2)
    for p in (1.0, 2.0, 3.5):
        for cand in spike_candidates(sp, p, 1.5) + [flat_candidate(sp, p, 1.5)]:
            assert lp_norm(cand, p) == pytest.approx(1.5, rel=1e-12)


def test_candidates_deterministic_and_prefix_stable():
    sp = make_space([1.0, 1.0], 1)
    a = sup_candidates(sp, 2.0, 1.0, SamplerConfig(seed=5, n_samples=40), bridge_ps=(3.0,))
    b = sup_candidates(sp, 2.0, 1.0, SamplerConfig(seed=5, n_samples=40), bridge_ps=(3.0,))
    assert len(a) == len(b) == sp.atom_count + 1 + 40
    for fa, fb in zip(a, b):
        assert np.array_equal(fa.values, fb.values)
    longer = sup_candidates(sp, 2.0, 1.0, SamplerConfig(seed=5, n_samples=80), bridge_ps=(3.0,))
    for fa, fl in zip(a, longer):
        assert np.array_equal(fa.values, fl.values)


def test_candidates_all_near_sphere():
    sp = make_space([0.5, 2.0], 3)
    for cand in sup_candidates(sp, 2.5, 0.8, SamplerConfig(seed=1, n_samples=100), bridge_ps=(1.5,)):
        assert lp_norm(cand, 2.5) == pytest.approx(0.8, rel=1e-9)


def test_ball_samples_are_members():
    sp = make_space([1.0, 3.0], 2)
    rng = np.random.default_rng(9)
    ball = BallSpec(p=1.8, r=2.0)
    for f in ball_samples(sp, 1.8, 2.0, rng, 50):
        assert ball_contains(ball, f, 1e-9)


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(seed=0, n_samples=-1)
