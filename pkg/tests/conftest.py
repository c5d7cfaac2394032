import math

import numpy as np
import pytest

from lpball import BallSpec, MeasureSpace, SimpleFunction, make_space, simple_function


def random_space(rng: np.random.Generator, max_atoms: int = 5, max_dim: int = 3) -> MeasureSpace:
    atoms = int(rng.integers(1, max_atoms + 1))
    dim = int(rng.integers(1, max_dim + 1))
    weights = rng.uniform(0.2, 3.0, atoms)
    return make_space(weights, dim)


def random_ball_member(
    rng: np.random.Generator,
    space: MeasureSpace,
    p: float,
    r: float,
    on_sphere: bool = False,
    spiky: bool = False,
) -> SimpleFunction:
    g = rng.standard_normal((space.atom_count, space.dim))
    if spiky:
        # heavy-tailed atom scales so truncation actually bites
        g = g * rng.pareto(1.5, size=(space.atom_count, 1))
    from lpball import lp_norm

    f = simple_function(space, g)
    n = lp_norm(f, p)
    if n == 0.0:
        return f
    t = 1.0 if on_sphere else float(rng.uniform())
    return simple_function(space, f.values * (t * r / n))


def grid_scan_distance(y_values: np.ndarray, weights: np.ndarray, ball: BallSpec, res: float) -> float:
    """Dumb independent oracle: min weighted-L1 distance from y to the grid
    points inside a 2-atom scalar ball."""
    assert len(weights) == 2
    axes = []
    for w in weights:
        ext = ball.r / w ** (1.0 / ball.p)
        if ball.cap is not None:
            ext = min(ext, ball.cap)
        n = int(math.ceil(ext / res)) + 1
        axes.append(np.arange(-n, n + 1) * res)
    a0 = axes[0][:, None]
    a1 = axes[1][None, :]
    inside = (
        weights[0] * (np.abs(a0) / ball.r) ** ball.p
        + weights[1] * (np.abs(a1) / ball.r) ** ball.p
    ) <= 1.0
    if ball.cap is not None:
        inside &= (np.abs(a0) <= ball.cap) & (np.abs(a1) <= ball.cap)
    dist = weights[0] * np.abs(y_values[0] - a0) + weights[1] * np.abs(y_values[1] - a1)
    return float(dist[inside].min())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
