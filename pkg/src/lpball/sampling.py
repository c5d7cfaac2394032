"""Seeded candidate generation on p-spheres.

Supremum estimation over a ball only ever needs sphere points (the
objective functions involved are convex), so candidates come in three
deterministic-first groups:

1. spikes: all mass on a single atom, the most concentrated sphere points;
2. the flat profile: every atom at equal norm, the most spread out one;
3. a seeded stream of random directions scaled onto the sphere, every
   fourth one drawn on a bridge exponent's sphere and carried over by the
   powerlaw rescale map.

The list for a given (space, p, r, seed) is prefix-stable in n_samples, so
lower bounds can only grow as more samples are requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .spaces import MeasureSpace, SimpleFunction, lp_norm, simple_function
from .witness import rescale

__all__ = [
    "SamplerConfig",
    "sphere_point",
    "spike_candidates",
    "flat_candidate",
    "sup_candidates",
    "ball_samples",
]


@dataclass(frozen=True)
class SamplerConfig:
    """Seed plus sample count; identical configs reproduce identical streams."""

    seed: int
    n_samples: int

    def __post_init__(self):
        if self.n_samples < 0:
            raise ValueError("n_samples must be >= 0")


def sphere_point(space: MeasureSpace, p: float, r: float, values) -> SimpleFunction:
    """Scale the given values onto the p-sphere of radius r."""
    f = simple_function(space, values)
    n = lp_norm(f, p)
    if n == 0.0:
        raise ValueError("cannot scale the zero function onto a sphere")
    return simple_function(space, f.values * (r / n))


def spike_candidates(space: MeasureSpace, p: float, r: float) -> List[SimpleFunction]:
    """One sphere point per atom with all mass on that atom."""
    out = []
    for i, w in enumerate(space.weights):
        vals = np.zeros((space.atom_count, space.dim))
        vals[i, 0] = r / w ** (1.0 / p)
        out.append(simple_function(space, vals))
    return out


def flat_candidate(space: MeasureSpace, p: float, r: float) -> SimpleFunction:
    """The equal-norm sphere point (all atoms carry the same value)."""
    c = r / space.total_measure ** (1.0 / p)
    vals = np.zeros((space.atom_count, space.dim))
    vals[:, 0] = c
    return simple_function(space, vals)


def _random_direction(rng: np.random.Generator, space: MeasureSpace) -> np.ndarray:
    g = rng.standard_normal((space.atom_count, space.dim))
    while not np.any(g):
        g = rng.standard_normal((space.atom_count, space.dim))
    return g


def sup_candidates(
    space: MeasureSpace,
    p: float,
    r: float,
    sampler: SamplerConfig,
    bridge_ps: Sequence[float] = (),
) -> List[SimpleFunction]:
    """Deterministic candidates followed by a seeded sphere stream."""
    cands = spike_candidates(space, p, r)
    cands.append(flat_candidate(space, p, r))
    bridges = [q for q in bridge_ps if 1.0 < q < math.inf and q != p and 1.0 < p < math.inf]
    rng = np.random.default_rng(sampler.seed)
    for i in range(sampler.n_samples):
        g = _random_direction(rng, space)
        if bridges and i % 4 == 3:
            q = bridges[(i // 4) % len(bridges)]
            cands.append(rescale(sphere_point(space, q, r, g), q, p, r))
        else:
            cands.append(sphere_point(space, p, r, g))
    return cands


def ball_samples(
    space: MeasureSpace,
    p: float,
    r: float,
    rng: np.random.Generator,
    n: int,
    on_sphere: bool = False,
) -> List[SimpleFunction]:
    """Random members of the p-ball (interior by default)."""
    out = []
    for _ in range(n):
        g = _random_direction(rng, space)
        pt = sphere_point(space, p, r, g)
        t = 1.0 if on_sphere else rng.uniform()
        out.append(simple_function(space, pt.values * t))
    return out
