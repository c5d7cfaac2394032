"""Finite atomic measure spaces, vector-valued simple functions, weighted p-norms.

Everything in this package lives on a finite list of atoms with strictly
positive weights.  A "function" is one vector value per atom; integrals are
weighted sums, so every norm, ball and distance downstream is a finite
dimensional computation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "MeasureSpace",
    "SimpleFunction",
    "BallSpec",
    "make_space",
    "simple_function",
    "lp_norm",
    "combine",
    "ball_contains",
    "function_to_json",
    "function_from_json",
]

DEFAULT_MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class MeasureSpace:
    """Atoms with strictly positive finite weights; values live in R^dim."""

    weights: tuple
    dim: int

    @property
    def atom_count(self) -> int:
        return len(self.weights)

    @cached_property
    def weight_array(self) -> np.ndarray:
        w = np.asarray(self.weights, dtype=float)
        w.flags.writeable = False
        return w

    @cached_property
    def total_measure(self) -> float:
        return float(math.fsum(self.weights))

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "dim": self.dim}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MeasureSpace":
        return make_space(d["weights"], int(d["dim"]))

    @classmethod
    def from_json(cls, text: str) -> "MeasureSpace":
        return cls.from_dict(json.loads(text))


def make_space(weights: Sequence[float], dim: int = 1) -> MeasureSpace:
    """Validate and build a finite positive measure space.

    Rejects empty atom lists, non-positive or non-finite weights and dim < 1.
    """
    ws = [float(w) for w in weights]
    if not ws:
        raise ValueError("measure space needs at least one atom")
    for w in ws:
        if not math.isfinite(w) or w <= 0.0:
            raise ValueError(f"atom weights must be finite and > 0, got {w}")
    if int(dim) < 1:
        raise ValueError(f"value dimension must be >= 1, got {dim}")
    return MeasureSpace(weights=tuple(ws), dim=int(dim))


@dataclass(frozen=True, eq=False)
class SimpleFunction:
    """One vector value per atom of a measure space."""

    values: np.ndarray
    space: MeasureSpace

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        if vals.shape != (self.space.atom_count, self.space.dim):
            raise ValueError(
                f"values shape {vals.shape} does not match space "
                f"({self.space.atom_count} atoms, dim {self.space.dim})"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("simple function values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @cached_property
    def atom_norms(self) -> np.ndarray:
        n = np.linalg.norm(self.values, axis=1)
        n.flags.writeable = False
        return n

    def to_json(self) -> str:
        return json.dumps([list(row) for row in self.values])


def simple_function(space: MeasureSpace, values) -> SimpleFunction:
    return SimpleFunction(values=np.asarray(values, dtype=float), space=space)


def zero_function(space: MeasureSpace) -> SimpleFunction:
    return SimpleFunction(values=np.zeros((space.atom_count, space.dim)), space=space)


def function_to_json(f: SimpleFunction) -> str:
    return f.to_json()


def function_from_json(space: MeasureSpace, text: str) -> SimpleFunction:
    return simple_function(space, json.loads(text))


@dataclass(frozen=True)
class BallSpec:
    """A closed weighted p-ball of radius r, optionally with an atomwise cap.

    Membership means ||f||_p <= r, and additionally ||f(s)|| <= cap at every
    atom when a cap is present.
    """

    p: float
    r: float
    cap: Optional[float] = None

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError(f"ball exponent must satisfy p >= 1, got {self.p}")
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise ValueError(f"ball radius must be finite and > 0, got {self.r}")
        if self.cap is not None and not (self.cap > 0.0):
            raise ValueError(f"ball cap must be > 0, got {self.cap}")

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "cap": self.cap}


def lp_norm(f: SimpleFunction, p: float) -> float:
    """Weighted p-norm (sum_s w_s ||f(s)||^p)^(1/p); max atom norm for p = inf.

    The Euclidean norm is used inside each atom.  Large p is handled by
    factoring out the largest atom norm so the powers cannot overflow.
    """
    if p != math.inf and p < 1.0:
        raise ValueError(f"lp_norm requires p >= 1 or p = inf, got {p}")
    norms = f.atom_norms
    m = float(norms.max(initial=0.0))
    if m == 0.0:
        return 0.0
    if p == math.inf:
        return m
    if p == 1.0:
        return float(np.dot(f.space.weight_array, norms))
    acc = float(np.dot(f.space.weight_array, (norms / m) ** p))
    return m * acc ** (1.0 / p)


def combine(f: SimpleFunction, g: SimpleFunction, a: float, b: float) -> SimpleFunction:
    """Atomwise linear combination a*f + b*g on a shared space."""
    if f.space is not g.space and f.space != g.space:
        raise ValueError("combine requires both functions on the same measure space")
    return SimpleFunction(values=a * f.values + b * g.values, space=f.space)


def ball_contains(ball: BallSpec, f: SimpleFunction, tol: float = DEFAULT_MEMBERSHIP_TOL) -> bool:
    """Membership test with an explicit tolerance, never a hidden one."""
    if tol < 0.0:
        raise ValueError("tolerance must be >= 0")
    if lp_norm(f, ball.p) > ball.r + tol:
        return False
    if ball.cap is not None and float(f.atom_norms.max(initial=0.0)) > ball.cap + tol:
        return False
    return True
