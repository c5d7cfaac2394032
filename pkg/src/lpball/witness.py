"""Constructive maps carrying a point of one p-ball near another p-ball.

Two primitives compose into every certificate:

* ``truncate`` clips each atom value radially to a cap alpha.  For a
  function in the p-ball of radius r the L1 defect is at most
  2 r^p / alpha^(p-1) (a Chebyshev-plus-Hoelder argument).
* ``rescale`` raises each atom norm to the power from_p/to_p (relative to
  the radius r), which maps the from_p-ball of radius r exactly into the
  to_p-ball of radius r.

``witness_into_ball`` chains the two with the canonical cap 2*alpha_star
and reports the measured L1 distance next to the analytic bound that the
window certifies for the configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import BoundLedger, ProblemParams, delta_window
from .spaces import BallSpec, SimpleFunction, ball_contains

__all__ = [
    "WitnessResult",
    "PartitionDiagnostics",
    "truncate",
    "truncation_defect_bound",
    "rescale",
    "witness_into_ball",
    "partition_diagnostics",
]

_BALL_TOL = 1e-9


def truncate(f: SimpleFunction, alpha: float) -> SimpleFunction:
    """Radially clip every atom value to norm at most alpha.

    The comparison carries a few-ulp slack so clipping is exactly
    idempotent despite the rounding of the rescaled norms.
    """
    if not (alpha > 0.0):
        raise ValueError(f"truncation cap must be > 0, got {alpha}")
    norms = f.atom_norms
    over = norms > alpha * (1.0 + 4.0 * np.finfo(float).eps)
    if not over.any():
        return f
    scale = np.ones_like(norms)
    scale[over] = alpha / norms[over]
    return SimpleFunction(values=f.values * scale[:, None], space=f.space)


def truncation_defect_bound(p: float, r: float, alpha: float) -> float:
    """Upper bound 2 r^p / alpha^(p-1) on ||f - truncate(f, alpha)||_1 over the p-ball."""
    if not (p > 1.0):
        raise ValueError(f"truncation defect bound needs p > 1, got {p}")
    if not (r > 0.0 and alpha > 0.0):
        raise ValueError("r and alpha must be > 0")
    return 2.0 * r * (r / alpha) ** (p - 1.0)


def rescale(f: SimpleFunction, from_p: float, to_p: float, r: float) -> SimpleFunction:
    """Powerlaw renormalization sending the from_p-ball of radius r into the to_p-ball.

    Atomwise the image keeps the direction of f(s) and has norm
    r * (||f(s)|| / r)^(from_p/to_p); zero atoms map to zero (the continuous
    extension).  If ||f||_from <= r then ||image||_to <= r exactly.
    """
    if not (1.0 < from_p < math.inf and 1.0 < to_p < math.inf):
        raise ValueError(f"rescale needs exponents in (1, inf), got {from_p} -> {to_p}")
    if not (r > 0.0):
        raise ValueError(f"radius must be > 0, got {r}")
    if from_p == to_p:
        return f
    norms = f.atom_norms
    new_norms = r * (norms / r) ** (from_p / to_p)
    scale = np.zeros_like(norms)
    nz = norms > 0.0
    scale[nz] = new_norms[nz] / norms[nz]
    return SimpleFunction(values=f.values * scale[:, None], space=f.space)


@dataclass(frozen=True)
class WitnessResult:
    """A constructed ball member plus its measured and certified L1 defects."""

    witness: SimpleFunction
    l1_distance: float
    certified_bound: Optional[float]
    target_ball: BallSpec
    window: Optional[str]  # which delta window certified this, if any

    @property
    def certified(self) -> bool:
        return self.certified_bound is not None

    def to_dict(self) -> dict:
        return {
            "witness": [list(row) for row in self.witness.values],
            "l1_distance": self.l1_distance,
            "certified_bound": self.certified_bound,
            "target_ball": self.target_ball.to_dict(),
            "window": self.window,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _near(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


def witness_into_ball(
    f: SimpleFunction,
    from_p: float,
    to_p: float,
    params: ProblemParams,
    ledger: Optional[BoundLedger] = None,
) -> WitnessResult:
    """Truncate at 2*alpha_star, rescale from from_p to to_p, certify if possible.

    The certificate dispatch needs one of the two exponents to equal
    params.p_star; the direction then selects which delta window applies:

        from_p = p_star, to_p below : delta1      (bound epsilon)
        from_p = p_star, to_p above : delta2      (bound epsilon)
        to_p = p_star, from_p below : delta3      (bound epsilon)
        to_p = p_star, from_p above : delta4      (bound epsilon)
        from_p = to_p in the admissible range : truncation only (bound epsilon/4)

    Out-of-window or off-pattern configurations still return the witness,
    flagged uncertified (no bound).
    """
    if ledger is None:
        ledger = delta_window(params)
    r, eps, ps = params.r, params.epsilon, params.p_star

    core = truncate(f, 2.0 * ledger.base.alpha_star)
    w = rescale(core, from_p, to_p, r)
    l1 = float(np.dot(f.space.weight_array, np.linalg.norm(f.values - w.values, axis=1)))
    target = BallSpec(p=to_p, r=r)

    window = None
    bound = None
    if ball_contains(BallSpec(p=from_p, r=r), f, _BALL_TOL):
        if _near(from_p, to_p):
            if (ps + 1.0) / 2.0 <= from_p <= 2.0 * ps:
                window, bound = "truncation", eps / 4.0
        elif _near(from_p, ps):
            if to_p < ps and ps - to_p < ledger.delta1:
                window, bound = "delta1", eps
            elif to_p > ps and to_p - ps < ledger.delta2:
                window, bound = "delta2", eps
        elif _near(to_p, ps):
            if from_p < ps and ps - from_p < ledger.delta3:
                window, bound = "delta3", eps
            elif from_p > ps and from_p - ps < ledger.delta4:
                window, bound = "delta4", eps

    return WitnessResult(
        witness=w,
        l1_distance=l1,
        certified_bound=bound,
        target_ball=target,
        window=window,
    )


@dataclass(frozen=True)
class PartitionDiagnostics:
    """Measure split of the atoms below and above a norm threshold."""

    small_set_measure: float
    large_set_measure: float
    threshold: float


def partition_diagnostics(
    f: SimpleFunction, threshold: float, cap: Optional[float] = None
) -> PartitionDiagnostics:
    """Measure the sets {||f(s)|| <= threshold} and {threshold < ||f(s)|| (<= cap)}."""
    if threshold < 0.0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    norms = f.atom_norms
    w = f.space.weight_array
    small = float(w[norms <= threshold].sum())
    above = norms > threshold
    if cap is not None:
        above = above & (norms <= cap)
    large = float(w[above].sum())
    return PartitionDiagnostics(
        small_set_measure=small, large_set_measure=large, threshold=threshold
    )
