"""L1 distances between weighted p-balls: exact point-to-ball distance,
sampled directed lower bounds, certified two-sided estimates, and a dense
grid oracle for tiny instances.

The point-to-ball distance sum_s w_s ||y(s) - x(s)|| over ||x||_p <= r
collapses to a scalar problem: aligning x(s) with y(s) is optimal because
the constraint only sees atom norms, and the norms of the optimizer have
the clipped-constant form m_s = min(||y(s)||, c).  The level c solves the
one-dimensional monotone equation sum_s w_s min(||y(s)||, c)^p = r^p, which
a bracketed root finder pins to machine precision.  Atom caps clip the
upper bounds and leave the structure intact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .bounds import BoundLedger, ProblemParams
from .sampling import SamplerConfig, sup_candidates
from .spaces import BallSpec, MeasureSpace, SimpleFunction, ball_contains
from .witness import truncate, truncation_defect_bound

__all__ = [
    "HausdorffEstimate",
    "CertificateSandwichError",
    "ProjectionSolverError",
    "dist_to_ball",
    "directed_distance_lower",
    "hausdorff_estimate",
    "brute_force_hausdorff",
]

CERT_THEOREM = "theorem5_1"
CERT_TRUNCATION = "truncation_eq23"
CERT_NONE = "none"

_SANDWICH_TOL = 1e-9
_GRID_CELL_LIMIT = 60_000_000


class CertificateSandwichError(RuntimeError):
    """A sampled lower bound exceeded an analytic certificate; something is wrong."""


class ProjectionSolverError(RuntimeError):
    """Root finder failed; carries the best (lower, upper) bracket found."""

    def __init__(self, message: str, bracket: Tuple[float, float]):
        super().__init__(f"{message} (bracket {bracket})")
        self.bracket = bracket


def dist_to_ball(y: SimpleFunction, ball: BallSpec, tol: float = 1e-9) -> float:
    """Exact weighted L1 distance from y to the ball; 0.0 for members."""
    if ball.p == math.inf:
        raise ValueError("dist_to_ball requires a finite ball exponent")
    if ball_contains(ball, y, tol):
        return 0.0
    w = y.space.weight_array
    u = y.atom_norms
    ub = u if ball.cap is None else np.minimum(u, ball.cap)
    r, p = ball.r, ball.p

    if p == 1.0:
        reachable = min(r, float(np.dot(w, ub)))
        return max(0.0, float(np.dot(w, u)) - reachable)

    # normalized constraint: h(c) = sum_s w_s (min(ub_s, c)/r)^p - 1
    if float(np.dot(w, (ub / r) ** p)) <= 1.0:
        return float(np.dot(w, u - ub))

    hi = float(ub.max())

    def h(c: float) -> float:
        return float(np.dot(w, (np.minimum(ub, c) / r) ** p)) - 1.0

    try:
        c = brentq(h, 0.0, hi, xtol=1e-15 * max(1.0, hi), rtol=8.9e-16, maxiter=200)
    except (RuntimeError, ValueError) as exc:  # non-convergence or broken bracket
        raise ProjectionSolverError(f"ball projection root find failed: {exc}", (0.0, hi))
    m = np.minimum(ub, c)
    return float(np.dot(w, u - m))


def _batch_dist_to_ball(
    U: np.ndarray, w: np.ndarray, ball: BallSpec, tol: float = 1e-9
) -> np.ndarray:
    """Distances for a batch of atom-norm rows, by vectorized bisection.

    Mirrors dist_to_ball: members (within tol) get exactly 0.0, otherwise
    the align-and-clip structure applies with the level c of each row found
    by 64 bisection steps of the monotone constraint function.
    """
    r, p = ball.r, ball.p
    UB = U if ball.cap is None else np.minimum(U, ball.cap)
    member = ((U / r) ** p) @ w <= ((r + tol) / r) ** p
    if ball.cap is not None:
        member &= U.max(axis=1, initial=0.0) <= ball.cap + tol
    if p == 1.0:
        reachable = np.minimum(r, UB @ w)
        d = np.maximum(0.0, U @ w - reachable)
        d[member] = 0.0
        return d
    budget = ((UB / r) ** p) @ w
    d = (U - UB) @ w
    tight = (budget > 1.0) & ~member
    if np.any(tight):
        ub = UB[tight]
        lo = np.zeros(ub.shape[0])
        hi = ub.max(axis=1)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            over = ((np.minimum(ub, mid[:, None]) / r) ** p) @ w > 1.0
            hi = np.where(over, mid, hi)
            lo = np.where(over, lo, mid)
        c = 0.5 * (lo + hi)
        d[tight] = (U[tight] - np.minimum(ub, c[:, None])) @ w
    d[member] = 0.0
    return d


def directed_distance_lower(
    space: MeasureSpace,
    from_ball: BallSpec,
    to_ball: BallSpec,
    sampler: SamplerConfig,
) -> float:
    """Sampled lower bound of sup over from_ball of the distance to to_ball.

    Candidates live on the from-sphere (the sup of a convex function over a
    ball is attained there); a cap on the from-ball is honored by clipping.
    """
    cands = sup_candidates(space, from_ball.p, from_ball.r, sampler, bridge_ps=(to_ball.p,))
    if from_ball.cap is not None:
        cands = [truncate(c, from_ball.cap) for c in cands]
    U = np.stack([c.atom_norms for c in cands])
    dists = _batch_dist_to_ball(U, space.weight_array, to_ball)
    return float(dists.max(initial=0.0))


@dataclass(frozen=True)
class HausdorffEstimate:
    """Sampled lower bound, optional analytic upper certificate, provenance."""

    lower: float
    upper: Optional[float]
    samples_used: int
    certificate_source: str
    seed: int

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper + _SANDWICH_TOL:
            raise CertificateSandwichError(
                f"sampled lower bound {self.lower} exceeds certificate {self.upper} "
                f"(source {self.certificate_source})"
            )

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "samples_used": self.samples_used,
            "certificate_source": self.certificate_source,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _candidate_count(space: MeasureSpace, sampler: SamplerConfig) -> int:
    return space.atom_count + 1 + sampler.n_samples


def _certificate(
    ball_a: BallSpec,
    ball_b: BallSpec,
    params: Optional[ProblemParams],
    ledger: Optional[BoundLedger],
) -> Tuple[Optional[float], str]:
    if ball_a == ball_b:
        return 0.0, CERT_NONE
    if (
        ledger is not None
        and params is not None
        and ball_a.cap is None
        and ball_b.cap is None
        and ball_a.r == ball_b.r == params.r
        and (ball_a.p == params.p_star or ball_b.p == params.p_star)
        and abs(ball_a.p - ball_b.p) < ledger.delta0
    ):
        return params.epsilon, CERT_THEOREM
    if ball_a.p == ball_b.p and ball_a.r == ball_b.r and ball_a.p > 1.0:
        caps = (ball_a.cap, ball_b.cap)
        if (caps[0] is None) != (caps[1] is None):
            cap = caps[0] if caps[0] is not None else caps[1]
            return truncation_defect_bound(ball_a.p, ball_a.r, cap), CERT_TRUNCATION
    return None, CERT_NONE


def hausdorff_estimate(
    space: MeasureSpace,
    ball_a: BallSpec,
    ball_b: BallSpec,
    sampler: SamplerConfig,
    params: Optional[ProblemParams] = None,
    ledger: Optional[BoundLedger] = None,
) -> HausdorffEstimate:
    """Two-sided sampled lower bound plus an analytic upper certificate when one applies.

    Certificates: epsilon for two uncapped balls of the shared radius whose
    exponents straddle p_star within delta0; 2 r^p/alpha^(p-1) for a
    capped/uncapped pair at equal p and r; 0 for identical specs.  Without a
    certificate the estimate is a lower bound only.
    """
    lower_ab = directed_distance_lower(space, ball_a, ball_b, sampler)
    lower_ba = directed_distance_lower(space, ball_b, ball_a, sampler)
    upper, source = _certificate(ball_a, ball_b, params, ledger)
    return HausdorffEstimate(
        lower=max(lower_ab, lower_ba),
        upper=upper,
        samples_used=2 * _candidate_count(space, sampler),
        certificate_source=source,
        seed=sampler.seed,
    )


def _ball_extent(ball: BallSpec, weight: float) -> float:
    e = ball.r / weight ** (1.0 / ball.p)
    if ball.cap is not None:
        e = min(e, ball.cap)
    return e


def _axis_view(ax: np.ndarray, i: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[i] = -1
    return ax.reshape(shape)


def _membership_mask(axes, weights, ball: BallSpec) -> np.ndarray:
    shape = tuple(len(ax) for ax in axes)
    acc = np.zeros(shape)
    for i, ax in enumerate(axes):
        acc = acc + _axis_view(weights[i] * (np.abs(ax) / ball.r) ** ball.p, i, len(axes))
    mask = acc <= 1.0
    if ball.cap is not None:
        for i, ax in enumerate(axes):
            mask = mask & _axis_view(np.abs(ax) <= ball.cap, i, len(axes))
    return mask


def _l1_distance_transform(mask: np.ndarray, weights, res: float) -> np.ndarray:
    """Exact weighted-L1 distance to the masked set on an axis-aligned grid.

    Separable: one forward and one backward sweep per axis with step cost
    w_axis * res computes the exact transform for this metric.
    """
    d = np.where(mask, 0.0, np.inf)
    for ax in range(mask.ndim):
        step = weights[ax] * res
        view = np.moveaxis(d, ax, 0)
        for i in range(1, view.shape[0]):
            view[i] = np.minimum(view[i], view[i - 1] + step)
        for i in range(view.shape[0] - 2, -1, -1):
            view[i] = np.minimum(view[i], view[i + 1] + step)
    return d


def brute_force_hausdorff(
    space: MeasureSpace,
    ball_a: BallSpec,
    ball_b: BallSpec,
    grid_res: float,
) -> float:
    """Dense-grid Hausdorff distance for scalar spaces with at most 3 atoms.

    Enumerates both balls on a shared grid of cell size grid_res and takes
    the max over each grid ball of the exact weighted-L1 distance transform
    of the other.  Accuracy is O(grid_res * total_measure).  This is the
    independent oracle the iterative machinery is validated against.
    """
    if space.dim != 1:
        raise ValueError("brute_force_hausdorff supports scalar values only (dim = 1)")
    if space.atom_count > 3:
        raise ValueError("brute_force_hausdorff supports at most 3 atoms")
    if not (grid_res > 0.0):
        raise ValueError("grid_res must be > 0")
    for ball in (ball_a, ball_b):
        if ball.p == math.inf:
            raise ValueError("grid oracle requires finite ball exponents")

    w = space.weight_array
    axes = []
    cells = 1
    for i in range(space.atom_count):
        ext = max(_ball_extent(ball_a, w[i]), _ball_extent(ball_b, w[i]))
        n = int(math.ceil(ext / grid_res)) + 1
        axes.append(np.arange(-n, n + 1) * grid_res)
        cells *= 2 * n + 1
    if cells > _GRID_CELL_LIMIT:
        raise ValueError(
            f"grid of {cells} cells exceeds the oracle budget; coarsen grid_res"
        )

    mask_a = _membership_mask(axes, w, ball_a)
    mask_b = _membership_mask(axes, w, ball_b)
    dt_a = _l1_distance_transform(mask_a, w, grid_res)
    dt_b = _l1_distance_transform(mask_b, w, grid_res)
    return float(max(dt_b[mask_a].max(), dt_a[mask_b].max()))
