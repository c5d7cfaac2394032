"""Closed-form constants certifying how far p may move from p_star.

For a query (p_star, r, mu_total, epsilon) this module evaluates the whole
chain of explicit constants behind the continuity certificate for the map
p -> B_p(r) under the L1 Hausdorff pseudometric:

    c_star, d_star, alpha_star(eps), sigma_star      (base constants)
    sigma_1..sigma_5, tau_1..tau_5                   (log-ratio ingredients)
    gamma_1..gamma_4                                 (one-sided window radii)
    delta_1..delta_4, delta_lower, delta_upper       (canonical alpha choices)
    delta_0                                          (two-sided certified window)

Whenever |p - p_star| < delta_0(eps), the p-ball and the p_star-ball are
within epsilon of each other in the L1 pseudometric.  Every intermediate
constant is stored so a ledger can be audited without recomputation.

All non-natural-base logarithms are evaluated as ln(arg)/ln(base), with the
argument side routed through log1p where it has the form 1 +/- tiny.  Bases
may lie in (0, 1); each evaluation guards base > 0, base != 1, arg > 0 and
names the offending sub-formula on failure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

__all__ = [
    "ProblemParams",
    "BaseConstants",
    "BoundLedger",
    "FormulaDomainError",
    "WindowPreconditionError",
    "base_constants",
    "gamma1",
    "gamma2",
    "gamma3",
    "gamma4",
    "delta_window",
]


class FormulaDomainError(ValueError):
    """A logarithm guard failed; the message names the sub-formula."""


class WindowPreconditionError(ValueError):
    """An input violates a window precondition; the message names the inequality."""


@dataclass(frozen=True)
class ProblemParams:
    """The four numbers a window query depends on."""

    p_star: float
    r: float
    mu_total: float
    epsilon: float

    def __post_init__(self):
        if not (self.p_star > 1.0 and math.isfinite(self.p_star)):
            raise ValueError(f"p_star must be finite and > 1, got {self.p_star}")
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise ValueError(f"r must be finite and > 0, got {self.r}")
        if not (self.mu_total > 0.0 and math.isfinite(self.mu_total)):
            raise ValueError(f"mu_total must be finite and > 0, got {self.mu_total}")
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be finite and > 0, got {self.epsilon}")


@dataclass(frozen=True)
class BaseConstants:
    """Epsilon-independent scale constants plus the cap level alpha_star(eps)."""

    c_star: float
    d_star: float
    alpha_star: float
    sigma_star: float
    epsilon: float

    @property
    def epsilon_valid(self) -> bool:
        """Whether the stored epsilon admits window queries (eps < sigma_star)."""
        return 0.0 < self.epsilon < self.sigma_star

    def to_dict(self) -> dict:
        return {
            "c_star": self.c_star,
            "d_star": self.d_star,
            "alpha_star": self.alpha_star,
            "sigma_star": self.sigma_star,
        }


def _c_star(p_star: float, r: float) -> float:
    # max of r^((p - p_star)/p) over p in [p_star, 2 p_star] and of
    # r^((p_star - p)/p_star) over p in [(p_star + 1)/2, p_star]; both
    # exponents are monotone in p, so the endpoints carry the max.
    cands = (1.0, math.sqrt(r), r ** ((p_star - 1.0) / (2.0 * p_star)))
    c = max(cands)
    if __debug__:
        grid_max = 1.0
        for k in range(65):
            t = k / 64.0
            pa = p_star + t * p_star
            pb = (p_star + 1.0) / 2.0 + t * (p_star - 1.0) / 2.0
            grid_max = max(grid_max, r ** ((pa - p_star) / pa), r ** ((p_star - pb) / p_star))
        assert grid_max <= c * (1.0 + 1e-12), "endpoint maximization missed the grid max"
    return c


def base_constants(params: ProblemParams) -> BaseConstants:
    """Evaluate c_star, d_star, alpha_star(eps) and sigma_star.

    Does not reject epsilon >= sigma_star itself (callers may probe for a
    valid epsilon); the result records validity via ``epsilon_valid``.
    """
    p, r, mu, eps = params.p_star, params.r, params.mu_total, params.epsilon
    c = _c_star(p, r)
    d = (mu + 1.0) * (c + 1.0)
    try:
        alpha = max(2.0 * r, r * (8.0 * r / eps) ** (2.0 / (p - 1.0)))
    except OverflowError:
        alpha = math.inf
    if not math.isfinite(alpha):
        raise FormulaDomainError(
            f"alpha_star overflows for epsilon={eps}, p_star={p}: "
            f"(8r/eps)^(2/(p_star-1)) exceeds double range"
        )
    sigma = min(r / 2.0, 4.0 * d, 4.0 * r * mu, 4.0 * d * math.sqrt(r))
    return BaseConstants(c_star=c, d_star=d, alpha_star=alpha, sigma_star=sigma, epsilon=eps)


def _require(cond: bool, inequality: str) -> None:
    if not cond:
        raise WindowPreconditionError(f"precondition violated: {inequality}")


def _check_epsilon(params: ProblemParams, base: BaseConstants) -> None:
    _require(
        params.epsilon < base.sigma_star,
        f"epsilon < sigma_star required, got epsilon={params.epsilon} >= sigma_star={base.sigma_star}",
    )


def _log_base(base: float, label: str) -> float:
    if not (base > 0.0) or base == 1.0 or not math.isfinite(base):
        raise FormulaDomainError(f"{label}: log base must be positive, finite and != 1, got {base}")
    return math.log(base)


def _log_ratio_1p(base: float, delta: float, label: str) -> float:
    """log_base(1 + delta) computed as log1p(delta)/ln(base), with guards."""
    if 1.0 + delta <= 0.0:
        raise FormulaDomainError(f"{label}: log argument 1 + ({delta}) must be > 0")
    return math.log1p(delta) / _log_base(base, label)


def _log_ratio(base: float, arg: float, label: str) -> float:
    if not (arg > 0.0):
        raise FormulaDomainError(f"{label}: log argument must be > 0, got {arg}")
    return math.log(arg) / _log_base(base, label)


# The ten log-ratio ingredients.  Shapes:
#   sigma_1..3 = p_star * L / (1 + L)  with L > 0
#   sigma_4..5 = p_star * L / (1 - L)  with 0 < L < 1
#   tau_1..5   = p_star * L            with L > 0
# where each L is a specific base-log of a ratio near 1.


def _L1(p_star, r, mu, eps, alpha1):
    return _log_ratio_1p(eps / (4.0 * r * mu), -eps / (4.0 * alpha1 * mu), "sigma_1/tau_4 inner log")


def _L2(p_star, r, eps, mu, alpha1):
    return _log_ratio_1p(alpha1 / r, eps / (4.0 * alpha1 * mu), "sigma_2/tau_5 inner log")


def _L3(r, alpha1, alpha2):
    return _log_ratio(alpha1 / r, alpha2 / alpha1, "sigma_3/tau_3 inner log")


def _L4(r, mu, eps, alpha):
    return _log_ratio_1p(r / alpha, -eps / (4.0 * alpha * mu), "sigma_4/tau_1 inner log")


def _L5(r, mu, eps, alpha, d_star):
    return _log_ratio_1p(64.0 * r * d_star * d_star / (eps * eps), eps / (4.0 * alpha * mu), "sigma_5/tau_2 inner log")


def _sigma123(params: ProblemParams, alpha1: float, alpha2: float):
    p, r, mu, eps = params.p_star, params.r, params.mu_total, params.epsilon
    l1 = _L1(p, r, mu, eps, alpha1)
    l2 = _L2(p, r, eps, mu, alpha1)
    l3 = _L3(r, alpha1, alpha2)
    return p * l1 / (1.0 + l1), p * l2 / (1.0 + l2), p * l3 / (1.0 + l3)


def _sigma45(params: ProblemParams, base: BaseConstants, alpha: float):
    p, r, mu, eps = params.p_star, params.r, params.mu_total, params.epsilon
    l4 = _L4(r, mu, eps, alpha)
    l5 = _L5(r, mu, eps, alpha, base.d_star)
    if not (0.0 < l4 < 1.0):
        raise FormulaDomainError(f"sigma_4: inner log must lie in (0, 1), got {l4}")
    if not (0.0 < l5 < 1.0):
        raise FormulaDomainError(f"sigma_5: inner log must lie in (0, 1), got {l5}")
    return p * l4 / (1.0 - l4), p * l5 / (1.0 - l5)


def _tau12(params: ProblemParams, base: BaseConstants, alpha: float):
    p, r, mu, eps = params.p_star, params.r, params.mu_total, params.epsilon
    return p * _L4(r, mu, eps, alpha), p * _L5(r, mu, eps, alpha, base.d_star)


def _tau345(params: ProblemParams, alpha1: float, alpha2: float):
    p, r, mu, eps = params.p_star, params.r, params.mu_total, params.epsilon
    return (
        p * _L3(r, alpha1, alpha2),
        p * _L1(p, r, mu, eps, alpha1),
        p * _L2(p, r, eps, mu, alpha1),
    )


def _check_alpha(base: BaseConstants, alpha: float, name: str) -> None:
    _require(
        alpha > base.alpha_star,
        f"{name} > alpha_star(epsilon) required, got {name}={alpha} <= alpha_star={base.alpha_star}",
    )


def _check_alpha_pair(base: BaseConstants, alpha1: float, alpha2: float) -> None:
    _check_alpha(base, alpha1, "alpha1")
    _require(alpha2 > alpha1, f"alpha2 > alpha1 required, got alpha2={alpha2} <= alpha1={alpha1}")


def gamma1(params: ProblemParams, alpha1: float, alpha2: float) -> float:
    """Window radius below p_star carrying capped functions into the wider cap.

    gamma_1 = min(sigma_1, sigma_2, sigma_3, (p_star - 1)/2), valid for
    epsilon in (0, sigma_star) and alpha2 > alpha1 > alpha_star(epsilon).
    """
    base = base_constants(params)
    _check_epsilon(params, base)
    _check_alpha_pair(base, alpha1, alpha2)
    s1, s2, s3 = _sigma123(params, alpha1, alpha2)
    return min(s1, s2, s3, (params.p_star - 1.0) / 2.0)


def gamma2(params: ProblemParams, alpha: float) -> float:
    """Window radius above p_star preserving a single cap level.

    gamma_2 = min(sigma_4, sigma_5, p_star).
    """
    base = base_constants(params)
    _check_epsilon(params, base)
    _check_alpha(base, alpha, "alpha")
    s4, s5 = _sigma45(params, base, alpha)
    return min(s4, s5, params.p_star)


def gamma3(params: ProblemParams, alpha: float) -> float:
    """Window radius below p_star for the reverse (upper) inclusion.

    gamma_3 = min(tau_1, tau_2, (p_star - 1)/2).
    """
    base = base_constants(params)
    _check_epsilon(params, base)
    _check_alpha(base, alpha, "alpha")
    t1, t2 = _tau12(params, base, alpha)
    return min(t1, t2, (params.p_star - 1.0) / 2.0)


def gamma4(params: ProblemParams, alpha1: float, alpha2: float) -> float:
    """Window radius above p_star for the reverse (upper) inclusion.

    gamma_4 = min(tau_3, tau_4, tau_5, p_star).
    """
    base = base_constants(params)
    _check_epsilon(params, base)
    _check_alpha_pair(base, alpha1, alpha2)
    t3, t4, t5 = _tau345(params, alpha1, alpha2)
    return min(t3, t4, t5, params.p_star)


@dataclass(frozen=True)
class BoundLedger:
    """Every constant for one (p_star, r, mu_total, epsilon) query.

    Nothing is recomputed on read; each intermediate is stored exactly as
    evaluated so results can be audited term by term.
    """

    params: ProblemParams
    base: BaseConstants
    sigma1: float
    sigma2: float
    sigma3: float
    sigma4: float
    sigma5: float
    tau1: float
    tau2: float
    tau3: float
    tau4: float
    tau5: float
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float
    delta1: float
    delta2: float
    delta3: float
    delta4: float
    delta_lower: float
    delta_upper: float
    delta0: float

    @property
    def alpha(self) -> float:
        """Single cap choice used for the one-cap windows: 2 * alpha_star."""
        return 2.0 * self.base.alpha_star

    @property
    def alpha1(self) -> float:
        return 2.0 * self.base.alpha_star

    @property
    def alpha2(self) -> float:
        return 3.0 * self.base.alpha_star

    def window(self) -> tuple:
        """The certified open interval (p_star - delta0, p_star + delta0)."""
        return (self.params.p_star - self.delta0, self.params.p_star + self.delta0)

    def contains(self, p: float) -> bool:
        lo, hi = self.window()
        return lo < p < hi

    def to_dict(self) -> dict:
        d = {
            "c_star": self.base.c_star,
            "d_star": self.base.d_star,
            "alpha_star": self.base.alpha_star,
            "sigma_star": self.base.sigma_star,
        }
        for k in ("sigma1", "sigma2", "sigma3", "sigma4", "sigma5",
                  "tau1", "tau2", "tau3", "tau4", "tau5",
                  "gamma1", "gamma2", "gamma3", "gamma4",
                  "delta1", "delta2", "delta3", "delta4",
                  "delta_lower", "delta_upper", "delta0"):
            d[k] = getattr(self, k)
        d["alpha_choices"] = {"alpha": self.alpha, "alpha1": self.alpha1, "alpha2": self.alpha2}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def delta_window(params: ProblemParams) -> BoundLedger:
    """Assemble the full ledger and the certified two-sided window delta0.

    The canonical cap choices are alpha1 = 2*alpha_star(eps) and
    alpha2 = 3*alpha_star(eps); the single-cap windows use alpha = alpha1.
    Requires epsilon in (0, sigma_star); the resulting window
    (p_star - delta0, p_star + delta0) always sits inside
    [(p_star + 1)/2, 2*p_star].
    """
    base = base_constants(params)
    _check_epsilon(params, base)
    a1 = 2.0 * base.alpha_star
    a2 = 3.0 * base.alpha_star
    half = (params.p_star - 1.0) / 2.0

    s1, s2, s3 = _sigma123(params, a1, a2)
    s4, s5 = _sigma45(params, base, a1)
    t1, t2 = _tau12(params, base, a1)
    t3, t4, t5 = _tau345(params, a1, a2)

    g1 = min(s1, s2, s3, half)
    g2 = min(s4, s5, params.p_star)
    g3 = min(t1, t2, half)
    g4 = min(t3, t4, t5, params.p_star)

    d_lower = min(g1, g2)
    d_upper = min(g3, g4)
    d0 = min(d_lower, d_upper)
    assert 0.0 < d0 <= half, "delta0 escaped its guaranteed interval"

    return BoundLedger(
        params=params,
        base=base,
        sigma1=s1, sigma2=s2, sigma3=s3, sigma4=s4, sigma5=s5,
        tau1=t1, tau2=t2, tau3=t3, tau4=t4, tau5=t5,
        gamma1=g1, gamma2=g2, gamma3=g3, gamma4=g4,
        delta1=g1, delta2=g2, delta3=g3, delta4=g4,
        delta_lower=d_lower, delta_upper=d_upper, delta0=d0,
    )
