"""Truncated discrete attention distributions over list ranks.

Each family yields a probability vector over ranks 1..n describing how much
attention a user pays to each position. The geometric, log-series, and
discrete-Pareto families have a single steepness parameter; uniform and
inverse-log have none.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleTargetError, ParameterDomainError


class Family(str, enum.Enum):
    GEOMETRIC = "geometric"
    LOG_SERIES = "logseries"
    PARETO = "pareto"
    UNIFORM = "uniform"
    INVERSE_LOG = "invlog"


#: Families with one steepness parameter (fit/bisection applies to these only).
PARAMETRIC_FAMILIES = frozenset(
    {Family.GEOMETRIC, Family.LOG_SERIES, Family.PARETO}
)

# Open parameter domains, clipped inward for numerical work.
_PARAM_EPS = 1e-12
_PARAM_DOMAIN = {
    Family.GEOMETRIC: (0.0, 1.0),
    Family.LOG_SERIES: (0.0, 1.0),
    Family.PARETO: (0.0, float("inf")),
}
# Bisection bracket actually searched (Pareto has no finite upper bound;
# alpha = 1e6 already concentrates all mass on rank 1 in double precision).
_SEARCH_BRACKET = {
    Family.GEOMETRIC: (_PARAM_EPS, 1.0 - _PARAM_EPS),
    Family.LOG_SERIES: (_PARAM_EPS, 1.0 - _PARAM_EPS),
    Family.PARETO: (_PARAM_EPS, 1e6),
}


@dataclass(frozen=True)
class AttentionModel:
    """A family, its parameters, and the truncation point n (list length)."""

    family: Family
    params: tuple[float, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterDomainError(f"n must be >= 1, got {self.n}")
        if self.family in PARAMETRIC_FAMILIES:
            if len(self.params) != 1:
                raise ParameterDomainError(
                    f"{self.family.value} takes exactly one parameter"
                )
            lo, hi = _PARAM_DOMAIN[self.family]
            p = self.params[0]
            if not np.isfinite(p) or not lo < p < hi:
                raise ParameterDomainError(
                    f"{self.family.value} parameter {p} outside open ({lo}, {hi})"
                )
        elif self.params:
            raise ParameterDomainError(
                f"{self.family.value} takes no parameters"
            )


def weights(model: AttentionModel) -> np.ndarray:
    """Realized n-truncated attention pmf over ranks 1..n."""
    n = model.n
    ranks = np.arange(1, n + 1, dtype=float)
    if model.family is Family.UNIFORM:
        return np.full(n, 1.0 / n)
    if model.family is Family.INVERSE_LOG:
        w = 1.0 / np.log(ranks + 1.0)
        return w / w.sum()
    if model.family is Family.PARETO:
        alpha = model.params[0]
        # cdf differencing of Pareto type II with scale 1:
        # F(x) = 1 - (1 + x)^(-alpha), so w_i proportional to i^-a - (i+1)^-a
        w = np.power(ranks, -alpha) - np.power(ranks + 1.0, -alpha)
        return w / w.sum()
    # geometric / log-series in log space; (1-lam)^(n-1) underflows otherwise
    p = model.params[0]
    if model.family is Family.GEOMETRIC:
        logw = (ranks - 1.0) * np.log1p(-p)
    else:
        logw = ranks * np.log(p) - np.log(ranks)
    logw -= logw.max()
    w = np.exp(logw)
    return w / w.sum()


def expected_views(model: AttentionModel) -> float:
    """Mean rank under the realized weights: E = sum(i * w_i)."""
    w = weights(model)
    return float(np.arange(1, model.n + 1) @ w)


def head_weight(model: AttentionModel) -> float:
    """Attention share of rank 1."""
    return float(weights(model)[0])


def _bisect_monotone(fn, lo, hi, target, param_tol=1e-12, max_iter=200):
    """Solve fn(x) = target for monotone fn on [lo, hi] by bisection.

    Direction is inferred from the endpoint values. Raises
    InfeasibleTargetError when target lies outside [fn(lo), fn(hi)].
    """
    flo = fn(lo)
    fhi = fn(hi)
    if not (min(flo, fhi) <= target <= max(flo, fhi)):
        raise InfeasibleTargetError(
            f"target {target} outside achievable range "
            f"[{min(flo, fhi):.6g}, {max(flo, fhi):.6g}]"
        )
    increasing = fhi >= flo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if (fn(mid) < target) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo < param_tol:
            break
    return 0.5 * (lo + hi)


def _require_parametric(family):
    if family not in PARAMETRIC_FAMILIES:
        raise InfeasibleTargetError(
            f"{Family(family).value} has no parameter to fit"
        )


def fit_param_to_expected_views(family: Family, n: int, target_mean: float) -> float:
    """Parameter whose truncated mean number of viewed results equals target_mean."""
    _require_parametric(family)
    lo, hi = _SEARCH_BRACKET[family]
    fn = lambda p: expected_views(AttentionModel(family, (p,), n))
    return _bisect_monotone(fn, lo, hi, target_mean)


def fit_param_to_head_weight(family: Family, n: int, head: float) -> float:
    """Parameter whose rank-1 weight equals head (must lie in (1/n, 1))."""
    _require_parametric(family)
    lo, hi = _SEARCH_BRACKET[family]
    fn = lambda p: head_weight(AttentionModel(family, (p,), n))
    return _bisect_monotone(fn, lo, hi, head)


def _solve_clipped(family, n, target_mean):
    """Like fit_param_to_expected_views but clips to the searched bracket
    when the target lies beyond the achievable extreme on one side."""
    lo, hi = _SEARCH_BRACKET[family]
    fn = lambda p: expected_views(AttentionModel(family, (p,), n))
    flo, fhi = fn(lo), fn(hi)
    if target_mean <= min(flo, fhi):
        return lo if flo <= fhi else hi
    if target_mean >= max(flo, fhi):
        return hi if fhi >= flo else lo
    return _bisect_monotone(fn, lo, hi, target_mean)


def param_interval_from_view_bounds(
    family: Family, n: int, mean_low: float, mean_high: float
) -> tuple[float, float]:
    """Parameter interval whose expected number of viewed results lies in
    [mean_low, mean_high], endpoints clipped to the family's open domain."""
    _require_parametric(family)
    if not 1.0 <= mean_low < mean_high:
        raise InfeasibleTargetError(
            f"need 1 <= mean_low < mean_high, got ({mean_low}, {mean_high})"
        )
    a = _solve_clipped(family, n, mean_low)
    b = _solve_clipped(family, n, mean_high)
    lo, hi = (a, b) if a <= b else (b, a)
    if not lo < hi:
        raise InfeasibleTargetError(
            f"view bounds ({mean_low}, {mean_high}) map to an empty "
            f"parameter interval for {Family(family).value} at n={n}"
        )
    return lo, hi
