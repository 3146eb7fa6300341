"""The viable-parameter test: scan the attention-parameter domain and
decide whether any plausible attention model yields representational
parity."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .alignment import (
    AlignmentVector,
    Mode,
    RealizationSet,
    aggregate_realizations,
)
from .attention import PARAMETRIC_FAMILIES, AttentionModel, Family, weights
from .errors import ConfigError
from .exposure import (
    DistanceSpec,
    ExposureResult,
    Metric,
    distance,
    exposure,
    signed_deviation,
)


class Verdict(str, enum.Enum):
    FAIR = "fair"
    UNFAIR = "unfair"
    TRIVIALLY_FAIR_SMALL_N = "trivially_fair_small_n"


class BiasDirection(str, enum.Enum):
    OVER = "over"
    UNDER = "under"
    NONE = "none"


_TIE_TOL = 1e-12


@dataclass(frozen=True)
class AuditConfig:
    """Everything the scan needs besides the list itself.

    `domain` is the open parameter interval searched; `grid` may pin the
    exact parameter values to evaluate (then grid_points is ignored),
    which the tests use for nested-grid comparisons.
    """

    family: Family
    domain: tuple[float, float]
    distance: DistanceSpec
    grid_points: int = 1000
    delta_max: float = 1.0
    small_n_cutoff: int = 7
    target_class: str | None = None
    missing_score: str = "zero"
    grid: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.family not in PARAMETRIC_FAMILIES:
            raise ConfigError("the scan needs a single-parameter family")
        lo, hi = self.domain
        if not 0.0 < lo < hi:
            raise ConfigError(f"domain must satisfy 0 < low < high, got {self.domain}")
        if self.grid_points < 2 and self.grid is None:
            raise ConfigError("grid_points must be >= 2")
        if self.delta_max <= 0.0:
            raise ConfigError("delta_max must be positive")
        if self.small_n_cutoff < 0:
            raise ConfigError("small_n_cutoff must be non-negative")
        if self.distance.metric is Metric.BINOMIAL_Z and self.target_class is None:
            raise ConfigError("binomial z needs a target class")


@dataclass(frozen=True)
class ViableReport:
    """Scan outcome: verdict, the parameter region (if any) achieving
    parity, the best parameter, and the full distance curve.

    Each curve row is (param, distance, signed_deviation). For the
    small-n uniform evaluation the curve holds a single row with param
    0.0, marking the flat-attention limit.
    """

    verdict: Verdict
    viable_intervals: tuple[tuple[float, float], ...]
    argmin_param: float
    min_distance: float
    bias_direction_at_argmin: BiasDirection
    curve: tuple[tuple[float, float, float], ...]
    config: AuditConfig

    def to_dict(self) -> dict:
        spec = self.config.distance
        return {
            "verdict": self.verdict.value,
            "viable_intervals": [list(iv) for iv in self.viable_intervals],
            "argmin_param": self.argmin_param,
            "min_distance": self.min_distance,
            "bias_direction_at_argmin": self.bias_direction_at_argmin.value,
            "curve": [list(row) for row in self.curve],
            "config": {
                "family": self.config.family.value,
                "domain": list(self.config.domain),
                "grid_points": self.config.grid_points,
                "delta_max": self.config.delta_max,
                "metric": spec.metric.value,
                "effective_n": spec.effective_n,
                "effective_n_basis": spec.basis.value,
                "small_n_cutoff": self.config.small_n_cutoff,
                "target_class": self.config.target_class,
                "missing_score": self.config.missing_score,
            },
        }


def log_grid(low: float, high: float, points: int) -> np.ndarray:
    """Log-spaced grid over (low, high), endpoints excluded by half-step
    insets; distance curves vary fastest at small parameter values."""
    step = (np.log(high) - np.log(low)) / points
    return np.exp(np.log(low) + step * (np.arange(points) + 0.5))


def bias_direction(e: ExposureResult, p_hat, target_class=None) -> BiasDirection:
    """Whether the target class (or scalar lean) is over- or
    under-exposed relative to the reference."""
    dev = signed_deviation(e, p_hat, target_class)
    if dev > _TIE_TOL:
        return BiasDirection.OVER
    if dev < -_TIE_TOL:
        return BiasDirection.UNDER
    return BiasDirection.NONE


def _viable_runs(params, distances, delta_max):
    """Maximal contiguous grid runs with distance strictly below delta_max."""
    runs = []
    start = None
    for i, d in enumerate(distances):
        if d < delta_max:
            if start is None:
                start = i
        elif start is not None:
            runs.append((params[start], params[i - 1]))
            start = None
    if start is not None:
        runs.append((params[start], params[-1]))
    return tuple(runs)


def _check_compat(L, config):
    spec = config.distance
    if spec.metric is Metric.ABS_SCALAR:
        if L.class_space.mode is not Mode.SCALAR:
            raise ConfigError("scalar metric on categorical alignments")
    else:
        if L.class_space.mode is not Mode.CATEGORICAL:
            raise ConfigError(f"{spec.metric.value} metric on scalar alignments")
        if config.target_class is not None and config.target_class not in L.class_space.labels:
            raise ConfigError(f"target class {config.target_class!r} not in class space")
        if spec.metric is Metric.BINOMIAL_Z and len(L.class_space.labels) != 2:
            raise ConfigError("binomial z needs a two-class space (project first)")


def scan(L: AlignmentVector, p_hat, config: AuditConfig) -> ViableReport:
    """Evaluate the distance over the parameter grid and judge the list.

    Lists at or below the small-n cutoff are evaluated once with uniform
    attention (working-memory-scale lists are read in full)."""
    _check_compat(L, config)
    n = L.n
    spec = config.distance
    target = config.target_class

    if n <= config.small_n_cutoff:
        e = exposure(L, np.full(n, 1.0 / n), missing=config.missing_score)
        d = distance(e, p_hat, spec, target)
        fair = d < config.delta_max
        return ViableReport(
            verdict=Verdict.TRIVIALLY_FAIR_SMALL_N if fair else Verdict.UNFAIR,
            viable_intervals=((0.0, 0.0),) if fair else (),
            argmin_param=0.0,
            min_distance=d,
            bias_direction_at_argmin=bias_direction(e, p_hat, target),
            curve=((0.0, d, signed_deviation(e, p_hat, target)),),
            config=config,
        )

    if config.grid is not None:
        params = np.asarray(sorted(config.grid), dtype=float)
    else:
        params = log_grid(*config.domain, config.grid_points)

    distances = np.empty(len(params))
    deviations = np.empty(len(params))
    exposures = []
    for i, p in enumerate(params):
        w = weights(AttentionModel(config.family, (float(p),), n))
        e = exposure(L, w, missing=config.missing_score)
        distances[i] = distance(e, p_hat, spec, target)
        deviations[i] = signed_deviation(e, p_hat, target)
        exposures.append(e)

    best = int(np.argmin(distances))
    fair = bool(distances[best] < config.delta_max)
    return ViableReport(
        verdict=Verdict.FAIR if fair else Verdict.UNFAIR,
        viable_intervals=_viable_runs(params, distances, config.delta_max),
        argmin_param=float(params[best]),
        min_distance=float(distances[best]),
        bias_direction_at_argmin=bias_direction(exposures[best], p_hat, target),
        curve=tuple(
            (float(p), float(d), float(s))
            for p, d, s in zip(params, distances, deviations)
        ),
        config=config,
    )


def scan_aggregate(rs: RealizationSet, p_hat, config: AuditConfig) -> ViableReport:
    """Audit the per-rank mean of all realizations as one list."""
    return scan(aggregate_realizations(rs), p_hat, config)
