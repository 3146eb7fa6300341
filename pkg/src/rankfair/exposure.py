"""Attention-weighted exposure and statistical distances to the
population estimator."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .alignment import AlignmentVector, ClassSpace, Mode
from .errors import ConfigError, ModeError, ShapeError


class Metric(str, enum.Enum):
    BINOMIAL_Z = "z"
    CHI_SQUARE = "chi2"
    ABS_SCALAR = "scalar"


class EffectiveNBasis(str, enum.Enum):
    LIST_LENGTH = "list"
    REALIZATION_COUNT = "realizations"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class DistanceSpec:
    """Distance metric plus the sample size behind its standard error.

    `basis` records where effective_n came from: the list length n, the
    number of realizations k, or an explicit caller-provided value.
    """

    metric: Metric
    effective_n: int
    basis: EffectiveNBasis = EffectiveNBasis.LIST_LENGTH

    def __post_init__(self):
        if self.effective_n < 1:
            raise ConfigError(f"effective_n must be >= 1, got {self.effective_n}")


@dataclass(frozen=True)
class ExposureResult:
    """Attention-weighted aggregate alignment of one ranked list."""

    class_space: ClassSpace
    value: object  # np.ndarray (categorical) or float (scalar)


def exposure(L: AlignmentVector, w: np.ndarray, missing: str = "zero") -> ExposureResult:
    """Expected cumulative exposure: the dot product of alignments and
    attention weights. Scalar NaN entries are treated as score 0 ("zero")
    or dropped with the remaining weights renormalized ("renormalize")."""
    w = np.asarray(w, dtype=float)
    if len(w) != L.n:
        raise ShapeError(f"weights length {len(w)} != list length {L.n}")
    if L.class_space.mode is Mode.CATEGORICAL:
        return ExposureResult(L.class_space, w @ L.values)
    scores = L.values
    present = np.isfinite(scores)
    if missing == "zero" or present.all():
        return ExposureResult(L.class_space, float(w @ np.where(present, scores, 0.0)))
    total = w[present].sum()
    if total <= 0.0:
        return ExposureResult(L.class_space, 0.0)
    return ExposureResult(L.class_space, float(w[present] @ scores[present] / total))


def _target_index(class_space, target_class):
    if class_space.mode is not Mode.CATEGORICAL:
        raise ModeError("target class applies to categorical alignments only")
    return class_space.index(target_class)


def binomial_z(e: ExposureResult, p_hat, spec: DistanceSpec, target_class: str) -> float:
    """Z approximation of the binomial test: |E - p| / sqrt(p(1-p)/n_eff).

    Unsigned; report the sign via bias direction. A degenerate estimator
    (p in {0, 1}) has zero standard error: distance is 0 on exact match
    and +inf otherwise.
    """
    if len(e.class_space.labels) != 2:
        raise ModeError("binomial z requires exactly two classes")
    idx = _target_index(e.class_space, target_class)
    p = float(np.asarray(p_hat)[idx])
    obs = float(e.value[idx])
    if p <= 0.0 or p >= 1.0:
        # zero standard error: a homogeneous population is fair to itself
        # (1e-12 absorbs renormalization noise), anything else is infinitely far
        return 0.0 if abs(obs - p) <= 1e-12 else math.inf
    se = math.sqrt(p * (1.0 - p) / spec.effective_n)
    return abs(obs - p) / se


def chi_square(e: ExposureResult, p_hat, spec: DistanceSpec) -> float:
    """Goodness-of-fit statistic of the exposure against expected shares:
    n_eff * sum((E_c - p_c)^2 / p_c). Zero-share classes are dropped when
    the exposure there is zero too, else the distance is +inf."""
    if e.class_space.mode is not Mode.CATEGORICAL:
        raise ModeError("chi-square requires categorical alignments")
    p = np.asarray(p_hat, dtype=float)
    obs = np.asarray(e.value, dtype=float)
    zero = p <= 0.0
    if np.any(zero & (obs > 0.0)):
        return math.inf
    keep = ~zero
    return float(spec.effective_n * np.sum((obs[keep] - p[keep]) ** 2 / p[keep]))


def scalar_bias(e: ExposureResult, target: float = 0.0) -> float:
    """Signed lean of a scalar-scored list: exposure minus the neutral
    target. Positive leans toward +1, negative toward -1."""
    if e.class_space.mode is not Mode.SCALAR:
        raise ModeError("scalar bias requires scalar alignments")
    return float(e.value) - target


def distance(e: ExposureResult, p_hat, spec: DistanceSpec, target_class=None) -> float:
    """Unsigned distance under spec.metric."""
    if spec.metric is Metric.BINOMIAL_Z:
        if target_class is None:
            raise ConfigError("binomial z needs a target class")
        return binomial_z(e, p_hat, spec, target_class)
    if spec.metric is Metric.CHI_SQUARE:
        return chi_square(e, p_hat, spec)
    return abs(scalar_bias(e, float(p_hat)))


def signed_deviation(e: ExposureResult, p_hat, target_class=None) -> float:
    """Exposure minus reference for the target class (or the scalar axis);
    0.0 when no target class identifies a direction."""
    if e.class_space.mode is Mode.SCALAR:
        return float(e.value) - float(p_hat)
    if target_class is None:
        return 0.0
    idx = _target_index(e.class_space, target_class)
    return float(e.value[idx]) - float(np.asarray(p_hat)[idx])
