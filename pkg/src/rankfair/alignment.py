"""Per-item group alignment: probability distributions over classes, or
scalar scores on a [-1, 1] axis, arranged by rank."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import LabelError, ModeError, ShapeError

_PROB_TOL = 1e-9


class Mode(str, enum.Enum):
    CATEGORICAL = "categorical"
    SCALAR = "scalar"


@dataclass(frozen=True)
class ClassSpace:
    """Ordered class labels, or the scalar-score mode when labels is empty."""

    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.labels:
            if len(self.labels) < 2:
                raise ShapeError("categorical class space needs >= 2 labels")
            if len(set(self.labels)) != len(self.labels) or "" in self.labels:
                raise ShapeError("class labels must be unique and non-empty")

    @property
    def mode(self) -> Mode:
        return Mode.CATEGORICAL if self.labels else Mode.SCALAR

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"unknown class label {label!r}") from None

    @staticmethod
    def categorical(labels) -> "ClassSpace":
        return ClassSpace(tuple(labels))

    @staticmethod
    def scalar() -> "ClassSpace":
        return ClassSpace(())


def _check_rows(class_space, values):
    values = np.asarray(values, dtype=float)
    if class_space.mode is Mode.CATEGORICAL:
        if values.ndim != 2 or values.shape[1] != len(class_space.labels):
            raise ShapeError(
                f"expected shape (n, {len(class_space.labels)}), got {values.shape}"
            )
        if np.any(values < -_PROB_TOL) or np.any(values > 1 + _PROB_TOL):
            raise ShapeError("probabilities must lie in [0, 1]")
        bad = np.abs(values.sum(axis=1) - 1.0) > _PROB_TOL
        if np.any(bad):
            raise ShapeError(
                f"row {int(np.argmax(bad))} probabilities do not sum to 1"
            )
    else:
        if values.ndim != 1:
            raise ShapeError(f"expected shape (n,), got {values.shape}")
        finite = values[np.isfinite(values)]
        if np.any(np.abs(finite) > 1 + _PROB_TOL):
            raise ShapeError("scalar scores must lie in [-1, 1]")
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class AlignmentVector:
    """Rank-ordered alignments: row i (0-based) is the distribution (or
    score) of the item at rank i+1. Scalar entries may be NaN = unscored."""

    class_space: ClassSpace
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_rows(self.class_space, self.values))
        if len(self.values) < 1:
            raise ShapeError("alignment vector must be non-empty")

    def __len__(self):
        return len(self.values)

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class RealizationSet:
    """k rankings of the same query, all with one class space and length."""

    realizations: tuple[AlignmentVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "realizations", tuple(self.realizations))
        if not self.realizations:
            raise ShapeError("need at least one realization")
        first = self.realizations[0]
        for r in self.realizations[1:]:
            if r.class_space != first.class_space:
                raise ShapeError("realizations disagree on class space")
            if r.n != first.n:
                raise ShapeError("realizations disagree on list length")

    @property
    def k(self) -> int:
        return len(self.realizations)

    @property
    def n(self) -> int:
        return self.realizations[0].n

    @property
    def class_space(self) -> ClassSpace:
        return self.realizations[0].class_space


def make_one_hot(label: str, class_space: ClassSpace) -> np.ndarray:
    """Distribution with probability 1 at label and 0 elsewhere."""
    if class_space.mode is not Mode.CATEGORICAL:
        raise ModeError("one-hot alignment requires a categorical class space")
    out = np.zeros(len(class_space.labels))
    out[class_space.index(label)] = 1.0
    return out


def population_estimator(source, missing: str = "zero"):
    """Equal-weight mean alignment: the default fair-share reference.

    Accepts an AlignmentVector, a RealizationSet (pooled over all entries),
    or a raw array of rows (an unordered item pool). Categorical input
    yields a distribution; scalar input yields a mean score, with NaN
    entries treated as 0 ("zero") or dropped ("renormalize").
    """
    if isinstance(source, RealizationSet):
        rows = np.concatenate([r.values for r in source.realizations])
        space = source.class_space
    elif isinstance(source, AlignmentVector):
        rows, space = source.values, source.class_space
    else:
        rows, space = np.asarray(source, dtype=float), None
    if rows.size == 0:
        raise ShapeError("cannot estimate population from empty input")
    if rows.ndim == 2:
        return rows.mean(axis=0)
    scores = rows
    if missing == "zero":
        scores = np.nan_to_num(scores, nan=0.0)
        return float(scores.mean())
    present = scores[np.isfinite(scores)]
    if present.size == 0:
        return 0.0
    return float(present.mean())


def aggregate_realizations(rs: RealizationSet) -> AlignmentVector:
    """Per-rank mean alignment across the k realizations."""
    stacked = np.stack([r.values for r in rs.realizations])
    with np.errstate(invalid="ignore"):
        return AlignmentVector(rs.class_space, stacked.mean(axis=0))


def project_binary_probs(probs, class_space: ClassSpace, target_class: str):
    """Project one distribution to {target, non-target}; returns the new
    two-class space and the projected probabilities."""
    if class_space.mode is not Mode.CATEGORICAL:
        raise ModeError("binary projection requires categorical alignments")
    idx = class_space.index(target_class)
    probs = np.asarray(probs, dtype=float)
    new_space = ClassSpace.categorical([target_class, f"non-{target_class}"])
    p = probs[..., idx]
    return new_space, np.stack([p, 1.0 - p], axis=-1)


def project_binary(L: AlignmentVector, target_class: str) -> AlignmentVector:
    """Project every entry to {target, non-target}, pooling the remainder."""
    new_space, values = project_binary_probs(L.values, L.class_space, target_class)
    return AlignmentVector(new_space, values)
