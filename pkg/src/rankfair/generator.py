"""Construction of rankings that are fair for a fixed attention model,
and synthetic realization sets for exercising aggregate audits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import AlignmentVector, ClassSpace, RealizationSet
from .attention import AttentionModel, weights
from .errors import ShapeError

_IMPROVE_TOL = 1e-15
# exact search over distinct arrangements while the count stays desk-scale
_ENUM_LIMIT = 100_000


@dataclass(frozen=True)
class CompositionSpec:
    """How many items of each class the generated list must contain."""

    class_counts: dict[str, int]

    def __post_init__(self):
        if any(c < 0 for c in self.class_counts.values()):
            raise ShapeError("class counts must be non-negative")
        if self.n < 1:
            raise ShapeError("composition must contain at least one item")

    @property
    def n(self) -> int:
        return sum(self.class_counts.values())

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.class_counts)


@dataclass(frozen=True)
class FairRanking:
    """Generated ordering plus its achieved distance under the model."""

    labels: tuple[str, ...]
    vector: AlignmentVector
    distance: float


def _gof(exp, p_hat, n):
    # goodness-of-fit objective: n * sum((E_c - p_c)^2 / p_c), zero-share
    # classes carry no items so they never contribute
    keep = p_hat > 0.0
    return float(n * np.sum((exp[keep] - p_hat[keep]) ** 2 / p_hat[keep]))


def _arrangement_count(counts):
    total, arrangements = 0, 1
    for c in counts:
        total += c
        arrangements *= _comb(total, c)
        if arrangements > _ENUM_LIMIT:
            return arrangements
    return arrangements


def _comb(n, k):
    import math

    return math.comb(n, k)


def _exact_search(counts, w, p_hat, n):
    """Enumerate every distinct class arrangement and keep the first
    minimizer (combinations run in position order, classes in label
    order, so the result is deterministic)."""
    import itertools

    c = len(counts)
    best_gof = np.inf
    best_assignment = None
    assignment = np.empty(n, dtype=int)

    def recurse(available, ci, exp):
        nonlocal best_gof, best_assignment
        if ci == c - 1:
            for pos in available:
                assignment[pos] = ci
            e = exp.copy()
            e[ci] += sum(w[p] for p in available)
            g = _gof(e, p_hat, n)
            if g < best_gof - _IMPROVE_TOL:
                best_gof = g
                best_assignment = assignment.copy()
            return
        for chosen in itertools.combinations(available, counts[ci]):
            for pos in chosen:
                assignment[pos] = ci
            e = exp.copy()
            e[ci] += sum(w[p] for p in chosen)
            rest = [p for p in available if p not in set(chosen)]
            recurse(rest, ci + 1, e)

    recurse(list(range(n)), 0, np.zeros(c))
    return best_assignment, best_gof


def generate_fair(
    spec: CompositionSpec, model: AttentionModel, p_hat=None
) -> FairRanking:
    """Order the one-hot items to minimize the exposure distance to p_hat
    under the model's weights.

    Small instances are solved exactly by enumerating the distinct class
    arrangements. Larger ones take a greedy pass (at each rank place the
    class whose cumulative exposure most lags its target share, ties
    broken by label order) followed by best-improvement pairwise swaps
    until no swap reduces the distance. Deterministic either way.
    """
    if model.n != spec.n:
        raise ShapeError(f"model n={model.n} != composition n={spec.n}")
    labels = spec.labels
    c = len(labels)
    counts = np.array([spec.class_counts[l] for l in labels], dtype=int)
    if p_hat is None:
        p_hat = counts / counts.sum()
    else:
        p_hat = np.asarray(p_hat, dtype=float)
    n = spec.n
    w = weights(model)
    cum_w = np.cumsum(w)

    if _arrangement_count(counts) <= _ENUM_LIMIT:
        assignment, best = _exact_search(counts, w, p_hat, n)
        return _finish(labels, assignment, best, n, c)

    # greedy placement by exposure lag
    remaining = counts.copy()
    exp = np.zeros(c)
    assignment = np.empty(n, dtype=int)
    for i in range(n):
        lag = p_hat * cum_w[i] - exp
        lag[remaining == 0] = -np.inf
        pick = int(np.argmax(lag))  # argmax takes the first = label order
        assignment[i] = pick
        exp[pick] += w[i]
        remaining[pick] -= 1

    # best-improvement pairwise swap local search
    best = _gof(exp, p_hat, n)
    while True:
        best_swap = None
        for i in range(n):
            a = assignment[i]
            for j in range(i + 1, n):
                b = assignment[j]
                if a == b:
                    continue
                trial = exp.copy()
                trial[a] += w[j] - w[i]
                trial[b] += w[i] - w[j]
                d = _gof(trial, p_hat, n)
                if d < best - _IMPROVE_TOL:
                    best, best_swap = d, (i, j, trial)
        if best_swap is None:
            break
        i, j, exp = best_swap
        assignment[i], assignment[j] = assignment[j], assignment[i]

    return _finish(labels, assignment, best, n, c)


def _finish(labels, assignment, achieved, n, c):
    ordered = tuple(labels[a] for a in assignment)
    rows = np.zeros((n, c if c >= 2 else 2))
    space = ClassSpace.categorical(labels if c >= 2 else labels + ("__other__",))
    for i, a in enumerate(assignment):
        rows[i, a] = 1.0
    return FairRanking(ordered, AlignmentVector(space, rows), achieved)


def synthesize_realizations(
    class_space: ClassSpace,
    pool,
    n: int,
    k: int,
    policy: str = "shuffle",
    churn_rate: float | None = None,
    seed: int = 0,
) -> RealizationSet:
    """Sample k length-n rankings from an item pool.

    "shuffle" draws a fresh uniform sample without replacement each time.
    "churn" keeps the previous item set but replaces a churn_rate fraction
    with fresh pool items, then re-shuffles positions. Deterministic under
    seed.
    """
    pool = np.asarray(pool, dtype=float)
    m = len(pool)
    if m < n:
        raise ShapeError(f"pool of {m} items cannot fill lists of length {n}")
    if k < 1:
        raise ShapeError("need k >= 1 realizations")
    if policy not in ("shuffle", "churn"):
        raise ShapeError(f"unknown policy {policy!r}")
    if policy == "churn":
        if churn_rate is None or not 0.0 <= churn_rate <= 1.0:
            raise ShapeError("churn policy needs churn_rate in [0, 1]")
    rng = np.random.default_rng(seed)

    realizations = []
    current = None
    for _ in range(k):
        if policy == "shuffle" or current is None:
            current = rng.choice(m, size=n, replace=False)
        else:
            swaps = int(round(churn_rate * n))
            kept = current[rng.choice(n, size=n - swaps, replace=False)]
            outside = np.setdiff1d(np.arange(m), kept, assume_unique=False)
            fresh = rng.choice(outside, size=swaps, replace=False)
            current = np.concatenate([kept, fresh])
        order = rng.permutation(n)
        realizations.append(AlignmentVector(class_space, pool[current[order]]))
    return RealizationSet(tuple(realizations))
