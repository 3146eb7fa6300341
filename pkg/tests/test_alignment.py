import numpy as np
import pytest

from rankfair import (
    AlignmentVector,
    ClassSpace,
    LabelError,
    Mode,
    ModeError,
    RealizationSet,
    ShapeError,
    aggregate_realizations,
    make_one_hot,
    population_estimator,
    project_binary,
    project_binary_probs,
    synthesize_realizations,
)

FMU = ClassSpace.categorical(["Female", "Male", "Unknown"])


def vec(space, rows):
    return AlignmentVector(space, np.array(rows, dtype=float))


def test_class_space_modes():
    assert FMU.mode is Mode.CATEGORICAL
    assert ClassSpace.scalar().mode is Mode.SCALAR


def test_class_space_rejects_duplicates_and_singletons():
    with pytest.raises(ShapeError):
        ClassSpace.categorical(["A", "A"])
    with pytest.raises(ShapeError):
        ClassSpace.categorical(["A"])


def test_one_hot_female():
    assert np.array_equal(make_one_hot("Female", FMU), [1.0, 0.0, 0.0])


def test_one_hot_unknown():
    assert np.array_equal(make_one_hot("Unknown", FMU), [0.0, 0.0, 1.0])


def test_one_hot_unknown_label_errors():
    with pytest.raises(LabelError):
        make_one_hot("X", ClassSpace.categorical(["A", "B"]))


def test_alignment_rows_must_sum_to_one():
    with pytest.raises(ShapeError):
        vec(ClassSpace.categorical(["A", "B"]), [[0.6, 0.6]])


def test_scalar_scores_bounded():
    with pytest.raises(ShapeError):
        AlignmentVector(ClassSpace.scalar(), np.array([1.5]))


def test_population_estimator_symmetry():
    ab = ClassSpace.categorical(["A", "B"])
    L = vec(ab, [[1, 0], [0, 1]])
    assert np.allclose(population_estimator(L), [0.5, 0.5], atol=1e-15)


def test_population_estimator_on_pool():
    # 573 of 4407 pool items in the target class
    pool = np.zeros((4407, 2))
    pool[:573, 0] = 1.0
    pool[573:, 1] = 1.0
    p = population_estimator(pool)
    assert p[0] == pytest.approx(0.130, abs=1e-3)


def test_population_estimator_scalar_mean():
    L = AlignmentVector(ClassSpace.scalar(), np.array([0.98, -0.94, -0.22]))
    assert population_estimator(L) == pytest.approx(-0.06, abs=1e-12)


def test_population_estimator_empty_input():
    with pytest.raises(ShapeError):
        population_estimator(np.empty((0, 2)))


def test_population_estimator_is_valid_distribution():
    rng = np.random.default_rng(3)
    rows = rng.dirichlet(np.ones(4), size=17)
    p = population_estimator(rows)
    assert abs(p.sum() - 1.0) < 1e-9
    assert np.all(p >= 0)


def test_aggregate_two_swapped_realizations():
    ab = ClassSpace.categorical(["A", "B"])
    r1 = vec(ab, [[1, 0], [0, 1]])
    r2 = vec(ab, [[0, 1], [1, 0]])
    agg = aggregate_realizations(RealizationSet((r1, r2)))
    assert np.allclose(agg.values, 0.5, atol=1e-15)


def test_aggregate_identical_realizations_is_identity():
    rng = np.random.default_rng(11)
    rows = rng.dirichlet(np.ones(3), size=6)
    r = AlignmentVector(ClassSpace.categorical(["a", "b", "c"]), rows)
    agg = aggregate_realizations(RealizationSet((r, r, r)))
    assert np.allclose(agg.values, rows, atol=1e-15)


def test_realization_set_rejects_mismatched_lengths():
    ab = ClassSpace.categorical(["A", "B"])
    with pytest.raises(ShapeError):
        RealizationSet((vec(ab, [[1, 0]]), vec(ab, [[1, 0], [0, 1]])))


def test_aggregate_preserves_population_estimator():
    rng = np.random.default_rng(5)
    ab = ClassSpace.categorical(["A", "B", "C"])
    reals = tuple(
        AlignmentVector(ab, rng.dirichlet(np.ones(3), size=8)) for _ in range(4)
    )
    rs = RealizationSet(reals)
    agg_p = population_estimator(aggregate_realizations(rs))
    mean_p = np.mean([population_estimator(r) for r in reals], axis=0)
    assert np.allclose(agg_p, mean_p, atol=1e-12)


def test_project_binary_pools_remainder():
    space = ClassSpace.categorical(["white", "Black", "Asian", "other"])
    L = vec(space, [[0.547, 0.130, 0.121, 0.202]])
    proj = project_binary(L, "Black")
    assert proj.class_space.labels == ("Black", "non-Black")
    assert np.allclose(proj.values[0], [0.130, 0.870], atol=1e-12)


def test_project_binary_one_hot_cases():
    space = ClassSpace.categorical(["A", "B", "C"])
    hit = project_binary(vec(space, [[1, 0, 0]]), "A")
    miss = project_binary(vec(space, [[0, 1, 0]]), "A")
    assert np.allclose(hit.values[0], [1.0, 0.0])
    assert np.allclose(miss.values[0], [0.0, 1.0])


def test_project_binary_scalar_mode_errors():
    L = AlignmentVector(ClassSpace.scalar(), np.array([0.2]))
    with pytest.raises(ModeError):
        project_binary(L, "A")


def test_project_binary_unknown_label_errors():
    L = vec(ClassSpace.categorical(["A", "B"]), [[1, 0]])
    with pytest.raises(LabelError):
        project_binary(L, "Z")


def test_projection_commutes_with_estimation():
    rng = np.random.default_rng(9)
    space = ClassSpace.categorical(["A", "B", "C", "D"])
    L = AlignmentVector(space, rng.dirichlet(np.ones(4), size=12))
    p = population_estimator(L)
    _, projected_p = project_binary_probs(p, space, "C")
    p_of_projected = population_estimator(project_binary(L, "C"))
    assert np.allclose(projected_p, p_of_projected, atol=1e-12)


def test_uniform_shuffles_converge_per_rank():
    # per-rank aggregate of uniform shuffles approaches the pool estimate
    space = ClassSpace.categorical(["A", "B"])
    pool = np.zeros((20, 2))
    pool[:6, 0] = 1.0
    pool[6:, 1] = 1.0
    rs = synthesize_realizations(space, pool, n=20, k=10_000, policy="shuffle", seed=42)
    agg = aggregate_realizations(rs)
    assert np.abs(agg.values[:, 0] - 0.3).max() < 0.02
