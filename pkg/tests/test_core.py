import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semihilbert import (
    a_adjoint,
    a_inner,
    a_norm_vec,
    a_op_norm,
    a_op_norm_generalized,
    admits_a_adjoint,
    attainment_basis,
    is_a_bounded,
    reduced_operator,
)
from semihilbert.core import reduce_matrix
from semihilbert.errors import DimensionMismatch, NoAdjoint, NotABounded, ZeroSeminorm
from semihilbert.sampling import random_direction, random_psd

from conftest import space


def grid_ratio(t, sp):
    """Largest ||Tx||_A / ||x||_A over x = (s, 1) with s shrinking toward 0."""
    best = 0.0
    for s in np.geomspace(1e-9, 1.0, 60):
        for sign in (1, -1):
            x = np.array([sign * s, 1.0])
            den = a_norm_vec(x, sp)
            if den > 0:
                best = max(best, a_norm_vec(t @ x, sp) / den)
            x = np.array([1.0, sign * s])
            best = max(best, a_norm_vec(t @ x, sp) / a_norm_vec(x, sp))
    return best


# -- a_inner / a_norm_vec -----------------------------------------------------


def test_inner_diag_rank_one():
    sp = space(np.diag([1.0, 0.0]))
    assert a_inner(np.array([1.0, 5.0]), np.array([1.0, -3.0]), sp) == pytest.approx(1.0)


def test_inner_identity_is_standard(rng):
    sp = space(np.eye(3))
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert a_inner(x, y, sp) == pytest.approx(np.vdot(y, x))


def test_inner_hand_multiplied():
    sp = space(np.array([[2.0, 1.0], [1.0, 1.0]]))
    assert a_inner(np.array([1.0, 0.0]), np.array([0.0, 1.0]), sp) == pytest.approx(1.0)


def test_inner_linearity_convention():
    sp = space(np.array([[2.0, 1.0], [1.0, 1.0]]))
    x, y = np.array([1.0, 2.0]), np.array([0.5, -1.0])
    assert a_inner(1j * x, y, sp) == pytest.approx(1j * a_inner(x, y, sp))
    assert a_inner(x, 1j * y, sp) == pytest.approx(-1j * a_inner(x, y, sp))


def test_norm_with_null_direction():
    sp = space(np.diag([0.0, 1.0, 1.0]))
    assert a_norm_vec(np.array([7.0, 1.0, 0.0]), sp) == pytest.approx(1.0)


def test_norm_identity_is_euclidean(rng):
    x = rng.standard_normal(4)
    assert a_norm_vec(x, space(np.eye(4))) == pytest.approx(np.linalg.norm(x))


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_norm_weighted_basis(n):
    sp = space(np.diag(1.0 / np.arange(1, 11)))
    e = np.zeros(10)
    e[n - 1] = 1.0
    assert a_norm_vec(e, sp) == pytest.approx(n**-0.5, rel=1e-14)


def test_dimension_mismatch():
    sp = space(np.eye(2))
    with pytest.raises(DimensionMismatch):
        a_inner(np.ones(3), np.ones(2), sp)
    with pytest.raises(DimensionMismatch):
        is_a_bounded(np.eye(3), sp)


# -- boundedness and adjoints -------------------------------------------------


def test_bounded_example_agrees_with_grid():
    sp = space(np.diag([1.0, 0.0]))
    t = np.array([[1.0, 0.0], [2.0, 3.0]])
    assert is_a_bounded(t, sp)
    assert grid_ratio(t, sp) < 10


def test_unbounded_example_agrees_with_grid():
    sp = space(np.diag([1.0, 0.0]))
    t = np.array([[1.0, 2.0], [0.0, 3.0]])
    assert not is_a_bounded(t, sp)
    assert grid_ratio(t, sp) > 1e8


def test_identity_space_everything_bounded(rng):
    sp = space(np.eye(3))
    t = rng.standard_normal((3, 3))
    assert is_a_bounded(t, sp) and admits_a_adjoint(t, sp)


def test_adjoint_admissibility_examples():
    sp = space(np.diag([1.0, 0.0]))
    assert admits_a_adjoint(np.array([[1.0, 0.0], [2.0, 3.0]]), sp)
    assert not admits_a_adjoint(np.array([[1.0, 2.0], [3.0, 4.0]]), sp)


def test_adjoint_examples():
    sp = space(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(a_adjoint(np.array([[1.0, 0.0], [2.0, 3.0]]), sp), [[1, 0], [0, 0]], atol=1e-15)
    t = np.array([[1 + 2j, 3j], [0.5, -1]])
    np.testing.assert_allclose(a_adjoint(t, space(np.eye(2))), t.conj().T, atol=1e-15)
    w = a_adjoint(np.array([[0.0, 1.0], [0.0, 0.0]]), space(np.diag([2.0, 3.0])))
    np.testing.assert_allclose(w, [[0, 0], [2 / 3, 0]], atol=1e-15)


def test_no_adjoint_raises():
    with pytest.raises(NoAdjoint):
        a_adjoint(np.array([[1.0, 2.0], [3.0, 4.0]]), space(np.diag([1.0, 0.0])))


def test_unbounded_operator_rejected():
    with pytest.raises(NotABounded):
        a_op_norm(np.array([[1.0, 2.0], [0.0, 3.0]]), space(np.diag([1.0, 0.0])))


# -- reduced operator, seminorm, attainment -----------------------------------


def test_reduced_identity_space(rng):
    t = rng.standard_normal((3, 3))
    red = reduced_operator(t, space(np.eye(3)))
    np.testing.assert_allclose(red.singular_values, np.linalg.svd(t, compute_uv=False), rtol=1e-13)


def test_reduced_example_two(ex2):
    sp, t = ex2
    red = reduced_operator(t, sp)
    np.testing.assert_allclose(red.b, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(red.singular_values, [1, 1])
    assert red.top_multiplicity == 2


def test_reduced_example_one(ex1):
    sp, t = ex1
    red = reduced_operator(t, sp)
    assert red.b.shape == (1, 1)
    assert red.sigma1 == pytest.approx(1.0)
    assert red.top_multiplicity == 1


def test_cluster_rule():
    assert reduce_matrix(np.diag([1.0, 1 - 1e-9, 0.5])).top_multiplicity == 2
    assert reduce_matrix(np.diag([1.0, 1 - 1e-7, 0.5])).top_multiplicity == 1


def test_norm_examples(ex1, ex2):
    for sp, t in (ex1, ex2):
        assert a_op_norm(t, sp, cross_check=True) == pytest.approx(1.0, abs=1e-12)


def test_norm_identity_space_is_spectral(rng):
    t = rng.standard_normal((4, 4))
    assert a_op_norm(t, space(np.eye(4))) == pytest.approx(np.linalg.norm(t, 2), rel=1e-13)


@pytest.mark.parametrize("n", [1, 10, 50])
def test_norm_weighted_l2_truncation(n):
    k = np.arange(1, n + 1, dtype=float)
    t = np.zeros((n, n))
    t[0] = k**-1.5
    sp = space(np.diag(1 / k))
    assert a_op_norm(t, sp, cross_check=True) == pytest.approx(np.sqrt(np.sum(k**-2.0)), rel=1e-12)


def test_attainment_examples(ex1, ex2):
    sp, t = ex1
    att = attainment_basis(t, sp)
    assert att.dimension == 1
    np.testing.assert_allclose(np.abs(att.ambient_vectors[:, 0]), [1, 0], atol=1e-14)

    sp, t = ex2
    att = attainment_basis(t, sp)
    assert att.dimension == 2
    span = att.ambient_vectors
    for target in (np.array([0.0, 1, 0]), np.array([0.0, 0, 1])):
        coef = np.linalg.lstsq(span, target, rcond=None)[0]
        np.testing.assert_allclose(span @ coef, target, atol=1e-12)

    att = attainment_basis(np.diag([3.0, 1.0]), space(np.eye(2)))
    assert att.dimension == 1
    np.testing.assert_allclose(np.abs(att.ambient_vectors[:, 0]), [1, 0], atol=1e-14)


def test_zero_seminorm_rejected():
    sp = space(np.diag([1.0, 0.0]))
    with pytest.raises(ZeroSeminorm):
        attainment_basis(np.array([[0.0, 0.0], [5.0, 1.0]]), sp)


# -- randomized laws ----------------------------------------------------------


@pytest.mark.parametrize("field", ["real", "complex"])
@pytest.mark.parametrize("seed", range(12))
def test_norm_sampling_oracle(field, seed):
    # 1e4 uniform samples cannot resolve 1% on the complex 4-sphere (7 real dims)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5 if field == "real" else 4))
    sp = space(random_psd(rng, n, int(rng.integers(1, n + 1)), field))
    t = random_direction(rng, sp, field)
    sigma = a_op_norm(t, sp)
    # uniform on the A-unit sphere of R(A), plus a random null component
    y = rng.standard_normal((sp.rank, 10_000))
    if field == "complex":
        y = y + 1j * rng.standard_normal((sp.rank, 10_000))
    y /= np.linalg.norm(y, axis=0)
    x = sp.lift(y) + (np.eye(n) - sp.projector) @ rng.standard_normal((n, 10_000))
    ratios = np.linalg.norm(sp.half @ t @ x, axis=0)
    assert ratios.max() <= sigma * (1 + 1e-9)
    assert ratios.max() >= 0.99 * sigma


@pytest.mark.parametrize("seed", range(10))
def test_attainment_correspondence(seed):
    rng = np.random.default_rng(seed)
    n = 5
    sp = space(random_psd(rng, n, 3, "complex"))
    t = random_direction(rng, sp, "complex")
    red = reduced_operator(t, sp)
    att = attainment_basis(t, sp)
    v_top = red.right_singular_vectors[:, : red.top_multiplicity]
    for x in att.ambient_vectors.T:
        assert a_norm_vec(x, sp) == pytest.approx(1.0, abs=1e-10)
        assert a_norm_vec(t @ x, sp) == pytest.approx(red.sigma1, rel=1e-10)
        y = sp.coords(x)
        np.testing.assert_allclose(v_top @ (v_top.conj().T @ y), y, atol=1e-10)
    # converse: a top singular vector lifts to an A-norming vector
    x = sp.lift(red.right_singular_vectors[:, 0])
    assert a_norm_vec(t @ x, sp) == pytest.approx(red.sigma1, rel=1e-10)


@pytest.mark.parametrize("field", ["real", "complex"])
@pytest.mark.parametrize("seed", range(10))
def test_adjoint_laws(field, seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    sp = space(random_psd(rng, n, int(rng.integers(1, n + 1)), field))
    t = random_direction(rng, sp, field)
    assert admits_a_adjoint(t, sp)
    w = a_adjoint(t, sp)
    rhs = t.conj().T @ sp.matrix
    assert np.linalg.norm(sp.matrix @ w - rhs, 2) <= 1e-10 * np.linalg.norm(rhs, 2)
    assert a_op_norm(w, sp) == pytest.approx(a_op_norm(t, sp), rel=1e-9)
    np.testing.assert_allclose((np.eye(n) - sp.projector) @ w, 0, atol=1e-10 * np.linalg.norm(w, 2))
    x, y = rng.standard_normal(n), rng.standard_normal(n)
    assert a_inner(t @ x, y, sp) == pytest.approx(a_inner(x, w @ y, sp), abs=1e-10 * np.linalg.norm(w, 2) * 10)


@pytest.mark.parametrize("seed", range(10))
def test_null_space_insensitivity(seed):
    rng = np.random.default_rng(seed)
    sp = space(random_psd(rng, 5, 2, "complex"))
    t = random_direction(rng, sp)
    s = random_direction(rng, sp)
    x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    null = (np.eye(5) - sp.projector) @ (rng.standard_normal(5) * 10)
    assert a_inner(t @ (x + null), s @ (x + null), sp) == pytest.approx(a_inner(t @ x, s @ x, sp), abs=1e-9)


@st.composite
def problems(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(2, 6))
    r = draw(st.integers(1, n))
    field = draw(st.sampled_from(["real", "complex"]))
    rng = np.random.default_rng(seed)
    sp = space(random_psd(rng, n, r, field))
    return sp, random_direction(rng, sp, field)


@settings(max_examples=60, deadline=None)
@given(problems())
def test_two_norm_routes_agree(prob):
    sp, t = prob
    a = a_op_norm(t, sp)
    assert a_op_norm_generalized(t, sp) == pytest.approx(a, rel=1e-7, abs=1e-12)
    assert attainment_basis(t, sp).dimension >= 1


@settings(max_examples=60, deadline=None)
@given(problems(), st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3))
def test_norm_homogeneous(prob, c):
    sp, t = prob
    assert a_op_norm(c * t, sp) == pytest.approx(abs(c) * a_op_norm(t, sp), rel=1e-12)
