import numpy as np
import pytest
from hypothesis import given, strategies as st

from g2strom.exterior import DegreeError, KForm, MetricData, basis_index
from g2strom.g2 import G2Structure, NotPositiveError
from g2strom.exterior import pullback_matrix
from g2strom.lie import su2
from g2strom.torus import (Collocation, ConnectionField, FourierField, apply_function, codifferential,
                           curvature, d, fernandez_gray, l2_inner, lee_form, multiply, pointwise_star,
                           random_field, strominger_residual, torsion_H)

TWO_PI = 2 * np.pi
E1, E2 = (1, 0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0, 0)


def scalar(value):
    return FourierField.constant(np.array([value]), degree=0)


def test_d_of_sine():
    f = FourierField.trig(E1, sin=np.array([1.0]), degree=0)
    df = d(f)
    want = FourierField.trig(E1, cos=TWO_PI * KForm.e(1).coeffs, degree=1)
    assert (df - want).max_abs() < 1e-14


def test_d_of_top_form_raises():
    with pytest.raises(DegreeError):
        d(FourierField.zero(7))
    with pytest.raises(DegreeError):
        codifferential(FourierField.zero(0), MetricData.euclidean())


def test_cutoff_validation():
    with pytest.raises(ValueError):
        FourierField(1, 0, {E1: np.zeros(7)})


@given(st.integers(0, 5), st.integers(0, 10_000))
def test_d_squared_zero(k, seed):
    f = random_field(np.random.default_rng(seed), k, axes=(0, 3, 5))
    assert d(d(f)).max_abs() < 1e-10


@given(st.integers(1, 6), st.integers(0, 10_000))
def test_codifferential_is_adjoint(k, seed):
    rng = np.random.default_rng(seed)
    f, h = random_field(rng, k - 1, axes=(1, 2)), random_field(rng, k, axes=(1, 2))
    m = MetricData.euclidean()
    lhs, rhs = l2_inner(d(f), h), l2_inner(f, codifferential(h, m))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_laplacian_of_cosine():
    f = FourierField.trig(E1, cos=np.array([1.0]), degree=0)
    lap = codifferential(d(f), MetricData.euclidean())
    assert (lap - TWO_PI ** 2 * f).max_abs() < 1e-10


def test_random_fields_are_real(rng):
    assert random_field(rng, 3, cutoff=2).reality_residual() < 1e-15


def test_collocation_round_trip(rng):
    f = random_field(rng, 2, cutoff=2, axes=(0, 4))
    ctx = Collocation([f], 2)
    g = ctx.field(ctx.values(f), 2)
    assert (f - g).max_abs() < 1e-13


def test_pointwise_product_matches_convolution():
    s = FourierField.trig(E1, cos=np.array([1.0]), degree=0)
    sq = multiply(s, s)
    want = 0.5 * scalar(1.0) + FourierField.trig((2, 0, 0, 0, 0, 0, 0), cos=np.array([0.5]), degree=0)
    assert (sq.truncate(2) - want.truncate(2)).max_abs() < 1e-14


def test_apply_function_exp():
    f = FourierField.trig(E1, sin=np.array([0.1]), degree=0)
    e = apply_function(np.exp, f, 10)
    ctx = Collocation.fixed((0,), 21, 10)
    vals = ctx.values(e)[..., 0, 0].real
    assert np.allclose(vals, np.exp(0.1 * np.sin(TWO_PI * ctx.points()[..., 0])), atol=1e-14)


def test_curvature_example(su2_alg):
    a = FourierField.trig(E2, sin=np.kron(KForm.e(1).coeffs, [1.0, 0, 0]), degree=1, lie=su2_alg)
    F = curvature(ConnectionField(a))
    want = FourierField.trig(E2, cos=np.kron(KForm.e(2, 1).coeffs, [TWO_PI, 0, 0]), degree=2, lie=su2_alg)
    assert (F - want).max_abs() < 1e-13


def test_nonabelian_curvature_term(su2_alg):
    a = FourierField.constant(np.kron(KForm.e(1).coeffs, [1, 0, 0]) + np.kron(KForm.e(2).coeffs, [0, 1, 0]),
                              degree=1, lie=su2_alg)
    F = curvature(ConnectionField(a))
    assert F.mean()[0] == pytest.approx([0, 0, 1])  # e12 (x) [T1, T2]


def test_conformal_lee_form(g2):
    f = FourierField.trig(E1, sin=np.array([0.1]), degree=0)
    omega = multiply(apply_function(lambda v: np.exp(3 * v), f, 10), FourierField.constant(g2.omega))
    theta = lee_form(omega)
    assert (theta - 4.0 * d(f)).truncate(10).l2_norm() < 1e-10
    rep = fernandez_gray(omega)
    assert rep.verdict == "conformally co-closed"
    assert rep.norms["d_omega_27"] < 1e-10


def test_torsion_of_27_perturbation(g2, rng):
    beta = g2.projector(3, 27) @ rng.normal(size=35)
    beta /= np.linalg.norm(beta)
    w0 = FourierField.constant(g2.omega)
    for eps in (1e-3, 1e-4):
        dot = FourierField.trig(E1, cos=beta, degree=3)
        H = torsion_H(w0 + eps * dot, scalar(0.0)).H
        lin = -eps * pointwise_star(d(dot), w0, 1)
        rel = (H.truncate(1) - lin).l2_norm() / lin.l2_norm()
        assert rel < 50 * eps


def test_non_positive_field_rejected():
    omega = FourierField.constant(KForm.e(1, 2, 3))
    with pytest.raises(NotPositiveError):
        fernandez_gray(omega)


@given(st.integers(0, 10_000))
def test_constant_frames_are_torsion_free(seed):
    rng = np.random.default_rng(seed)
    from g2strom.g2 import standard_g2_form
    A = np.eye(7) + 0.3 * rng.normal(size=(7, 7))
    w = KForm(3, pullback_matrix(A, 3) @ standard_g2_form().omega.coeffs)
    G2Structure.from_form(w)
    omega = FourierField.constant(w)
    rep = fernandez_gray(omega)
    assert rep.verdict == "torsion-free"
    res = strominger_residual(omega, scalar(rng.normal()), ConnectionField.flat(su2()))
    assert res.max_norm() == 0.0 and res.solvable


def test_instanton_residual_nonzero(g2, su2_alg):
    # F in Lambda^2_7 is not an instanton
    a = FourierField.trig(E2, sin=np.kron(KForm.e(1).coeffs, [1.0, 0, 0]), degree=1, lie=su2_alg)
    res = strominger_residual(FourierField.constant(g2.omega), scalar(0.0), ConnectionField(a))
    assert res.norms()["E4"] > 1.0
    assert res.norms()["E1"] == 0.0 and res.norms()["E2"] == 0.0


def test_global_connection_has_no_obstruction(g2, su2_alg, rng):
    # c(F ^ F) = d CS(a) is exact for a global a
    a = random_field(rng, 1, axes=(1, 3), lie=su2_alg, scale=0.5)
    res = strominger_residual(FourierField.constant(g2.omega), scalar(0.0), ConnectionField(a))
    assert np.abs(res.pontryagin_mean).max() < 1e-12 and res.solvable


def test_background_curvature_obstruction_flagged(g2, su2_alg):
    F0 = np.kron((KForm.e(1, 2) + KForm.e(3, 4)).coeffs, [1.0, 0, 0])
    theta = ConnectionField(FourierField.zero(1, 0, su2_alg), background_curvature=F0)
    res = strominger_residual(FourierField.constant(g2.omega), scalar(0.0), theta)
    assert not res.solvable
    assert res.pontryagin_mean[basis_index(4)[(0, 1, 2, 3)]] == pytest.approx(2.0)


def test_star_of_constant_matches_g2(g2):
    w0 = FourierField.constant(g2.omega)
    so = pointwise_star(w0, w0)
    assert np.allclose(so.mean()[:, 0], g2.star_omega.coeffs)


def test_lie_component(su2_alg, rng):
    a = random_field(rng, 1, lie=su2_alg)
    assert a.lie_component(1).shape == (7, 1)
    assert np.allclose(a.lie_component(1).mode(E1)[:, 0], a.mode(E1)[:, 1])
