from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from g2strom.exterior import (DIM, EUCLIDEAN, DegreeError, KForm, MetricData, MetricError, basis, flat,
                              hodge_star, inner_product, interior, pullback_matrix, sharp, wedge,
                              wedge_matrix)
from strategies import forms, spd_metrics


def test_basis_sizes():
    assert [len(basis(k)) for k in range(8)] == [comb(7, k) for k in range(8)]


def test_from_terms_sign_of_unsorted_index():
    assert KForm.e(2, 1).coeff(1, 2) == -1.0
    assert KForm.e(2, 7, 5).coeff(2, 5, 7) == -1.0
    assert KForm.from_terms(2, {(3, 3): 5.0}).norm() == 0.0


def test_e1_wedge_e2():
    assert (KForm.e(1) ^ KForm.e(2)).coeff(1, 2) == 1.0
    assert (KForm.e(2) ^ KForm.e(1)).coeff(1, 2) == -1.0


def test_wedge_overflow_raises():
    with pytest.raises(DegreeError):
        wedge(KForm.e(1, 2, 3, 4), KForm.e(5, 6, 7, 1))


def test_star_of_one_is_volume():
    assert hodge_star(KForm(0, np.ones(1))) == KForm.e(1, 2, 3, 4, 5, 6, 7) or \
        np.allclose(hodge_star(KForm(0, np.ones(1))).coeffs, [1.0])


def test_star_e1():
    assert hodge_star(KForm.e(1)).coeff(2, 3, 4, 5, 6, 7) == pytest.approx(1.0)
    assert hodge_star(KForm.e(2)).coeff(1, 3, 4, 5, 6, 7) == pytest.approx(-1.0)


def test_interior_examples():
    assert interior(np.eye(7)[0], KForm.e(1, 2)) .coeff(2) == 1.0
    assert interior(np.eye(7)[1], KForm.e(1, 2)).coeff(1) == -1.0
    with pytest.raises(DegreeError):
        interior(np.eye(7)[0], KForm(0, np.ones(1)))


def test_inner_product_degree_mismatch():
    with pytest.raises(DegreeError):
        inner_product(KForm.e(1), KForm.e(1, 2))


def test_metric_validation():
    with pytest.raises(MetricError):
        MetricData(-np.eye(7))
    with pytest.raises(MetricError):
        MetricData(np.eye(7) + np.triu(np.ones((7, 7)), 1))


def test_sharp_flat_inverse():
    g = np.diag(np.arange(1.0, 8.0))
    m = MetricData(g)
    v = np.arange(7.0)
    assert np.allclose(sharp(flat(v, m), m), v)


@given(forms(2), forms(3), forms(1))
def test_wedge_associative(a, b, c):
    assert np.allclose(((a ^ b) ^ c).coeffs, (a ^ (b ^ c)).coeffs, atol=1e-10)


@given(st.integers(0, 4), st.integers(0, 3), st.data())
def test_graded_commutativity(p, q, data):
    a, b = data.draw(forms(p)), data.draw(forms(q))
    assert np.allclose((a ^ b).coeffs, (-1) ** (p * q) * (b ^ a).coeffs, atol=1e-10)


@given(spd_metrics(), st.integers(0, 7), st.sampled_from([-1, 1]), st.data())
def test_star_involution_and_inner_product(g, k, o, data):
    m = MetricData(g, o)
    a, b = data.draw(forms(k)), data.draw(forms(k))
    assert np.allclose(hodge_star(hodge_star(a, m), m).coeffs, a.coeffs, atol=1e-8)
    lhs = (a ^ hodge_star(b, m)).coeffs[0]
    rhs = inner_product(a, b, m) * m.volume_form.coeffs[0]
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8)


@given(forms(2), forms(3), st.data())
def test_interior_is_antiderivation(a, b, data):
    v = np.array(data.draw(st.lists(st.floats(-2, 2), min_size=7, max_size=7)))
    lhs = interior(v, a ^ b)
    rhs = (interior(v, a) ^ b) + (a ^ interior(v, b))
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-9)


def test_pullback_is_algebra_map(rng):
    A = rng.normal(size=(7, 7))
    a, b = KForm(2, rng.normal(size=21)), KForm(3, rng.normal(size=35))
    lhs = pullback_matrix(A, 5) @ (a ^ b).coeffs
    rhs = (KForm(2, pullback_matrix(A, 2) @ a.coeffs) ^ KForm(3, pullback_matrix(A, 3) @ b.coeffs)).coeffs
    assert np.allclose(lhs, rhs)


def test_wedge_matrix_matches_wedge(rng):
    a, b = KForm(2, rng.normal(size=21)), KForm(2, rng.normal(size=21))
    assert np.allclose(wedge_matrix(a, 2, 2) @ b.coeffs, (a ^ b).coeffs)


def test_euclidean_default():
    assert EUCLIDEAN.orientation == 1 and EUCLIDEAN.sqrt_det == 1.0
    assert np.allclose(EUCLIDEAN.form_gram(3), np.eye(35))
    assert DIM == 7
