import numpy as np
import pytest

from g2strom.lie import LieAlgebraConfig, LieAlgebraError, by_name, su2, trivial, u1


def test_su2_brackets():
    s = su2()
    e = np.eye(3)
    assert np.allclose(s.bracket(e[0], e[1]), e[2])
    assert np.allclose(s.pairing, np.eye(3))
    assert s.jacobi_residual() == 0 and s.invariance_residual() == 0


def test_alpha_prime_scales_pairing():
    assert np.allclose(su2(2.5).pairing, 2.5 * np.eye(3))


def test_u1_is_degenerate():
    assert not u1().is_nondegenerate()
    assert su2().is_nondegenerate()
    assert trivial().dim == 0 and trivial().is_nondegenerate()


def test_invalid_structure_constants():
    f = np.zeros((2, 2, 2))
    f[0, 1, 0] = 1.0  # not antisymmetric
    with pytest.raises(LieAlgebraError):
        LieAlgebraConfig("bad", f, np.eye(2))


def test_non_invariant_pairing():
    with pytest.raises(LieAlgebraError):
        LieAlgebraConfig("bad", su2().structure_constants, np.diag([1.0, 2.0, 3.0]))


def test_by_name():
    assert by_name("su2").dim == 3
    with pytest.raises(LieAlgebraError):
        by_name("e8")


def test_ad_matrix(rng):
    s = su2()
    x, y = rng.normal(size=3), rng.normal(size=3)
    assert np.allclose(s.ad_matrix(x) @ y, s.bracket(x, y))
    assert s.c(x, y) == pytest.approx(x @ y)
