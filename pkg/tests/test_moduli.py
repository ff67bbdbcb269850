from math import comb

import numpy as np
import pytest

from g2strom.exterior import KForm
from g2strom.g2 import G2Structure
from g2strom.lie import su2
from g2strom.moduli import (BaseError, BasePoint, NotInKernelError, assemble_block, assemble_genKS_block,
                            assemble_KS_block, cohomology_dimension, deformation_fields, flux_map, gauge_image,
                            wavevectors)
from g2strom.torus import ConnectionField, FourierField, random_field

E1 = (1, 0, 0, 0, 0, 0, 0)


@pytest.fixture(scope="module")
def flat_su2():
    return BasePoint.flat(su2())


@pytest.fixture(scope="module")
def ks_su2(flat_su2):
    return cohomology_dimension(flat_su2, 1, "KS")


def test_wavevector_count():
    assert len(wavevectors(1)) == 3 ** 7
    assert (~wavevectors(1).any(axis=1)).sum() == 1


def test_block_shapes(flat_su2):
    ks = assemble_KS_block(flat_su2, E1)
    assert ks.L_block.shape == (1 + 21 + 35 + 21, 35 + 1 + 21)
    assert ks.P_block.shape == (57, 7 + 3)
    gen = assemble_genKS_block(flat_su2, E1)
    assert gen.L_block.shape[1] == ks.L_block.shape[1] + 21
    assert gen.P_block.shape[1] == 7 + 3 + 7


@pytest.mark.parametrize("which", ["KS", "genKS", "metric-only", "instanton-only"])
def test_blocks_form_complexes(flat_su2, which, rng):
    for _ in range(5):
        k = tuple(rng.integers(-2, 3, size=7))
        assert assemble_block(flat_su2, k, which).complex_residual() < 1e-14


def test_trivial_metric_sector():
    res = cohomology_dimension(BasePoint.flat(), 1, "KS")
    assert res.total_H1 == comb(7, 3) + 1
    assert res.max_complex_residual < 1e-14 and res.max_containment_angle < 1e-10
    nz = res.to_dict()["nonzero_defect_modes"]
    assert [m["k"] for m in nz] == [[0] * 7]


def test_su2_coupled_count(ks_su2):
    assert ks_su2.total_H1 == 36 + 21
    assert ks_su2.harmonic_basis.shape == (57, 57)


def test_sector_counts(flat_su2):
    assert cohomology_dimension(flat_su2, 1, "metric-only").total_H1 == 36
    assert cohomology_dimension(flat_su2, 1, "instanton-only").total_H1 == 21


def test_flat_offset_reduces_instanton_count():
    a0 = np.zeros((7, 3))
    a0[0, 0], a0[1, 0] = 0.7, 0.3
    base = BasePoint(BasePoint.flat().g2, 0.0, su2(), a0)
    assert cohomology_dimension(base, 1, "instanton-only").total_H1 == 7
    assert cohomology_dimension(base, 1, "KS").total_H1 == 43


def test_integral_holonomy_is_gauge_trivial():
    a0 = np.zeros((7, 3))
    a0[0, 0] = 2 * np.pi
    res = cohomology_dimension(BasePoint(BasePoint.flat().g2, 0.0, su2(), a0), 1, "instanton-only")
    assert res.total_H1 == 21
    assert sorted(m["k"][0] for m in res.to_dict()["nonzero_defect_modes"]) == [-1, 0, 1]


def test_nonflat_base_rejected():
    a0 = np.zeros((7, 3))
    a0[0, 0] = a0[1, 1] = 1.0
    with pytest.raises(BaseError):
        BasePoint(BasePoint.flat().g2, 0.0, su2(), a0)


def test_from_fields(g2, rng):
    omega = FourierField.constant(g2.omega)
    phi = FourierField.constant(np.array([0.2]), degree=0)
    base = BasePoint.from_fields(omega, phi, ConnectionField.flat(su2()))
    assert base.phi == pytest.approx(0.2) and base.n == 3
    with pytest.raises(BaseError):
        BasePoint.from_fields(omega + 0.01 * random_field(rng, 3), phi, ConnectionField.flat(su2()))


def test_rotated_base_same_count(rng):
    from g2strom.exterior import pullback_matrix
    A = np.eye(7) + 0.2 * rng.normal(size=(7, 7))
    g2 = G2Structure.from_form(KForm(3, pullback_matrix(A, 3) @ BasePoint.flat().g2.omega.coeffs))
    assert cohomology_dimension(BasePoint(g2), 1, "KS").total_H1 == 36


def test_bad_inputs(flat_su2):
    with pytest.raises(ValueError):
        cohomology_dimension(flat_su2, 0)
    with pytest.raises(ValueError):
        cohomology_dimension(flat_su2, 1, "bogus")


def test_flux_map_vanishes_on_kernel(flat_su2, ks_su2):
    flux = np.array([flux_map(flat_su2, h) for h in ks_su2.harmonic_basis])
    assert np.abs(flux).max() < 1e-12


def test_flux_map_rejects_non_kernel(flat_su2):
    x = np.zeros(57)
    x[0] = 1.0
    with pytest.raises(NotInKernelError):
        flux_map(flat_su2, {E1: x})


def test_flux_gauge_invariance(flat_su2, rng):
    for _ in range(5):
        k = tuple(int(x) for x in rng.integers(-1, 2, size=7))
        x = gauge_image(flat_su2, k, rng.normal(size=10))
        assert np.abs(flux_map(flat_su2, {k: x})).max() < 1e-12


def test_deformation_fields(flat_su2, ks_su2):
    out = deformation_fields(flat_su2, {(0,) * 7: ks_su2.harmonic_basis[0]})
    assert out["omega_dot"].degree == 3 and out["theta_dot"].lie.dim == 3
