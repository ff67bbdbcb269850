import numpy as np
import pytest

from g2strom.courant import (AlgebroidData, CourantSection, GeneralizedMetricData, SectionError, bianchi_sweep,
                             check_axioms, dorfman_bracket, inner_symmetry_image, pairing, perturb_bianchi,
                             sample_sections, strominger_to_killing_data, twisted_example)
from g2strom.exterior import KForm
from g2strom.lie import LieAlgebraError, su2, trivial, u1
from g2strom.moduli import BasePoint, assemble_genKS_block
from g2strom.torus import ConnectionField, FourierField

E = np.eye(7)


def const_section(lie, X=None, r=None, xi=None):
    z7 = np.zeros(7)
    return CourantSection(FourierField.constant(z7 if X is None else X, degree=1),
                          FourierField.constant(np.zeros(lie.dim) if r is None else r, degree=0, lie=lie),
                          FourierField.constant(z7 if xi is None else xi, degree=1))


@pytest.fixture(scope="module")
def twisted():
    return twisted_example(su2())


def test_pairing_values(su2_alg):
    assert pairing(const_section(su2_alg, X=E[0]), const_section(su2_alg, xi=E[0])).mean()[0, 0] == 0.5
    r = np.array([1.0, 2.0, 0.0])
    assert pairing(const_section(su2_alg, r=r), const_section(su2_alg, r=r)).mean()[0, 0] == pytest.approx(5.0)


def test_constant_vector_bracket_is_twist(su2_alg):
    alg = AlgebroidData.flat(su2_alg, FourierField.constant(KForm.e(1, 2, 3)))
    b = dorfman_bracket(const_section(su2_alg, X=E[0]), const_section(su2_alg, X=E[1]), alg)
    assert np.allclose(b.xi.mean()[:, 0], E[2]) and b.X.max_abs() == 0


def test_constant_lie_bracket(su2_alg):
    alg = AlgebroidData.flat(su2_alg)
    b = dorfman_bracket(const_section(su2_alg, r=np.eye(3)[0]), const_section(su2_alg, r=np.eye(3)[1]), alg)
    assert np.allclose(b.r.mean()[0], -np.eye(3)[2])


def test_bracket_of_function_and_vector(su2_alg):
    # [d/dx1, sin(2 pi x1) dx2] = 2 pi cos(2 pi x1) dx2
    alg = AlgebroidData.flat(su2_alg)
    e1 = const_section(su2_alg, X=E[0])
    xi = FourierField.trig((1, 0, 0, 0, 0, 0, 0), sin=E[1], degree=1)
    e2 = CourantSection(FourierField.zero(1, 1), FourierField.zero(0, 1, su2_alg), xi)
    want = FourierField.trig((1, 0, 0, 0, 0, 0, 0), cos=2 * np.pi * E[1], degree=1)
    assert (dorfman_bracket(e1, e2, alg).xi.truncate(1) - want).max_abs() < 1e-12


def test_section_validation(su2_alg):
    with pytest.raises(SectionError):
        CourantSection(FourierField.zero(2), FourierField.zero(0, 0, su2_alg), FourierField.zero(1))
    with pytest.raises(SectionError):
        CourantSection(FourierField.zero(1), FourierField.zero(0), FourierField.zero(1))
    with pytest.raises(SectionError):
        const_section(su2_alg) + const_section(trivial())


def test_degenerate_pairing_rejected():
    with pytest.raises(LieAlgebraError):
        AlgebroidData.flat(u1())


def test_axioms_flat_small_sample(su2_alg):
    rep = check_axioms(AlgebroidData.flat(su2_alg), n_sections=6)
    assert rep.passed and rep.n_triples == 56


def test_axioms_twisted(twisted):
    assert twisted.bianchi_norm < 1e-12
    rep = check_axioms(twisted, n_sections=6)
    assert rep.passed, rep.residuals


def test_bianchi_violation_breaks_jacobi(twisted):
    bad = perturb_bianchi(twisted, 0.1)
    assert bad.bianchi_norm > 0.1
    rep = check_axioms(bad, n_sections=5)
    assert rep.residuals["D1"] > 1e-3
    assert max(v for k, v in rep.residuals.items() if k != "D1") < 1e-10


def test_sweep_monotone(su2_alg):
    pts = bianchi_sweep(AlgebroidData.flat(su2_alg), (0.0, 0.1, 0.2), n_sections=5)
    assert pts[0].d1_residual < 1e-10
    assert pts[1].d1_residual > pts[1].threshold and pts[2].d1_residual > pts[1].d1_residual


def test_sample_sections_seeded(su2_alg):
    a, b = sample_sections(su2_alg, 3, seed=4), sample_sections(su2_alg, 3, seed=4)
    assert all((x - y).max_abs() == 0 for x, y in zip(a, b))


def test_dictionary_flat(g2, su2_alg):
    alg = AlgebroidData.flat(su2_alg)
    m = strominger_to_killing_data(FourierField.constant(g2.omega), FourierField.constant(np.zeros(1), degree=0),
                                   ConnectionField.flat(su2_alg), alg)
    assert m.residual <= 1e-12 and m.compatible and m.metric.admissibility["admissible"]


def test_dictionary_harmonic_offset(g2, su2_alg, rng):
    h = KForm(3, rng.normal(size=35))
    alg = AlgebroidData.flat(su2_alg, FourierField.constant(h))
    m = strominger_to_killing_data(FourierField.constant(g2.omega), FourierField.constant(np.zeros(1), degree=0),
                                   ConnectionField.flat(su2_alg), alg)
    assert abs(m.residual - h.norm()) <= 1e-10 and not m.compatible


def test_dictionary_absorbs_exact_offset(g2, su2_alg):
    b = FourierField.trig((0, 1, 0, 0, 0, 0, 0), sin=KForm.e(3, 4).coeffs, degree=2)
    from g2strom.torus import d
    alg = AlgebroidData.flat(su2_alg, d(b))
    m = strominger_to_killing_data(FourierField.constant(g2.omega), FourierField.constant(np.zeros(1), degree=0),
                                   ConnectionField.flat(su2_alg), alg)
    assert m.residual < 1e-12


def test_generalized_metric_rank(g2, su2_alg):
    gm = GeneralizedMetricData(FourierField.constant(g2.omega), FourierField.zero(2),
                               FourierField.constant(np.full((7, 3), 0.1), degree=1, lie=su2_alg),
                               FourierField.zero(0))
    Vp, Vm = gm.subbundles(np.eye(7), np.zeros((7, 7)), np.full((7, 3), 0.1))
    assert Vp.shape[1] == 7 + 3 and np.linalg.matrix_rank(Vp) == 10
    assert gm.admissibility["admissible"]


def test_inner_symmetry_matches_genKS_block(g2, su2_alg, rng):
    base = BasePoint.flat(su2_alg)
    alg = AlgebroidData.flat(su2_alg)
    for _ in range(3):
        k = tuple(int(j) for j in rng.integers(-1, 2, size=7))
        trig = lambda deg, n, lie=None: FourierField.trig(k, cos=rng.normal(size=n), sin=rng.normal(size=n),
                                                          degree=deg, cutoff=1, lie=lie)
        e = CourantSection(trig(1, 7), trig(0, 3, su2_alg), trig(1, 7))
        x = np.concatenate([e.X.mode(k)[:, 0], e.r.mode(k)[0], e.xi.mode(k)[:, 0]])
        img = inner_symmetry_image(e, alg, FourierField.zero(3), FourierField.zero(2, 0, su2_alg),
                                   FourierField.constant(g2.omega), FourierField.zero(0))
        got = np.concatenate([img.omega_dot.mode(k)[:, 0], [0.0], img.theta_dot.mode(k).reshape(-1),
                              img.b_dot.mode(k)[:, 0]])
        want = assemble_genKS_block(base, k).P_block @ x
        assert np.abs(got - want).max() < 1e-12
