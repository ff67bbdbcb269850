"""Check suites behind each CLI command.  Each returns a list of :class:`Check`."""
from __future__ import annotations

from math import comb

import numpy as np

from .exterior import (DIM, EUCLIDEAN, KForm, MetricData, hodge_star, inner_product, interior, pullback_matrix)
from .g2 import (G2Structure, TYPE_LABELS, metric_from_positive_3form, random_g2_element, standard_g2_form,
                 two_form_eigen_characterization)
from .lie import LieAlgebraError, by_name
from .linalg import rank
from .reports import ERROR, Check, RunConfig

DIMS = {2: (7, 14), 3: (1, 7, 27), 4: (1, 7, 27), 5: (7, 14)}


def _rand_form(rng, k) -> KForm:
    return KForm(k, rng.normal(size=comb(DIM, k)))


def _random_spd(rng) -> np.ndarray:
    A = rng.normal(size=(DIM, DIM))
    return A @ A.T + DIM * np.eye(DIM)


# exterior + G2 algebra ------------------------------------------------------------

def exterior_checks(cfg: RunConfig, trials: int = 20) -> list:
    rng = np.random.default_rng(cfg.seed)
    assoc = comm = star2 = inner = leib = 0.0
    for _ in range(trials):
        p, q = rng.integers(0, 4, size=2)
        r = rng.integers(0, DIM - p - q + 1)
        a, b, c = _rand_form(rng, p), _rand_form(rng, q), _rand_form(rng, r)
        assoc = max(assoc, (((a ^ b) ^ c) - (a ^ (b ^ c))).norm())
        comm = max(comm, ((a ^ b) - (-1) ** (p * q) * (b ^ a)).norm())
        m = MetricData(_random_spd(rng), int(rng.choice([-1, 1])))
        k = int(rng.integers(0, DIM + 1))
        x, y = _rand_form(rng, k), _rand_form(rng, k)
        ssx = hodge_star(hodge_star(x, m), m)
        star2 = max(star2, (ssx - x).norm() / max(1.0, x.norm()))
        lhs = (x ^ hodge_star(y, m)).coeffs[0]
        rhs = inner_product(x, y, m) * m.volume_form.coeffs[0]
        inner = max(inner, abs(lhs - rhs) / max(1.0, abs(rhs)))
        v = rng.normal(size=DIM)
        if p >= 1 and q >= 1 and p + q <= DIM:
            leib = max(leib, (interior(v, a ^ b) - (interior(v, a) ^ b) - (-1) ** p * (a ^ interior(v, b))).norm())
    vol = (hodge_star(KForm(0, np.ones(1)), EUCLIDEAN) - KForm.e(*range(1, 8))).norm()
    tol = cfg.tol
    return [
        Check.threshold("wedge_associativity", assoc <= tol, residual=assoc),
        Check.threshold("graded_commutativity", comm <= tol, residual=comm),
        Check.threshold("star_involution", star2 <= tol, residual=star2),
        Check.threshold("star_inner_product", inner <= tol, residual=inner),
        Check.threshold("interior_antiderivation", leib <= tol, residual=leib),
        Check.threshold("euclidean_volume_form", vol <= tol, residual=vol),
    ]


def g2_checks(cfg: RunConfig, g2: G2Structure | None = None) -> list:
    g2 = standard_g2_form() if g2 is None else g2
    rng = np.random.default_rng(cfg.seed)
    out = []
    metric_err = float(np.abs(g2.metric.gram - np.eye(DIM)).max())
    out.append(Check.threshold("standard_metric", metric_err <= cfg.tol, residual=metric_err,
                               orientation=g2.metric.orientation))
    ranks = {str(k): [rank(g2.projector(k, lab), cfg.rank_tol) for lab in TYPE_LABELS[k]] for k in DIMS}
    ok = all(tuple(ranks[str(k)]) == DIMS[k] for k in DIMS)
    out.append(Check.threshold("projector_ranks", ok, ranks=ranks, expected={str(k): list(v) for k, v in DIMS.items()}))
    idem = compl = cross = 0.0
    for k in DIMS:
        Ps = [g2.projector(k, lab) for lab in TYPE_LABELS[k]]
        idem = max(idem, max(float(np.abs(P @ P - P).max()) for P in Ps))
        compl = max(compl, float(np.abs(sum(Ps) - np.eye(comb(DIM, k))).max()))
        cross = max(cross, max(float(np.abs(P @ Q).max()) for i, P in enumerate(Ps) for Q in Ps[i + 1:]))
    out.append(Check.threshold("projector_algebra", max(idem, compl, cross) <= cfg.tol,
                               idempotence=idem, completeness=compl, orthogonality=cross))
    target = (KForm.e(1, 2) - KForm.e(4, 7) + KForm.e(5, 6)) / 3.0
    got = KForm(2, g2.projector(2, 7) @ KForm.e(1, 2).coeffs)
    err = float(np.abs((got - target).coeffs).max())
    out.append(Check.threshold("pi7_e12", err <= 1e-14, residual=err, tolerance=1e-14))
    diff = float(np.linalg.norm(g2.pi14_closed_form() - g2.projector(2, 14), 2))
    out.append(Check.threshold("pi14_closed_form", diff <= 1e-12, operator_norm=diff, tolerance=1e-12))
    r14 = r7 = 0.0
    for _ in range(10):
        a, b = two_form_eigen_characterization(g2, _rand_form(rng, 2))
        r14, r7 = max(r14, a), max(r7, b)
    out.append(Check.threshold("two_form_eigenspaces", max(r14, r7) <= cfg.tol, residual14=r14, residual7=r7))
    ev = np.sort(np.linalg.eigvals(g2.j_matrix(3)).real)
    expect = np.sort([4 / 3] + [1.0] * 7 + [-1.0] * 27)
    jerr = float(np.abs(ev - expect).max())
    out.append(Check.threshold("j_spectrum", jerr <= 1e-10, residual=jerr))
    eq = 0.0
    for _ in range(3):
        A = random_g2_element(rng, g2.omega)
        for k in DIMS:
            M = pullback_matrix(A, k)
            for lab in TYPE_LABELS[k]:
                P = g2.projector(k, lab)
                eq = max(eq, float(np.abs(M @ P - P @ M).max()))
    out.append(Check.threshold("g2_equivariance", eq <= 1e-10, residual=eq))
    frame = 0.0
    for _ in range(5):
        A = np.eye(DIM) + 0.3 * rng.normal(size=(DIM, DIM))
        if np.linalg.det(A) <= 0:
            A[:, 0] *= -1
        w = KForm(3, pullback_matrix(A, 3) @ g2.omega.coeffs)
        m = metric_from_positive_3form(w)
        frame = max(frame, float(np.abs(m.gram - A.T @ g2.metric.gram @ A).max() / np.abs(A.T @ A).max()))
    out.append(Check.threshold("pullback_metric", frame <= 1e-10, residual=frame))
    return out


def lie_checks(cfg: RunConfig) -> list:
    out = []
    for name in ("trivial", "su2"):
        lie = by_name(name)
        out.append(Check.threshold(f"lie_{name}", max(lie.jacobi_residual(), lie.invariance_residual()) <= cfg.tol,
                                   dim=lie.dim, jacobi=lie.jacobi_residual(), invariance=lie.invariance_residual(),
                                   nondegenerate=lie.is_nondegenerate()))
    return out


def verify_algebra(cfg: RunConfig) -> list:
    return exterior_checks(cfg) + g2_checks(cfg) + lie_checks(cfg)


# symbols ------------------------------------------------------------------------------

def symbol_checks(cfg: RunConfig) -> list:
    from .symbols import sweep_symbols
    lie = by_name(cfg.lie)
    rep = sweep_symbols(standard_g2_form(), lie, cfg.samples, cfg.seed, cfg.tol, cfg.rank_tol)
    out = [
        Check.threshold("metric_symbol_exactness", rep.ranks_P == [7] and rep.nullities_L == [7]
                        and rep.max_angle <= cfg.tol and rep.passed,
                        n_samples=rep.n_samples, n_passed=rep.n_passed, ranks_P=rep.ranks_P,
                        nullities_L=rep.nullities_L, max_angle=rep.max_angle, min_margin_P=rep.min_margin_P,
                        min_margin_L=rep.min_margin_L, failures=rep.failures[:10]),
        Check.threshold("symbol_composition", rep.max_composition <= 1e-12, max_composition=rep.max_composition),
    ]
    if lie.dim:
        out.append(Check.threshold("instanton_symbol_injective", rep.min_bundle_sigma > 1e-6,
                                   min_sigma=rep.min_bundle_sigma, threshold=1e-6))
    return out


# moduli -------------------------------------------------------------------------------

def moduli_checks(cfg: RunConfig) -> list:
    from .moduli import BasePoint, cohomology_dimension, flux_map, gauge_image
    if cfg.cutoff < 1:
        return [Check("cutoff", ERROR, {"message": "moduli computations need cutoff >= 1"})]
    lie = by_name(cfg.lie)
    n = lie.dim
    base = BasePoint.flat(lie)
    b2, b3 = comb(DIM, 2), comb(DIM, 3)
    expected = {"KS": b3 + 1 + DIM * n, "metric-only": b3 + 1, "instanton-only": DIM * n,
                "genKS": b3 + 1 + DIM * n + b2}
    res = {w: cohomology_dimension(base, cfg.cutoff, w, cfg.rank_tol) for w in expected}
    out = [Check.threshold(f"H1_{w}", res[w].total_H1 == expected[w], expected=expected[w], **res[w].to_dict())
           for w in expected]
    out.append(Check.threshold("splitting_consistency",
                               res["KS"].total_H1 == res["metric-only"].total_H1 + res["instanton-only"].total_H1,
                               KS=res["KS"].total_H1, metric=res["metric-only"].total_H1,
                               instanton=res["instanton-only"].total_H1))
    cres = max(r.max_complex_residual for r in res.values())
    out.append(Check.threshold("complex_property", cres <= 1e-12, max_relative_residual=cres))
    ang = max(r.max_containment_angle for r in res.values())
    out.append(Check.threshold("containment", ang <= cfg.tol, max_angle=ang))
    H = res["KS"].harmonic_basis
    flux = np.array([flux_map(base, h) for h in H]) if len(H) else np.zeros((0, 35))
    fmax = float(np.abs(flux).max(initial=0.0))
    ker_delta = int(len(H) - (rank(flux, cfg.rank_tol) if fmax > 0 else 0))
    out.append(Check.threshold("flux_map_vanishes", fmax <= cfg.tol, max_abs=fmax, kernel_dim=ker_delta))
    out.append(Check.threshold("extension_count", res["genKS"].total_H1 == b2 + ker_delta,
                               genKS=res["genKS"].total_H1, b2=b2, kernel_delta=ker_delta))
    rng = np.random.default_rng(cfg.seed)
    gauge = 0.0
    for _ in range(5):
        k = tuple(int(x) for x in rng.integers(-cfg.cutoff, cfg.cutoff + 1, size=DIM))
        g = rng.normal(size=DIM + n)
        x = gauge_image(base, k, g)
        gauge = max(gauge, float(np.abs(flux_map(base, {k: x})).max()))
    out.append(Check.threshold("flux_gauge_invariance", gauge <= cfg.tol, max_abs=gauge))
    return out


# torsion ------------------------------------------------------------------------------

def torsion_checks(cfg: RunConfig) -> list:
    from .fieldio import FieldFormatError, load_bundle
    from .g2 import NotPositiveError
    from .torus import ConnectionField, fernandez_gray, strominger_residual, torsion_H
    if cfg.input is None:
        return [Check("input", ERROR, {"message": "torsion needs --input FILE"})]
    try:
        data = load_bundle(cfg.input)
    except FieldFormatError as exc:
        return [Check("input", ERROR, {"message": str(exc), "pointer": exc.pointer})]
    if "omega" not in data:
        return [Check("input", ERROR, {"message": "no omega field", "pointer": "/omega"})]
    omega = data["omega"]
    if omega.degree != 3 or omega.lie is not None:
        return [Check("input", ERROR, {"message": "omega must be a plain 3-form", "pointer": "/omega/degree"})]
    out = [Check("input", "PASS", {"fields": sorted(data)})]
    try:
        rep = fernandez_gray(omega, cfg.tol)
    except NotPositiveError as exc:
        return out + [Check("positivity", ERROR, {"message": str(exc)})]
    out.append(Check("fernandez_gray", "PASS", rep.to_dict()))
    out.append(Check("lee_form", "PASS", {"l2_norm": rep.lee_form.l2_norm(),
                                          "exactness_defect": rep.norms["lee_exactness_defect"]}))
    if "phi" in data:
        phi = data["phi"]
        tH = torsion_H(omega, phi, tol=cfg.tol)
        out.append(Check("torsion_H", "PASS", {"l2_norm": tH.H.l2_norm(), "line1_residual": tH.line1_residual,
                                                "line1_holds": tH.line1_holds}))
        theta = data.get("theta")
        if theta is None:
            theta = ConnectionField.flat(by_name(cfg.lie))
        sr = strominger_residual(omega, phi, theta, tol=cfg.tol)
        norms = sr.norms()
        out.append(Check.threshold("strominger_residual", max(norms.values()) <= cfg.tol, **norms))
        out.append(Check.threshold("bianchi_obstruction", sr.solvable,
                                   pontryagin_mean=np.real(sr.pontryagin_mean), solvable=sr.solvable))
    return out


# courant ------------------------------------------------------------------------------

def courant_checks(cfg: RunConfig) -> list:
    from .courant import (AlgebroidData, bianchi_sweep, check_axioms, strominger_to_killing_data)
    from .fieldio import FieldFormatError, load_bundle
    from .torus import ConnectionField, FourierField
    try:
        lie = by_name(cfg.lie)
        if cfg.input is None:
            alg = AlgebroidData.flat(lie)
        else:
            data = load_bundle(cfg.input)
            H0 = data.get("H0", FourierField.zero(3))
            theta0 = data.get("theta0", ConnectionField.flat(lie))
            alg = AlgebroidData(H0, theta0, theta0.lie)
    except FieldFormatError as exc:
        return [Check("algebroid", ERROR, {"message": str(exc), "pointer": exc.pointer})]
    except (LieAlgebraError, ValueError) as exc:
        return [Check("algebroid", ERROR, {"message": str(exc)})]
    out = [Check.threshold("bianchi_identity", alg.bianchi_norm <= cfg.tol, residual=alg.bianchi_norm)]
    rep = check_axioms(alg, tol=cfg.tol, seed=cfg.seed, n_sections=cfg.samples)
    for name, val in rep.residuals.items():
        out.append(Check.threshold(f"axiom_{name}", val <= cfg.tol, residual=val,
                                   n_sections=rep.n_sections, n_triples=rep.n_triples))
    if cfg.perturb_bianchi:
        eps = sorted({0.0, *map(float, cfg.perturb_bianchi)})
        pts = bianchi_sweep(alg, eps, cfg.seed, cfg.samples, cfg.tol)
        zero_ok = pts[0].d1_residual <= cfg.tol
        pos_ok = all(p.d1_residual > p.threshold for p in pts[1:])
        mono = all(b.d1_residual > a.d1_residual for a, b in zip(pts, pts[1:]))
        out.append(Check.threshold("bianchi_sweep", zero_ok and pos_ok and mono,
                                   points=[vars(p) for p in pts], zero_ok=zero_ok, positive=pos_ok, increasing=mono))
    if cfg.input is None:
        from .exterior import KForm
        g2 = standard_g2_form()
        omega = FourierField.constant(g2.omega)
        phi = FourierField.constant(np.zeros(1), degree=0)
        m = strominger_to_killing_data(omega, phi, alg.theta0, alg)
        out.append(Check.threshold("dictionary_flat", m.residual <= 1e-12, residual=m.residual,
                                   b_norm=m.metric.b.l2_norm(), admissible=m.metric.admissibility["admissible"]))
        rng = np.random.default_rng(cfg.seed)
        h = KForm(3, rng.normal(size=35))
        m2 = strominger_to_killing_data(omega, phi, alg.theta0, alg.with_H0(alg.H0 + FourierField.constant(h)))
        gap = abs(m2.residual - h.norm())
        out.append(Check.threshold("dictionary_harmonic_offset", gap <= 1e-10, residual=m2.residual,
                                   offset_norm=h.norm(), difference=gap, compatible=m2.compatible))
    return out


SUITES = {
    "verify-algebra": verify_algebra,
    "symbols": symbol_checks,
    "moduli": moduli_checks,
    "torsion": torsion_checks,
    "courant": courant_checks,
}
