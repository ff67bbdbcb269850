"""Principal symbols of the deformation complexes as explicit matrices.

Each symbol is evaluated at a covector ``v`` and returned as a
:class:`SymbolMatrix` whose codomain blocks carry their homogeneity degree in
``v`` (the multi-degree system of orders).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg

from .exterior import DIM, KForm, interior_matrix, right_wedge_matrix, wedge_matrix
from .g2 import G2Structure
from .lie import LieAlgebraConfig
from .linalg import RANK_TOL, containment_angle, kernel_basis, range_basis


class ZeroCovectorError(ValueError):
    """Symbols live on the complement of the zero section."""


@dataclass(eq=False)
class SymbolMatrix:
    covector: KForm
    domain_dims: list[int]
    codomain_dims: list[int]
    matrix: np.ndarray
    block_degrees: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.matrix.shape != (sum(self.codomain_dims), sum(self.domain_dims)):
            raise ValueError(f"symbol matrix shape {self.matrix.shape} does not match "
                             f"blocks {self.codomain_dims} x {self.domain_dims}")

    def block(self, i: int, j: int) -> np.ndarray:
        r = np.cumsum([0] + self.codomain_dims)
        c = np.cumsum([0] + self.domain_dims)
        return self.matrix[r[i]:r[i + 1], c[j]:c[j + 1]]


def _covector(v) -> np.ndarray:
    c = v.coeffs if isinstance(v, KForm) else np.asarray(v, dtype=float)
    if c.shape != (DIM,):
        raise ValueError("covector must be a 1-form on R^7")
    if not np.any(c):
        raise ZeroCovectorError("symbol evaluated at the zero covector")
    return c


def symbol_P_M(g2: G2Structure, v) -> SymbolMatrix:
    """V -> (v ^ iota_V omega, 0): R^7 -> Lambda^3 + R."""
    c = _covector(v)
    iota = np.stack([interior_matrix(np.eye(DIM)[m], 3) @ g2.omega.coeffs for m in range(DIM)], axis=1)
    top = wedge_matrix(c, 1, 2) @ iota
    return SymbolMatrix(KForm(1, c), [DIM], [35, 1], np.vstack([top, np.zeros((1, DIM))]), [1, 0])


def _metric_rows(g2: G2Structure, c: np.ndarray, phi_weight: float) -> np.ndarray:
    """Rows (Lambda^7, Lambda^5, Lambda^4) acting on (omega_dot, phi_dot)."""
    w = g2.omega.coeffs
    v1_6 = wedge_matrix(c, 1, 6)
    v1_4 = wedge_matrix(c, 1, 4)
    v1_3 = wedge_matrix(c, 1, 3)
    row1 = np.hstack([v1_6 @ right_wedge_matrix(w, 3, 3), np.zeros((1, 1))])
    row2 = v1_4 @ np.hstack([g2.star(3) @ g2.j_matrix(3), phi_weight * g2.star_omega.coeffs[:, None]])
    row3 = v1_3 @ g2.star(4) @ v1_3 @ np.hstack([np.eye(35), phi_weight * w[:, None]])
    return np.vstack([row1, row2, row3])


def symbol_L_M(g2: G2Structure, v) -> SymbolMatrix:
    """(omega_dot, phi_dot) -> (v^omega_dot^omega, v^(*J omega_dot + phi_dot *omega),
    v ^ *(v ^ (omega_dot + phi_dot omega)))."""
    c = _covector(v)
    return SymbolMatrix(KForm(1, c), [35, 1], [1, 21, 35], _metric_rows(g2, c, 1.0), [1, 1, 2])


def symbol_P_P(lie: LieAlgebraConfig, v) -> SymbolMatrix:
    """r -> v (x) r : g -> Lambda^1 (x) g."""
    c = _covector(v)
    n = lie.dim
    return SymbolMatrix(KForm(1, c), [n], [DIM * n], np.kron(c[:, None], np.eye(n)), [1])


def symbol_L_P(g2: G2Structure, lie: LieAlgebraConfig, v) -> SymbolMatrix:
    """a -> v ^ a ^ *omega : Lambda^1 (x) g -> Lambda^6 (x) g."""
    c = _covector(v)
    n = lie.dim
    m = right_wedge_matrix(g2.star_omega, 4, 2) @ wedge_matrix(c, 1, 1)
    return SymbolMatrix(KForm(1, c), [DIM * n], [DIM * n], np.kron(m, np.eye(n)), [1])


def symbol_D_theta(g2: G2Structure, lie: LieAlgebraConfig, xi) -> SymbolMatrix:
    """a -> (*omega ^ (xi ^ a), iota_{xi#} a) : Lambda^1 (x) g -> (Lambda^6 + Lambda^0) (x) g."""
    c = _covector(xi)
    n = lie.dim
    first = wedge_matrix(g2.star_omega, 4, 2) @ wedge_matrix(c, 1, 1)
    second = (g2.metric.inverse @ c)[None, :]
    mat = np.vstack([np.kron(first, np.eye(n)), np.kron(second, np.eye(n))])
    return SymbolMatrix(KForm(1, c), [DIM * n], [DIM * n, n], mat, [1, 1])


def symbol_L_h(g2: G2Structure, lie: LieAlgebraConfig, v) -> SymbolMatrix:
    """Symbol of the top-order linearisation on (omega_dot, phi_dot, theta_dot), assembled jointly.

    Columns are fed through each equation of the full system; the resulting
    matrix is not built from the factor symbols, so comparing its blocks with
    them is a genuine check of the split.
    """
    c = _covector(v)
    n = lie.dim
    ncols = 36 + DIM * n
    out = np.zeros((1 + 21 + 35 + DIM * n, ncols))
    metric = _metric_rows(g2, c, 1.0)
    wedge_star = right_wedge_matrix(g2.star_omega, 4, 2) @ wedge_matrix(c, 1, 1)
    for j in range(ncols):
        x = np.zeros(ncols)
        x[j] = 1.0
        om_phi, theta = x[:36], x[36:].reshape(DIM, n) if n else np.zeros((DIM, 0))
        out[:57, j] = metric @ om_phi
        out[57:, j] = (wedge_star @ theta).reshape(-1)
    return SymbolMatrix(KForm(1, c), [35, 1, DIM * n], [1, 21, 35, DIM * n], out, [1, 1, 2, 1])


def symbol_P_h(g2: G2Structure, lie: LieAlgebraConfig, v) -> SymbolMatrix:
    c = _covector(v)
    n = lie.dim
    P = scipy.linalg.block_diag(symbol_P_M(g2, c).matrix, symbol_P_P(lie, c).matrix)
    return SymbolMatrix(KForm(1, c), [DIM, n], [35, 1, DIM * n], P, [1, 0, 1])


@dataclass
class ExactnessReport:
    covector: list[float]
    rank_P: int
    nullity_L: int
    angle: float
    composition: float
    rank_P_full: int
    nullity_L_full: int
    angle_full: float
    product_split: float
    bundle_sigma_min: float | None
    margin_P: float
    margin_L: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _relative_margin(m: np.ndarray, r: int) -> float:
    """sigma_r / sigma_max for the r-th (1-based) singular value; 1 if r == 0."""
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[r - 1] / s[0]) if r else 1.0


def _middle(P: np.ndarray, L: np.ndarray, rank_tol: float):
    imP = range_basis(P, rank_tol)
    kerL = kernel_basis(L, rank_tol)
    return imP.shape[1], kerL.shape[1], containment_angle(imP, kerL)


def check_exactness_middle(g2: G2Structure, lie: LieAlgebraConfig, v, tol: float = 1e-9,
                           rank_tol: float = RANK_TOL) -> ExactnessReport:
    """Exactness of the symbol sequence at the middle term, metric and full system."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = _covector(v)
    P, L = symbol_P_M(g2, c).matrix, symbol_L_M(g2, c).matrix
    rP, nL, ang = _middle(P, L, rank_tol)
    comp = float(np.linalg.norm(L @ P, 2) / (np.linalg.norm(L, 2) * np.linalg.norm(P, 2)))

    Lh, Ph = symbol_L_h(g2, lie, c), symbol_P_h(g2, lie, c)
    split = scipy.linalg.block_diag(L, symbol_L_P(g2, lie, c).matrix) if lie.dim else L
    product_split = float(np.abs(Lh.matrix - split).max())
    rPf, nLf, angf = _middle(Ph.matrix, Lh.matrix, rank_tol)

    sig_d = None
    if lie.dim:
        sig_d = float(np.linalg.svd(symbol_D_theta(g2, lie, c).matrix, compute_uv=False).min())
    passed = (rP == nL and ang <= tol and rPf == nLf and angf <= tol and product_split == 0.0
              and (sig_d is None or sig_d > 0))
    return ExactnessReport(
        covector=[float(x) for x in c], rank_P=rP, nullity_L=nL, angle=ang, composition=comp,
        rank_P_full=rPf, nullity_L_full=nLf, angle_full=angf, product_split=product_split,
        bundle_sigma_min=sig_d, margin_P=_relative_margin(P, rP), margin_L=_relative_margin(L, L.shape[1] - nL),
        passed=bool(passed))


@dataclass
class AggregateReport:
    n_samples: int
    seed: int
    n_passed: int
    min_margin_P: float
    min_margin_L: float
    min_bundle_sigma: float | None
    max_angle: float
    max_composition: float
    ranks_P: list[int]
    nullities_L: list[int]
    failures: list[list[float]]

    @property
    def passed(self) -> bool:
        return self.n_passed == self.n_samples

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def random_unit_covectors(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(n, DIM))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sweep_symbols(g2: G2Structure, lie: LieAlgebraConfig, n_samples: int, seed: int = 42,
                  tol: float = 1e-9, rank_tol: float = RANK_TOL, covectors=None) -> AggregateReport:
    """Run :func:`check_exactness_middle` over seeded random unit covectors."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    vs = random_unit_covectors(n_samples, seed) if covectors is None else np.asarray(covectors, float)
    reps = [check_exactness_middle(g2, lie, v, tol, rank_tol) for v in vs]
    sig = [r.bundle_sigma_min for r in reps if r.bundle_sigma_min is not None]
    return AggregateReport(
        n_samples=len(reps), seed=seed, n_passed=sum(r.passed for r in reps),
        min_margin_P=min(r.margin_P for r in reps), min_margin_L=min(r.margin_L for r in reps),
        min_bundle_sigma=min(sig) if sig else None,
        max_angle=max(max(r.angle, r.angle_full) for r in reps),
        max_composition=max(r.composition for r in reps),
        ranks_P=sorted({r.rank_P for r in reps}), nullities_L=sorted({r.nullity_L for r in reps}),
        failures=[r.covector for r in reps if not r.passed])
