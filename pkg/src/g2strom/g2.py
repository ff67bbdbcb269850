"""G2 linear algebra at a point: positive 3-forms, induced metric, type projections."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .exterior import (DIM, DegreeError, KForm, MetricData, MetricError, interior_tensor,
                       wedge_matrix, wedge_tensor)

# Labels allowed in each degree.
TYPE_LABELS = {2: (7, 14), 3: (1, 7, 27), 4: (1, 7, 27), 5: (7, 14)}


class NotPositiveError(MetricError):
    """The 3-form does not induce a definite metric."""


@dataclass(frozen=True)
class TypeComponent:
    degree: int
    label: int

    def __post_init__(self):
        if self.label not in TYPE_LABELS.get(self.degree, ()):
            raise DegreeError(f"no {self.label}-dimensional G2 component in degree {self.degree}")


def standard_omega() -> KForm:
    """The model positive 3-form.

    Same monomials as the usual e^123 + e^1(e^45 - e^67) + ... display, with the
    e^2- and e^3-lines sign-flipped so that iota_{e3} omega = e^12 - e^47 + e^56.
    """
    return KForm.from_terms(3, {
        (1, 2, 3): 1.0,
        (1, 4, 5): 1.0, (1, 6, 7): -1.0,
        (2, 4, 6): -1.0, (2, 7, 5): 1.0,
        (3, 4, 7): -1.0, (3, 5, 6): 1.0,
    })


def displayed_omega() -> KForm:
    """e^123 + e^1(e^45 - e^67) + e^2(e^46 - e^75) + e^3(e^47 - e^56), taken literally."""
    return KForm.from_terms(3, {
        (1, 2, 3): 1.0,
        (1, 4, 5): 1.0, (1, 6, 7): -1.0,
        (2, 4, 6): 1.0, (2, 7, 5): -1.0,
        (3, 4, 7): 1.0, (3, 5, 6): -1.0,
    })


def bilinear_form(omega: KForm) -> np.ndarray:
    """B[i, j] = coefficient of e^{1..7} in iota_i omega ^ iota_j omega ^ omega."""
    if omega.degree != 3:
        raise DegreeError("positive forms have degree 3")
    iw = np.einsum("jmi,i->mj", interior_tensor(3), omega.coeffs)   # row m: iota_{e_m} omega
    w22 = wedge_tensor(2, 2)
    w43 = wedge_tensor(4, 3)
    four = np.einsum("kab,ia,jb->ijk", w22, iw, iw)
    return np.einsum("kl,ijk,l->ij", w43[0], four, omega.coeffs)


def metric_from_positive_3form(omega: KForm) -> MetricData:
    """Metric and orientation with iota_u w ^ iota_v w ^ w = 6 g(u, v) vol_g."""
    B = bilinear_form(omega)
    B = 0.5 * (B + B.T)
    ev = np.linalg.eigvalsh(B)
    scale = np.abs(ev).max()
    if scale == 0 or not (ev.min() > 1e-10 * scale or ev.max() < -1e-10 * scale):
        raise NotPositiveError(f"3-form is not positive (eigenvalues of B: {np.round(ev, 6)})")
    orientation = 1 if ev.min() > 0 else -1
    b = B / (6.0 * orientation)              # = g * sqrt(det g)
    g = b / np.linalg.det(b) ** (1.0 / 9.0)
    return MetricData(0.5 * (g + g.T), orientation)


def _spectral_split(T: np.ndarray, G: np.ndarray):
    """Eigen-decompose T, self-adjoint for the inner product G; return (eigvals, G-orthonormal eigvecs)."""
    L = np.linalg.cholesky(G)            # G = L L^T
    Linv = np.linalg.inv(L)
    S = L.T @ T @ Linv.T
    S = 0.5 * (S + S.T)
    w, U = np.linalg.eigh(S)
    return w, Linv.T @ U


def _orth_projector(V: np.ndarray, G: np.ndarray) -> np.ndarray:
    """G-orthogonal projector onto the column span of V."""
    return V @ np.linalg.solve(V.T @ G @ V, V.T @ G)


@dataclass(frozen=True, eq=False)
class G2Structure:
    omega: KForm
    metric: MetricData
    star_omega: KForm
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_form(cls, omega: KForm) -> G2Structure:
        m = metric_from_positive_3form(omega)
        return cls(omega, m, KForm(4, m.star_matrix(3) @ omega.coeffs))

    # operator matrices -------------------------------------------------
    def star(self, k: int) -> np.ndarray:
        return self.metric.star_matrix(k)

    def two_form_operator(self) -> np.ndarray:
        """beta -> *(beta ^ omega) on Lambda^2."""
        return self.star(5) @ wedge_matrix(self.omega, 3, 2)

    def pi14_closed_form(self) -> np.ndarray:
        return 2.0 / 3.0 * np.eye(21) - 1.0 / 3.0 * self.two_form_operator()

    def projector(self, degree: int, label: int) -> np.ndarray:
        TypeComponent(degree, label)
        key = (degree, label)
        if key not in self._cache:
            self._cache.update(self._build_projectors(degree))
        return self._cache[key]

    def _build_projectors(self, degree: int) -> dict:
        m = self.metric
        if degree in (4, 5):
            k = DIM - degree
            S = self.star(k)
            Sinv = np.linalg.inv(S)
            return {(degree, lab): S @ self.projector(k, lab) @ Sinv for lab in TYPE_LABELS[k]}
        G = m.form_gram(degree)
        if degree == 2:
            w, V = _spectral_split(self.two_form_operator(), G)
            p7 = V[:, w > 0.5] @ V[:, w > 0.5].T @ G
            p14 = V[:, w < 0.5] @ V[:, w < 0.5].T @ G
            return {(2, 7): p7, (2, 14): p14}
        # degree 3: Lambda^3_1 = span(omega); Lambda^3_7 is the nonzero eigenspace of
        # xi -> *( *(xi ^ omega) ^ omega ), which kills Lambda^3_1 + Lambda^3_27.
        w_ = self.omega.coeffs[:, None]
        p1 = _orth_projector(w_, G)
        K = self.star(4) @ wedge_matrix(self.omega, 3, 1) @ self.star(6) @ wedge_matrix(self.omega, 3, 3)
        ev, V = _spectral_split(K, G)
        big = np.abs(ev) > 1e-8 * np.abs(ev).max()
        p7 = V[:, big] @ V[:, big].T @ G
        return {(3, 1): p1, (3, 7): p7, (3, 27): np.eye(35) - p1 - p7}

    def j_matrix(self, degree: int) -> np.ndarray:
        if degree not in (3, 4):
            raise DegreeError(f"J acts on 3- and 4-forms, not {degree}-forms")
        return (4.0 / 3.0 * self.projector(degree, 1) + self.projector(degree, 7)
                - self.projector(degree, 27))


@lru_cache(maxsize=None)
def _standard() -> G2Structure:
    return G2Structure.from_form(standard_omega())


def standard_g2_form() -> G2Structure:
    return _standard()


def project(g2: G2Structure, c: TypeComponent, a: KForm) -> KForm:
    if a.degree != c.degree:
        raise DegreeError(f"form of degree {a.degree} projected to a degree-{c.degree} component")
    return KForm(a.degree, g2.projector(c.degree, c.label) @ a.coeffs)


def j_operator(g2: G2Structure, a: KForm) -> KForm:
    return KForm(a.degree, g2.j_matrix(a.degree) @ a.coeffs)


def two_form_eigen_characterization(g2: G2Structure, beta: KForm) -> tuple[float, float]:
    """Residuals of beta_14 ^ omega = -*beta_14 and beta_7 ^ omega = 2 *beta_7."""
    if beta.degree != 2:
        raise DegreeError("expected a 2-form")
    W = wedge_matrix(g2.omega, 3, 2)
    S = g2.star(2)
    b14 = g2.projector(2, 14) @ beta.coeffs
    b7 = g2.projector(2, 7) @ beta.coeffs
    return float(np.linalg.norm(W @ b14 + S @ b14)), float(np.linalg.norm(W @ b7 - 2 * S @ b7))


def g2_lie_algebra(omega: KForm | None = None) -> np.ndarray:
    """Basis (n, 7, 7) of skew matrices X with X . omega = 0 (the stabiliser algebra)."""
    omega = standard_omega() if omega is None else omega
    gens = []
    for i in range(DIM):
        for j in range(i + 1, DIM):
            X = np.zeros((DIM, DIM))
            X[i, j], X[j, i] = 1.0, -1.0
            gens.append(X)
    # derivation action of X on omega: -(X^T acting on each slot), via pullback derivative
    cols = [_derivation(X, omega) for X in gens]
    null = scipy.linalg.null_space(np.array(cols).T)
    return np.einsum("gn,gij->nij", null, np.array(gens))


def _derivation(X: np.ndarray, omega: KForm) -> np.ndarray:
    """d/dt (exp(tX))^* omega at t = 0."""
    # (A^* w)(u,v,w) = w(Au, Av, Aw); derivative sums X over slots
    from .exterior import basis
    out = np.zeros(35)
    T = _dense3(omega)
    D = np.einsum("ma,mbc->abc", X, T) + np.einsum("mb,amc->abc", X, T) + np.einsum("mc,abm->abc", X, T)
    for n, (a, b, c) in enumerate(basis(3)):
        out[n] = D[a, b, c]
    return out


def _dense3(omega: KForm) -> np.ndarray:
    from .exterior import basis
    T = np.zeros((DIM,) * 3)
    for (a, b, c), v in zip(basis(3), omega.coeffs):
        for (p, q, r), s in (((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1),
                             ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1)):
            T[p, q, r] = s * v
    return T


def random_g2_element(rng: np.random.Generator, omega: KForm | None = None, scale: float = 1.0) -> np.ndarray:
    """exp of a random element of the stabiliser algebra; orthogonal and preserves omega."""
    basis_ = g2_lie_algebra(omega)
    X = np.einsum("n,nij->ij", rng.normal(size=len(basis_)) * scale, basis_)
    return scipy.linalg.expm(X)
