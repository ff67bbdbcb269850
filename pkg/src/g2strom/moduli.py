"""Linearized deformation complexes at flat torsion-free base points, mode by mode.

At a base with constant omega, constant phi and a flat constant connection offset
a0, every operator in the complexes has constant coefficients, so both P and L
act independently on each Fourier mode exp(2 pi i k.x).  The cohomology
ker L / im P is then a finite sum of per-mode defects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .exterior import DIM, interior_tensor, right_wedge_matrix, wedge_tensor
from .g2 import G2Structure, standard_g2_form
from .lie import LieAlgebraConfig, trivial
from .linalg import RANK_TOL
from .torus import ConnectionField, FourierField, strominger_residual

COMPLEXES = ("KS", "genKS", "metric-only", "instanton-only")


class BaseError(ValueError):
    """Base point outside the flat torsion-free class."""


class NotInKernelError(ValueError):
    pass


@dataclass(eq=False)
class BasePoint:
    g2: G2Structure
    phi: float = 0.0
    bundle: LieAlgebraConfig = field(default_factory=trivial)
    a0: np.ndarray | None = None
    check_tol: float = 1e-12

    def __post_init__(self):
        n = self.bundle.dim
        self.a0 = np.zeros((DIM, n)) if self.a0 is None else np.asarray(self.a0, float).reshape(DIM, n)
        F = 0.5 * np.einsum("kij,ia,jb,abc->kc", wedge_tensor(1, 1), self.a0, self.a0,
                            self.bundle.structure_constants) if n else np.zeros((21, 0))
        if np.abs(F).max(initial=0.0) > self.check_tol:
            raise BaseError("connection offset is not flat")
        res = strominger_residual(*self.fields()).max_norm()
        if res > self.check_tol:
            raise BaseError(f"base is not a solution (residual {res:.3e})")

    @classmethod
    def flat(cls, bundle: LieAlgebraConfig | None = None, phi: float = 0.0) -> BasePoint:
        return cls(standard_g2_form(), phi, trivial() if bundle is None else bundle)

    @classmethod
    def from_fields(cls, omega: FourierField, phi: FourierField, theta: ConnectionField,
                    tol: float = 1e-12) -> BasePoint:
        """Accept field data only if it is constant with flat connection."""
        for name, f in (("omega", omega), ("phi", phi), ("connection", theta.a)):
            if not f.is_constant(tol):
                raise BaseError(f"{name} is not constant; only flat torsion-free bases are supported")
        if not theta.base_flat:
            raise BaseError("background connection is not flat")
        from .exterior import KForm
        g2 = G2Structure.from_form(KForm(3, omega.mean()[:, 0].real))
        return cls(g2, float(phi.mean()[0, 0].real), theta.lie, theta.a.mean().real, tol)

    def fields(self):
        om = FourierField.constant(self.g2.omega)
        ph = FourierField.constant(np.array([self.phi]), degree=0)
        th = ConnectionField(FourierField.constant(self.a0, degree=1, lie=self.bundle))
        return om, ph, th

    @property
    def n(self) -> int:
        return self.bundle.dim


@dataclass
class BlockOperator:
    wavevector: tuple
    P_block: np.ndarray
    L_block: np.ndarray
    domain_labels: list   # [(name, dim)] for the columns of L
    codomain_labels: list  # rows of L
    gauge_labels: list     # columns of P

    def complex_residual(self) -> float:
        nL, nP = np.linalg.norm(self.L_block, 2), np.linalg.norm(self.P_block, 2)
        if nL == 0 or nP == 0:
            return 0.0
        return float(np.linalg.norm(self.L_block @ self.P_block, 2) / (nL * nP))


class _Assembler:
    """Batched construction of the per-mode matrices as polynomials in kappa = 2 pi k."""

    def __init__(self, base: BasePoint, which: str):
        if which not in COMPLEXES:
            raise ValueError(f"unknown complex {which!r}; choose from {COMPLEXES}")
        self.base, self.which = base, which
        g2, n = base.g2, base.n
        w, sw = g2.omega.coeffs, g2.star_omega.coeffs
        self.n = n
        self.W = {p: wedge_tensor(1, p) for p in (1, 2, 3, 4, 6)}
        self.R_w33 = right_wedge_matrix(w, 3, 3)
        self.SJ = g2.star(3) @ g2.j_matrix(3)
        self.S4 = g2.star(4)
        self.R_sw42 = np.kron(right_wedge_matrix(sw, 4, 2), np.eye(n))
        self.iota_w = np.einsum("jmi,i->jm", interior_tensor(3), w)
        f = base.bundle.structure_constants
        # [a0 ^ theta_dot] on Lambda^1 (x) g, and [a0, r] on g
        self.adA = np.einsum("Kij,ia,abc->Kcjb", self.W[1], base.a0, f).reshape(21 * n, 7 * n)
        self.adA0 = np.einsum("ja,abc->jcb", base.a0, f).reshape(7 * n, n)
        self.w, self.sw = w, sw

    def wk(self, kap, p):
        return np.einsum("kij,bi->bkj", self.W[p], kap)

    def labels(self):
        n = self.n
        metric_cols = [("omega_dot", 35), ("phi_dot", 1)]
        metric_rows = [("E1", 1), ("E2", 21)]
        gen = self.which == "genKS"
        if self.which == "metric-only":
            return metric_cols, metric_rows + [("E3", 35)], [("V", 7)]
        if self.which == "instanton-only":
            return [("theta_dot", 7 * n)], [("E4", 7 * n)], [("r", n)]
        cols = metric_cols + [("theta_dot", 7 * n)] + ([("b", 21)] if gen else [])
        rows = metric_rows + [("E3_hat" if gen else "E3", 35), ("E4", 7 * n)]
        gauge = [("V", 7), ("r", n)] + ([("xi", 7)] if gen else [])
        return cols, rows, gauge

    def __call__(self, ks: np.ndarray):
        kap = 2 * np.pi * np.asarray(ks, float)
        B, n = kap.shape[0], self.n
        i = 1j
        W16, W14, W13 = self.wk(kap, 6), self.wk(kap, 4), self.wk(kap, 3)
        W11, W12 = self.wk(kap, 1), self.wk(kap, 2)
        kw = np.einsum("bkj,j->bk", W13, self.w)      # kappa ^ omega
        ksw = np.einsum("bkj,j->bk", W14, self.sw)    # kappa ^ *omega

        # metric rows / columns
        E1_w = i * W16 @ self.R_w33
        E2_w = i * W14 @ self.SJ
        E2_p = 4 * i * ksw[..., None]
        T_w = -i * np.einsum("kl,blj->bkj", self.S4, W13)            # T_dot from omega_dot
        T_p = -4 * i * np.einsum("kl,bl->bk", self.S4, kw)[..., None]
        E3_w = i * W13 @ T_w
        E3_p = i * W13 @ T_p
        # instanton
        dth = np.einsum("Bkj,ac->Bkajc", W11, np.eye(n)).reshape(B, 21 * n, 7 * n) * i + self.adA
        E4_t = self.R_sw42 @ dth
        # gauge action
        P_wV = i * W12 @ self.iota_w
        P_tr = i * np.einsum("bj,ac->bjac", kap, np.eye(n)).reshape(B, 7 * n, n) + self.adA0

        cols, rows, gauge = self.labels()
        cdim = [d for _, d in cols]
        rdim = [d for _, d in rows]
        gdim = [d for _, d in gauge]
        L = np.zeros((B, sum(rdim), sum(cdim)), complex)
        P = np.zeros((B, sum(cdim), sum(gdim)), complex)
        ro = np.cumsum([0] + rdim)
        co = np.cumsum([0] + cdim)
        go = np.cumsum([0] + gdim)
        if self.which == "instanton-only":
            L[:, :, :] = E4_t
            P[:, :, :] = P_tr
            return L, P
        L[:, ro[0]:ro[1], 0:35] = E1_w
        L[:, ro[1]:ro[2], 0:35] = E2_w
        L[:, ro[1]:ro[2], 35:36] = E2_p
        P[:, 0:35, 0:7] = P_wV
        if self.which == "genKS":
            L[:, ro[2]:ro[3], 0:35] = T_w
            L[:, ro[2]:ro[3], 35:36] = T_p
            L[:, ro[2]:ro[3], co[3]:co[4]] = -i * W12
            P[:, co[3]:co[4], go[2]:go[3]] = i * W11
        else:
            L[:, ro[2]:ro[3], 0:35] = E3_w
            L[:, ro[2]:ro[3], 35:36] = E3_p
        if self.which == "metric-only":
            return L, P
        L[:, ro[3]:ro[4], co[2]:co[3]] = E4_t
        P[:, co[2]:co[3], go[1]:go[2]] = P_tr
        return L, P

    def tdot(self, ks: np.ndarray) -> np.ndarray:
        """Matrix of (omega_dot, phi_dot, theta_dot) -> T_dot - 2 c(theta_dot, F) (F = 0 here)."""
        kap = 2 * np.pi * np.asarray(ks, float)
        B = kap.shape[0]
        W13 = self.wk(kap, 3)
        kw = np.einsum("bkj,j->bk", W13, self.w)
        out = np.zeros((B, 35, 36 + 7 * self.n), complex)
        out[:, :, :35] = -1j * np.einsum("kl,blj->bkj", self.S4, W13)
        out[:, :, 35] = -4j * np.einsum("kl,bl->bk", self.S4, kw)
        return out


def _block(base: BasePoint, k, which: str) -> BlockOperator:
    asm = _Assembler(base, which)
    L, P = asm(np.asarray([k]))
    cols, rows, gauge = asm.labels()
    return BlockOperator(tuple(int(x) for x in k), P[0], L[0], cols, rows, gauge)


def assemble_KS_block(base: BasePoint, k) -> BlockOperator:
    return _block(base, k, "KS")


def assemble_genKS_block(base: BasePoint, k) -> BlockOperator:
    return _block(base, k, "genKS")


def assemble_block(base: BasePoint, k, which: str = "KS") -> BlockOperator:
    return _block(base, k, which)


def wavevectors(K: int) -> np.ndarray:
    return np.array(list(itertools.product(range(-K, K + 1), repeat=DIM)), dtype=np.int64)


@dataclass
class CohomologyResult:
    which: str
    cutoff: int
    wavevectors: np.ndarray
    kernel_dims: np.ndarray
    image_ranks: np.ndarray
    containment_angles: np.ndarray
    complex_residuals: np.ndarray
    harmonic_basis: np.ndarray  # rows: kernel representatives at k = 0, complementary to im P_0

    @property
    def defects(self) -> np.ndarray:
        return self.kernel_dims - self.image_ranks

    @property
    def total_H1(self) -> int:
        return int(self.defects.sum())

    @property
    def per_mode(self) -> list:
        return [(tuple(int(x) for x in k), int(a), int(b), int(a - b))
                for k, a, b in zip(self.wavevectors, self.kernel_dims, self.image_ranks)]

    @property
    def max_containment_angle(self) -> float:
        return float(self.containment_angles.max(initial=0.0))

    @property
    def max_complex_residual(self) -> float:
        return float(self.complex_residuals.max(initial=0.0))

    def to_dict(self) -> dict:
        d = self.defects
        nz = np.nonzero(d)[0]
        return {
            "complex": self.which,
            "cutoff": self.cutoff,
            "modes": int(len(d)),
            "total_H1": self.total_H1,
            "min_defect": int(d.min()),
            "max_containment_angle": self.max_containment_angle,
            "max_complex_residual": self.max_complex_residual,
            "nonzero_defect_modes": [
                {"k": [int(x) for x in self.wavevectors[j]], "kernel_dim": int(self.kernel_dims[j]),
                 "image_rank": int(self.image_ranks[j]), "defect": int(d[j])} for j in nz],
        }


def _batch_ranks(M: np.ndarray, tol: float):
    """Singular values and right singular vectors of a batch; ranks use tol * sigma_max per matrix."""
    if M.shape[1] == 0 or M.shape[2] == 0:
        B = M.shape[0]
        return np.zeros(B, int), None, None
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    smax = s[:, :1]
    r = np.where(smax[:, 0] > 0, (s > tol * smax).sum(axis=1), 0)
    return r, s, vh


def cohomology_dimension(base: BasePoint, cutoff: int, which: str = "KS",
                         rank_tol: float = RANK_TOL, chunk: int = 1024) -> CohomologyResult:
    """Sum of per-mode defects dim ker L_k - rank P_k over |k|_inf <= cutoff."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    asm = _Assembler(base, which)
    ks = wavevectors(cutoff)
    M = len(ks)
    kdim = np.zeros(M, int)
    prank = np.zeros(M, int)
    angle = np.zeros(M)
    cres = np.zeros(M)
    harmonic = None
    for start in range(0, M, chunk):
        kb = ks[start:start + chunk]
        L, P = asm(kb)
        rL, _, vhL = _batch_ranks(L, rank_tol)
        _, sP, _ = np.linalg.svd(P, full_matrices=False) if P.size else (None, None, None)
        ncol = L.shape[2]
        kdim[start:start + len(kb)] = ncol - rL
        if P.shape[2]:
            smaxP = sP[:, :1]
            prank[start:start + len(kb)] = np.where(smaxP[:, 0] > 0, (sP > rank_tol * smaxP).sum(1), 0)
        nL = np.linalg.norm(L, 2, axis=(1, 2)) if L.size else np.zeros(len(kb))
        nP = np.linalg.norm(P, 2, axis=(1, 2)) if P.size else np.zeros(len(kb))
        LP = np.linalg.norm(L @ P, 2, axis=(1, 2)) if L.size and P.size else np.zeros(len(kb))
        with np.errstate(invalid="ignore", divide="ignore"):
            cres[start:start + len(kb)] = np.where(nL * nP > 0, LP / np.where(nL * nP > 0, nL * nP, 1), 0)
        # containment angle of im P_k in ker L_k, grouped by rank pattern
        pr = prank[start:start + len(kb)]
        if P.shape[2] and vhL is not None:
            for a, b in set(zip(rL.tolist(), pr.tolist())):
                if b == 0 or a == 0:
                    continue
                sel = np.nonzero((rL == a) & (pr == b))[0]
                U = np.linalg.svd(P[sel], full_matrices=False)[0][:, :, :b]
                proj = vhL[sel, :a, :] @ U
                angle[start + sel] = np.arcsin(np.minimum(1.0, np.linalg.norm(proj, 2, axis=(1, 2))))
        zero = np.nonzero(~kb.any(axis=1))[0]
        if zero.size:
            j = zero[0]
            harmonic = _harmonic_rows(L[j], P[j], rank_tol)
    return CohomologyResult(which, cutoff, ks, kdim, prank, angle, cres, harmonic)


def _harmonic_rows(L: np.ndarray, P: np.ndarray, tol: float) -> np.ndarray:
    from .linalg import kernel_basis, range_basis
    K = kernel_basis(L, tol) if L.size else np.eye(L.shape[1])
    Q = range_basis(P, tol) if P.size else np.zeros((L.shape[1], 0))
    comp = K - Q @ (Q.conj().T @ K)
    B = range_basis(comp, tol) if comp.size else comp
    return np.real_if_close(B.T, tol=1e6)


def flux_map(base: BasePoint, element, tol: float = 1e-9) -> np.ndarray:
    """H^3 class (35 reals, the k = 0 coefficient) of T_dot - 2 c(theta_dot, F).

    ``element`` is a KS-domain vector (constant deformation) or a dict {k: vector}.
    """
    modes = element if isinstance(element, dict) else {(0,) * DIM: element}
    asm = _Assembler(base, "KS")
    out = np.zeros(35)
    for k, x in modes.items():
        x = np.asarray(x, complex)
        L, _ = asm(np.asarray([k]))
        nL = np.linalg.norm(L[0], 2)
        res = np.linalg.norm(L[0] @ x)
        if res > tol * max(1.0, nL * np.linalg.norm(x)):
            raise NotInKernelError(f"mode {tuple(k)}: |L x| = {res:.3e}")
        if not any(k):
            out += (asm.tdot(np.asarray([k]))[0] @ x).real
    return out


def gauge_image(base: BasePoint, k, gauge_vector, which: str = "KS") -> np.ndarray:
    """P_k applied to a gauge parameter (V, r[, xi])."""
    return _block(base, k, which).P_block @ np.asarray(gauge_vector, complex)


def deformation_fields(base: BasePoint, modes: dict) -> dict:
    """Export a per-mode KS (or genKS) deformation as FourierFields."""
    n = base.n
    K = max((max(map(abs, k)) for k in modes), default=0)
    split = {"omega_dot": {}, "phi_dot": {}, "theta_dot": {}, "b": {}}
    for k, x in modes.items():
        x = np.asarray(x, complex)
        split["omega_dot"][k] = x[:35]
        split["phi_dot"][k] = x[35:36]
        split["theta_dot"][k] = x[36:36 + 7 * n].reshape(7, n)
        if len(x) > 36 + 7 * n:
            split["b"][k] = x[36 + 7 * n:]
    out = {
        "omega_dot": FourierField(3, K, split["omega_dot"]),
        "phi_dot": FourierField(0, K, split["phi_dot"]),
    }
    if n:
        out["theta_dot"] = FourierField(1, K, split["theta_dot"], base.bundle)
    if split["b"]:
        out["b"] = FourierField(2, K, split["b"])
    return out
