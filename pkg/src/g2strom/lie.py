"""Finite-dimensional Lie algebras with an invariant pairing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LieAlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LieAlgebraConfig:
    """Lie algebra given by structure constants ``f[a, b, c]`` with [T_a, T_b] = f[a, b, c] T_c.

    ``pairing`` is the matrix of c(T_a, T_b).  Jacobi, antisymmetry and
    ad-invariance are checked on construction; nondegeneracy is not, since a
    degenerate pairing is a legitimate (rejectable) input for the Courant layer.
    """

    name: str
    structure_constants: np.ndarray
    pairing: np.ndarray
    alpha_prime: float = 1.0

    def __post_init__(self):
        f = np.asarray(self.structure_constants, dtype=float)
        c = np.asarray(self.pairing, dtype=float)
        n = f.shape[0] if f.ndim == 3 else -1
        if f.shape != (n, n, n) or c.shape != (n, n):
            raise LieAlgebraError("structure constants must be (n, n, n) and pairing (n, n)")
        object.__setattr__(self, "structure_constants", f)
        object.__setattr__(self, "pairing", c)
        if n == 0:
            return
        scale = max(1.0, np.abs(f).max())
        if np.abs(f + f.transpose(1, 0, 2)).max() > 1e-12 * scale:
            raise LieAlgebraError("structure constants are not antisymmetric")
        if self.jacobi_residual() > 1e-12 * scale**2:
            raise LieAlgebraError(f"Jacobi identity fails (residual {self.jacobi_residual():.3g})")
        if np.abs(c - c.T).max() > 1e-12 * max(1.0, np.abs(c).max()):
            raise LieAlgebraError("pairing is not symmetric")
        if self.invariance_residual() > 1e-12 * scale * max(1.0, np.abs(c).max()):
            raise LieAlgebraError("pairing is not ad-invariant")

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    def jacobi_residual(self) -> float:
        f = self.structure_constants
        # [[a,b],c] + [[b,c],a] + [[c,a],b]
        ff = np.einsum("abd,dce->abce", f, f)
        jac = ff + ff.transpose(1, 2, 0, 3) + ff.transpose(2, 0, 1, 3)
        return float(np.abs(jac).max()) if f.size else 0.0

    def invariance_residual(self) -> float:
        """max |c([x,y],z) + c(y,[x,z])| over basis triples."""
        f, c = self.structure_constants, self.pairing
        t = np.einsum("abd,dc->abc", f, c)
        r = t + t.transpose(0, 2, 1)
        return float(np.abs(r).max()) if f.size else 0.0

    def is_nondegenerate(self, tol: float = 1e-12) -> bool:
        if self.dim == 0:
            return True
        s = np.linalg.svd(self.pairing, compute_uv=False)
        return bool(s.min() > tol * max(1.0, s.max()))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[x, y] on arrays whose last axis is the Lie index."""
        return np.einsum("...a,...b,abc->...c", x, y, self.structure_constants)

    def ad_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> [x, y]."""
        return np.einsum("a,abc->cb", np.asarray(x), self.structure_constants)

    def c(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("...a,ab,...b->...", x, self.pairing, y)


def trivial() -> LieAlgebraConfig:
    return LieAlgebraConfig("trivial", np.zeros((0, 0, 0)), np.zeros((0, 0)))


def su2(alpha_prime: float = 1.0) -> LieAlgebraConfig:
    """su(2) in the basis T_a = -(i/2) sigma_a, so [T_a, T_b] = eps_abc T_c.

    The pairing is c = -2 alpha' tr in the fundamental representation, which
    is alpha' times the identity in this basis.
    """
    eps = np.zeros((3, 3, 3))
    for a, b, c_ in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        eps[a, b, c_], eps[b, a, c_] = 1.0, -1.0
    sig = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
    T = -0.5j * sig
    pairing = -2.0 * alpha_prime * np.einsum("aij,bji->ab", T, T).real
    return LieAlgebraConfig("su2", eps, pairing, alpha_prime)


def u1(alpha_prime: float = 1.0) -> LieAlgebraConfig:
    """u(1) paired by its Killing form, which vanishes identically (degenerate)."""
    f = np.zeros((1, 1, 1))
    killing = np.einsum("acd,bdc->ab", f, f)
    return LieAlgebraConfig("u1", f, 2.0 * alpha_prime * -killing, alpha_prime)


def by_name(name: str, alpha_prime: float = 1.0) -> LieAlgebraConfig:
    try:
        factory = {"trivial": trivial, "su2": su2, "u1": u1}[name]
    except KeyError:
        raise LieAlgebraError(f"unknown Lie algebra {name!r}") from None
    return factory() if name == "trivial" else factory(alpha_prime)
