"""Alternating forms on R^7 with dense coefficient storage.

Basis k-forms e^I are indexed by strictly increasing 0-based tuples I, ordered
lexicographically (``itertools.combinations`` order).  Public constructors take
1-based indices, matching the usual e^{123} notation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

DIM = 7


class DegreeError(ValueError):
    """Raised when a form has the wrong degree for an operation."""


class MetricError(ValueError):
    """Raised for a metric that is not symmetric positive definite."""


@lru_cache(maxsize=None)
def basis(k: int) -> tuple[tuple[int, ...], ...]:
    if not 0 <= k <= DIM:
        raise DegreeError(f"degree {k} outside 0..{DIM}")
    return tuple(itertools.combinations(range(DIM), k))


@lru_cache(maxsize=None)
def basis_index(k: int) -> dict[tuple[int, ...], int]:
    return {I: n for n, I in enumerate(basis(k))}


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    seq = list(seq)
    if len(set(seq)) < len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def wedge_tensor(p: int, q: int) -> np.ndarray:
    """Structure constants W with (a ^ b)_K = W[K, I, J] a_I b_J."""
    if p + q > DIM:
        raise DegreeError(f"wedge of degrees {p}+{q} exceeds {DIM}")
    out = np.zeros((comb(DIM, p + q), comb(DIM, p), comb(DIM, q)))
    idx = basis_index(p + q)
    for i, I in enumerate(basis(p)):
        for j, J in enumerate(basis(q)):
            s = perm_sign(I + J)
            if s:
                out[idx[tuple(sorted(I + J))], i, j] = s
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def interior_tensor(k: int) -> np.ndarray:
    """T with (iota_v a)_J = T[J, m, I] v^m a_I for a of degree k >= 1."""
    if not 1 <= k <= DIM:
        raise DegreeError(f"interior product needs degree 1..{DIM}, got {k}")
    out = np.zeros((comb(DIM, k - 1), DIM, comb(DIM, k)))
    idx = basis_index(k - 1)
    for i, I in enumerate(basis(k)):
        for p, m in enumerate(I):
            out[idx[I[:p] + I[p + 1:]], m, i] = (-1) ** p
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def complement_signs(k: int) -> np.ndarray:
    """Matrix C with C[comp(I), I] = sign(I, comp(I)), mapping Lambda^k -> Lambda^(7-k)."""
    out = np.zeros((comb(DIM, DIM - k), comb(DIM, k)))
    idx = basis_index(DIM - k)
    for i, I in enumerate(basis(k)):
        comp = tuple(m for m in range(DIM) if m not in I)
        out[idx[comp], i] = perm_sign(I + comp)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class KForm:
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (comb(DIM, self.degree),):
            raise DegreeError(
                f"degree-{self.degree} form needs {comb(DIM, self.degree)} coefficients, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, k: int) -> KForm:
        return cls(k, np.zeros(comb(DIM, k)))

    @classmethod
    def from_terms(cls, k: int, terms: dict) -> KForm:
        """Build from ``{(i1, ..., ik): value}`` with 1-based, possibly unsorted indices."""
        c = np.zeros(comb(DIM, k))
        idx = basis_index(k)
        for I, val in terms.items():
            I0 = tuple(i - 1 for i in I)
            if len(I0) != k or any(not 0 <= i < DIM for i in I0):
                raise DegreeError(f"bad multi-index {I} for degree {k}")
            s = perm_sign(I0)
            if s:
                c[idx[tuple(sorted(I0))]] += s * val
        return cls(k, c)

    @classmethod
    def e(cls, *indices: int) -> KForm:
        """The basis monomial e^{i1...ik} (1-based indices)."""
        return cls.from_terms(len(indices), {tuple(indices): 1.0})

    def coeff(self, *indices: int) -> float:
        """Coefficient of e^{i1...ik}; unsorted indices pick up the permutation sign."""
        I0 = tuple(i - 1 for i in indices)
        s = perm_sign(I0)
        if len(I0) != self.degree or not s:
            return 0.0
        return s * self.coeffs[basis_index(self.degree)[tuple(sorted(I0))]]

    def terms(self, tol: float = 0.0) -> dict[tuple[int, ...], float]:
        return {tuple(i + 1 for i in I): float(v)
                for I, v in zip(basis(self.degree), self.coeffs) if abs(v) > tol}

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def _check(self, other: KForm):
        if not isinstance(other, KForm):
            return NotImplemented
        if other.degree != self.degree:
            raise DegreeError(f"cannot combine degrees {self.degree} and {other.degree}")

    def __add__(self, other: KForm) -> KForm:
        self._check(other)
        return KForm(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: KForm) -> KForm:
        self._check(other)
        return KForm(self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> KForm:
        return KForm(self.degree, -self.coeffs)

    def __mul__(self, s: float) -> KForm:
        return KForm(self.degree, s * self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> KForm:
        return KForm(self.degree, self.coeffs / s)

    def __xor__(self, other: KForm) -> KForm:
        return wedge(self, other)

    def __repr__(self) -> str:
        body = " + ".join(f"{v:.6g}*e{''.join(map(str, I))}" for I, v in self.terms(1e-15).items())
        return f"KForm({self.degree}: {body or '0'})"


@dataclass(frozen=True, eq=False)
class MetricData:
    """Constant metric on R^7 together with an orientation sign."""

    gram: np.ndarray
    orientation: int = 1
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float)
        if g.shape != (DIM, DIM) or not np.allclose(g, g.T, atol=1e-12 * max(1.0, np.abs(g).max())):
            raise MetricError("gram must be a symmetric 7x7 matrix")
        if np.linalg.eigvalsh(g).min() <= 0:
            raise MetricError("gram is not positive definite")
        if self.orientation not in (1, -1):
            raise MetricError("orientation must be +1 or -1")
        object.__setattr__(self, "gram", g)

    @classmethod
    def euclidean(cls, orientation: int = 1) -> MetricData:
        return cls(np.eye(DIM), orientation)

    @property
    def inverse(self) -> np.ndarray:
        if "inv" not in self._cache:
            self._cache["inv"] = np.linalg.inv(self.gram)
        return self._cache["inv"]

    @property
    def sqrt_det(self) -> float:
        return float(np.sqrt(np.linalg.det(self.gram)))

    @property
    def volume_form(self) -> KForm:
        return KForm(DIM, np.array([self.orientation * self.sqrt_det]))

    def form_gram(self, k: int) -> np.ndarray:
        """Gram matrix <e^I, e^J> of the induced inner product on Lambda^k."""
        key = ("gram", k)
        if key not in self._cache:
            ginv = self.inverse
            B = basis(k)
            G = np.ones((len(B), len(B)))
            if k:
                for a, I in enumerate(B):
                    for b, J in enumerate(B):
                        G[a, b] = np.linalg.det(ginv[np.ix_(I, J)])
            self._cache[key] = G
        return self._cache[key]

    def star_matrix(self, k: int) -> np.ndarray:
        """Matrix of the Hodge star Lambda^k -> Lambda^(7-k)."""
        key = ("star", k)
        if key not in self._cache:
            self._cache[key] = self.orientation * self.sqrt_det * complement_signs(k) @ self.form_gram(k)
        return self._cache[key]


EUCLIDEAN = MetricData.euclidean()


def wedge(a: KForm, b: KForm) -> KForm:
    return KForm(a.degree + b.degree, np.einsum("kij,i,j->k", wedge_tensor(a.degree, b.degree), a.coeffs, b.coeffs))


def wedge_matrix(a: KForm | np.ndarray, p: int, q: int) -> np.ndarray:
    """Matrix of b -> a ^ b on Lambda^q, for ``a`` a degree-p form or coefficient vector."""
    c = a.coeffs if isinstance(a, KForm) else np.asarray(a)
    return np.einsum("kij,i->kj", wedge_tensor(p, q), c)


def hodge_star(a: KForm, m: MetricData = EUCLIDEAN) -> KForm:
    return KForm(DIM - a.degree, m.star_matrix(a.degree) @ a.coeffs)


def interior_matrix(v, k: int) -> np.ndarray:
    """Matrix of a -> iota_v a on Lambda^k."""
    return np.einsum("jmi,m->ji", interior_tensor(k), np.asarray(v))


def interior(v, a: KForm) -> KForm:
    if a.degree == 0:
        raise DegreeError("interior product of a 0-form")
    return KForm(a.degree - 1, interior_matrix(v, a.degree) @ a.coeffs)


def inner_product(a: KForm, b: KForm, m: MetricData = EUCLIDEAN) -> float:
    if a.degree != b.degree:
        raise DegreeError(f"inner product of degrees {a.degree} and {b.degree}")
    return float(a.coeffs @ m.form_gram(a.degree) @ b.coeffs)


def sharp(xi: KForm, m: MetricData = EUCLIDEAN) -> np.ndarray:
    if xi.degree != 1:
        raise DegreeError("sharp needs a 1-form")
    return m.inverse @ xi.coeffs


def flat(v, m: MetricData = EUCLIDEAN) -> KForm:
    return KForm(1, m.gram @ np.asarray(v, dtype=float))


def pullback_matrix(A: np.ndarray, k: int) -> np.ndarray:
    """Matrix of alpha -> A^* alpha on Lambda^k for a linear map A of R^7.

    This is the k-th compound matrix of A^T (all k x k minors).
    """
    M = np.asarray(A, dtype=float).T
    B = basis(k)
    out = np.ones((len(B), len(B)))
    if k:
        for a, I in enumerate(B):
            for b, J in enumerate(B):
                out[a, b] = np.linalg.det(M[np.ix_(I, J)])
    return out


def right_wedge_matrix(a: KForm | np.ndarray, p: int, q: int) -> np.ndarray:
    """Matrix of b -> b ^ a on Lambda^q, for ``a`` of degree p."""
    return (-1) ** (p * q) * wedge_matrix(a, p, q)
