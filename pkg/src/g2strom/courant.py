"""The transitive Courant algebroid E = T + ad P + T* on the torus.

Sections are triples (X, r, xi) of Fourier fields.  Pairing and Dorfman bracket::

    <X+r+xi, Y+t+eta> = 1/2 (eta(X) + xi(Y)) + c(r, t)

    [X+r+xi, Y+t+eta] = [X, Y]
                      + (-[r, t] - F0(X, Y) + d_X t - d_Y r)
                      + (L_X eta - i_Y d xi + i_Y i_X H0 + 2c(d r, t) + 2c(F0(X, .), t) - 2c(F0(Y, .), r))

with d = d^{theta0}.  The anchor is the projection to T and its dual is the inclusion
of T*.  The axioms hold iff d H0 = c(F0 ^ F0).

Axiom checks run on one collocation grid large enough to hold every product
exactly, so the residuals measure the algebra, not truncation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .exterior import DIM, KForm, basis, perm_sign
from .lie import LieAlgebraConfig, LieAlgebraError
from .torus import (Collocation, ConnectionField, FourierField, PointwiseG2, covariant_d, curvature, d,
                    interior_field, lee_form, pointwise_star, random_field, solve_exact_primitive,
                    wedge_fields)


class SectionError(ValueError):
    pass


def _dense_tensor(p: int) -> np.ndarray:
    """D[I, i1..ip] = sign so that the dense antisymmetric tensor is D[I] * coeff_I."""
    D = np.zeros((comb(DIM, p),) + (DIM,) * p)
    for I, idx in enumerate(basis(p)):
        for perm in itertools.permutations(range(p)):
            D[(I,) + tuple(idx[j] for j in perm)] = perm_sign(perm)
    return D


_D2, _D3 = _dense_tensor(2), _dense_tensor(3)


@dataclass(eq=False)
class CourantSection:
    X: FourierField
    r: FourierField
    xi: FourierField

    def __post_init__(self):
        if self.X.degree != 1 or self.X.lie is not None:
            raise SectionError("X must be a vector field (plain degree-1 components)")
        if self.xi.degree != 1 or self.xi.lie is not None:
            raise SectionError("xi must be a plain 1-form")
        if self.r.degree != 0 or self.r.lie is None:
            raise SectionError("r must be a Lie-valued function")
        K = max(self.X.cutoff, self.r.cutoff, self.xi.cutoff)
        self.X, self.r, self.xi = (f.truncate(K) for f in (self.X, self.r, self.xi))

    @property
    def lie(self) -> LieAlgebraConfig:
        return self.r.lie

    @property
    def cutoff(self) -> int:
        return self.X.cutoff

    @classmethod
    def zero(cls, lie: LieAlgebraConfig, cutoff: int = 0) -> CourantSection:
        return cls(FourierField.zero(1, cutoff), FourierField.zero(0, cutoff, lie), FourierField.zero(1, cutoff))

    def l2_norm(self) -> float:
        return float(np.sqrt(self.X.l2_norm() ** 2 + self.r.l2_norm() ** 2 + self.xi.l2_norm() ** 2))

    def __add__(self, o: CourantSection) -> CourantSection:
        _compatible(self, o)
        return CourantSection(self.X + o.X, self.r + o.r, self.xi + o.xi)

    def __sub__(self, o: CourantSection) -> CourantSection:
        _compatible(self, o)
        return CourantSection(self.X - o.X, self.r - o.r, self.xi - o.xi)

    def max_abs(self) -> float:
        return max(self.X.max_abs(), self.r.max_abs(), self.xi.max_abs())


def _compatible(*sections):
    lies = {s.lie.name for s in sections}
    if len(lies) > 1:
        raise SectionError(f"sections over different Lie algebras: {sorted(lies)}")


@dataclass(eq=False)
class AlgebroidData:
    H0: FourierField
    theta0: ConnectionField
    lie: LieAlgebraConfig

    def __post_init__(self):
        if not self.lie.is_nondegenerate():
            raise LieAlgebraError(f"pairing of {self.lie.name} is degenerate; a Courant algebroid needs a "
                                  "non-degenerate form")
        if self.theta0.lie.name != self.lie.name:
            raise LieAlgebraError("connection and algebroid use different Lie algebras")
        if self.H0.degree != 3 or self.H0.lie is not None:
            raise ValueError("H0 must be a plain 3-form field")
        if not self.theta0.base_flat:
            raise ValueError("constant background curvature is not supported here; encode F0 through a periodic offset")
        self.F0 = curvature(self.theta0)
        self.bianchi_norm = bianchi_residual(self).l2_norm()

    @classmethod
    def flat(cls, lie: LieAlgebraConfig, H0: FourierField | None = None) -> AlgebroidData:
        H0 = FourierField.zero(3) if H0 is None else H0
        return cls(H0, ConnectionField.flat(lie), lie)

    def with_H0(self, H0: FourierField) -> AlgebroidData:
        return AlgebroidData(H0, self.theta0, self.lie)

    def active_axes(self) -> tuple:
        return tuple(sorted(set(self.H0.active_axes()) | set(self.theta0.a.active_axes())))


def bianchi_residual(alg: AlgebroidData) -> FourierField:
    """d H0 - c(F0 ^ F0)."""
    F0 = curvature(alg.theta0)
    return d(alg.H0) - wedge_fields(F0, F0, "pair")


def twisted_example(lie: LieAlgebraConfig, axes=(0, 2), closed_part: float = 0.3) -> AlgebroidData:
    """Non-flat theta0 with d H0 = c(F0 ^ F0) on the two given axes.

    a0 = sin(2 pi x_p) e^q T_1 + sin(2 pi x_s) e^u T_1 has F0 = d a0 and
    c(F0 ^ F0) = 2 (2 pi)^2 c_11 cos cos e^{p q s u}; a matching H0 is
    2 (2 pi) c_11 sin(2 pi x_p) cos(2 pi x_s) e^{q s u}, plus a constant closed part.
    """
    p, s = axes
    q, u = [j for j in range(DIM) if j not in axes][:2]
    T1 = np.zeros(lie.dim)
    T1[0] = 1.0
    def one_form(j):
        return np.outer(KForm.e(j + 1).coeffs, T1)
    kp = tuple(int(j == p) for j in range(DIM))
    ks = tuple(int(j == s) for j in range(DIM))
    a0 = (FourierField.trig(kp, sin=one_form(q), degree=1, lie=lie)
          + FourierField.trig(ks, sin=one_form(u), degree=1, lie=lie))
    c11 = lie.pairing[0, 0]
    A = 2 * (2 * np.pi) * c11
    # sin(2 pi x_p) cos(2 pi x_s) = 1/2 [sin(2 pi (x_p + x_s)) + sin(2 pi (x_p - x_s))]
    kps = tuple(int(j in axes) for j in range(DIM))
    kpm = tuple(1 if j == p else (-1 if j == s else 0) for j in range(DIM))
    e_qsu = KForm.e(q + 1, s + 1, u + 1)
    H0 = (FourierField.trig(kps, sin=0.5 * A * e_qsu.coeffs, degree=3)
          + FourierField.trig(kpm, sin=0.5 * A * e_qsu.coeffs, degree=3))
    rest = [j + 1 for j in range(DIM) if j not in axes]
    H0 = H0 + FourierField.constant(closed_part * KForm.e(*rest[2:5]))
    return AlgebroidData(H0, ConnectionField(a0), lie)


def perturb_bianchi(alg: AlgebroidData, eps: float) -> AlgebroidData:
    """H0 + eps sin(2 pi x_p) e^{abc} with a, b, c off the first active axis p: d of it is nonzero."""
    axes = alg.active_axes() or (0,)
    p = axes[0]
    others = [j + 1 for j in range(DIM) if j != p][-3:]
    k = tuple(int(j == p) for j in range(DIM))
    bump = FourierField.trig(k, sin=KForm.e(*others).coeffs, degree=3)
    return alg.with_H0(alg.H0 + eps * bump)


# grid kernel -------------------------------------------------------------------------

class _GridSection:
    """Grid values of a section with lazily cached derivative data."""

    def __init__(self, grid, X, r, xi):
        self.grid, self.X, self.r, self.xi = grid, X, r, xi
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def dX(self):  # [..., i, j] = d_i X^j
        return self._get("dX", lambda: self.grid.partials(self.X))

    @property
    def Dr(self):  # covariant derivative of r, [..., j, a]
        return self._get("Dr", lambda: self.grid.cov(self.r))

    @property
    def dxi(self):  # (d xi)_{ij} as a dense antisymmetric matrix
        def f():
            p = self.grid.partials(self.xi)
            return p - np.swapaxes(p, -1, -2)
        return self._get("dxi", f)

    @property
    def XF(self):  # (i_X F0)_{j a}
        return self._get("XF", lambda: np.einsum("...i,...ija->...ja", self.X, self.grid.F))

    @property
    def XH(self):  # (i_X H0)_{jk}
        return self._get("XH", lambda: np.einsum("...i,...ijk->...jk", self.X, self.grid.H))

    def parts(self):
        return self.X, self.r, self.xi

    def __sub__(self, o):
        return _GridSection(self.grid, self.X - o.X, self.r - o.r, self.xi - o.xi)

    def __add__(self, o):
        return _GridSection(self.grid, self.X + o.X, self.r + o.r, self.xi + o.xi)

    def scaled(self, fn):
        return _GridSection(self.grid, fn[..., None] * self.X, fn[..., None] * self.r, fn[..., None] * self.xi)

    def linf(self) -> float:
        return _linf(self.parts())


def _vm(v, M):
    """v^i M_{i...} for grid-batched vectors v and matrices M."""
    return np.matmul(v[..., None, :], M)[..., 0, :]


class _Grid:
    def __init__(self, axes, N: int, alg: AlgebroidData):
        self.ctx = Collocation.fixed(axes, N, (N - 1) // 2)
        self.nd = len(self.ctx.axes)
        self.k = np.zeros(self.ctx.grid_shape + (DIM,))
        freqs = np.fft.fftfreq(N, 1.0 / N)
        mesh = np.meshgrid(*[freqs] * self.nd, indexing="ij")
        for a, m in zip(self.ctx.axes, mesh):
            self.k[..., a] = m
        lie = alg.lie
        self.f, self.c = lie.structure_constants, lie.pairing
        self.H = np.einsum("...I,Iijk->...ijk", self.ctx.values(alg.H0)[..., 0], _D3)
        self.a0 = self.ctx.values(alg.theta0.a)
        self.F = np.einsum("...Ia,Iij->...ija", self.ctx.values(alg.F0), _D2)
        self.ad = np.einsum("...ja,abc->...jbc", self.a0, self.f)  # [a0_j, .] as a matrix on g

    def partials(self, v: np.ndarray) -> np.ndarray:
        """v: grid + rest -> grid + (7,) + rest."""
        G = self.nd
        out = np.zeros(v.shape[:G] + (DIM,) + v.shape[G:])
        if G == 0:
            return out
        ax = tuple(range(G))
        vh = np.fft.fftn(v, axes=ax)
        rest = (slice(None),) * (v.ndim - G)
        for i in self.ctx.axes:
            kk = self.k[..., i].reshape(self.k.shape[:-1] + (1,) * (v.ndim - G))
            out[(Ellipsis, i) + rest] = np.fft.ifftn(2j * np.pi * kk * vh, axes=ax).real
        return out

    def section(self, e: CourantSection) -> _GridSection:
        return _GridSection(self, self.ctx.values(e.X)[..., 0], self.ctx.values(e.r)[..., 0, :],
                            self.ctx.values(e.xi)[..., 0])

    def to_section(self, s: _GridSection, lie, cutoff) -> CourantSection:
        ctx = Collocation.fixed(self.ctx.axes, self.ctx.N, cutoff)
        return CourantSection(ctx.field(s.X[..., None], 1), ctx.field(s.r[..., None, :], 0, lie),
                              ctx.field(s.xi[..., None], 1))

    def cov(self, r):
        return self.partials(r) + np.einsum("...b,...jbc->...jc", r, self.ad)

    def bracket(self, e1: _GridSection, e2: _GridSection) -> _GridSection:
        X, r, xi = e1.parts()
        Y, t, eta = e2.parts()
        c = self.c
        vec = _vm(X, e2.dX) - _vm(Y, e1.dX)
        rt = np.einsum("...a,...b,abc->...c", r, t, self.f)
        lie = -rt - _vm(Y, e1.XF) + _vm(X, e2.Dr) - _vm(Y, e1.Dr)
        form = (_vm(X, e2.dxi) + self.partials((eta * X).sum(-1)) - _vm(Y, e1.dxi) + _vm(Y, e1.XH)
                + 2 * np.matmul(e1.Dr @ c, t[..., :, None])[..., 0]
                + 2 * np.matmul(e1.XF @ c, t[..., :, None])[..., 0]
                - 2 * np.matmul(e2.XF @ c, r[..., :, None])[..., 0])
        return _GridSection(self, vec, lie, form)

    def pairing(self, e1: _GridSection, e2: _GridSection):
        return 0.5 * ((e2.xi * e1.X).sum(-1) + (e1.xi * e2.X).sum(-1)) + ((e1.r @ self.c) * e2.r).sum(-1)

    def anchor_derivative(self, e: _GridSection, fn):
        return (e.X * self.partials(fn)).sum(-1)


def _linf(s) -> float:
    if isinstance(s, tuple):
        return max((float(np.abs(x).max(initial=0.0)) for x in s), default=0.0)
    return float(np.abs(s).max(initial=0.0))


def _grid_for(alg: AlgebroidData, sections, functions=()):
    axes = set(alg.active_axes())
    for e in sections:
        for fld in (e.X, e.r, e.xi):
            axes.update(fld.active_axes())
    for fn in functions:
        axes.update(fn.active_axes())
    Ks = max((e.cutoff for e in sections), default=0)
    Kf = max((fn.cutoff for fn in functions), default=0)
    M = max(alg.H0.cutoff, alg.F0.cutoff, alg.theta0.a.cutoff)
    content = 3 * Ks + 2 * M + Kf
    return _Grid(axes, 2 * content + 1, alg)


def pairing(e1: CourantSection, e2: CourantSection) -> FourierField:
    """<e1, e2> as a function."""
    _compatible(e1, e2)
    c = e1.lie.pairing
    ctx = Collocation([e1.X, e1.r, e1.xi, e2.X, e2.r, e2.xi], e1.cutoff + e2.cutoff)
    X, r, xi = ctx.values(e1.X)[..., 0], ctx.values(e1.r)[..., 0, :], ctx.values(e1.xi)[..., 0]
    Y, t, eta = ctx.values(e2.X)[..., 0], ctx.values(e2.r)[..., 0, :], ctx.values(e2.xi)[..., 0]
    v = 0.5 * (np.einsum("...i,...i->...", eta, X) + np.einsum("...i,...i->...", xi, Y)) \
        + np.einsum("...a,ab,...b->...", r, c, t)
    return ctx.field(v[..., None, None], 0)


def dorfman_bracket(e1: CourantSection, e2: CourantSection, alg: AlgebroidData) -> CourantSection:
    _compatible(e1, e2)
    if e1.lie.name != alg.lie.name:
        raise SectionError("sections and algebroid use different Lie algebras")
    grid = _grid_for(alg, [e1, e2])
    M = max(alg.H0.cutoff, alg.F0.cutoff)
    out = grid.bracket(grid.section(e1), grid.section(e2))
    return grid.to_section(out, alg.lie, e1.cutoff + e2.cutoff + M)


def sample_sections(lie: LieAlgebraConfig, count: int = 20, seed: int = 0, axes=(0, 2),
                    cutoff: int = 1, scale: float = 0.5) -> list:
    rng = np.random.default_rng(seed)
    return [CourantSection(random_field(rng, 1, cutoff, axes, None, scale),
                           random_field(rng, 0, cutoff, axes, lie, scale),
                           random_field(rng, 1, cutoff, axes, None, scale)) for _ in range(count)]


@dataclass
class AxiomReport:
    residuals: dict
    bianchi_residual: float
    tol: float
    n_sections: int
    n_triples: int
    section_norm: float

    @property
    def bianchi_ok(self) -> bool:
        return self.bianchi_residual <= self.tol

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.residuals.values())

    def to_dict(self) -> dict:
        return {"residuals": dict(self.residuals), "bianchi_residual": self.bianchi_residual,
                "bianchi_ok": self.bianchi_ok, "tol": self.tol, "n_sections": self.n_sections,
                "n_triples": self.n_triples, "section_norm": self.section_norm, "passed": self.passed}


def check_axioms(alg: AlgebroidData, sections=None, tol: float = 1e-10, seed: int = 0,
                 n_sections: int = 20, functions=None, only=None) -> AxiomReport:
    """L-infinity residuals of D1..D5 over a sample (D1 over unordered triples with repetition)."""
    sections = sample_sections(alg.lie, n_sections, seed, alg.active_axes()[:2] or (0, 2)) \
        if sections is None else list(sections)
    if not sections:
        raise ValueError("empty sample")
    if functions is None:
        rng = np.random.default_rng(seed + 1)
        axes = alg.active_axes()[:2] or (0, 2)
        functions = [random_field(rng, 0, 1, axes, None, 0.5) for _ in range(3)]
    wanted = set(only or ("D1", "D2", "D3", "D4", "D5"))
    grid = _grid_for(alg, sections, functions)
    S = [grid.section(e) for e in sections]
    fns = [grid.ctx.values(fn)[..., 0, 0] for fn in functions]
    n = len(S)
    pairs = {}

    def br(i, j):
        if (i, j) not in pairs:
            pairs[(i, j)] = grid.bracket(S[i], S[j])
        return pairs[(i, j)]

    res = {}
    triples = list(itertools.combinations_with_replacement(range(n), 3))
    if "D1" in wanted:
        worst = 0.0
        for i, j, k in triples:
            r = grid.bracket(S[i], br(j, k)) - grid.bracket(br(i, j), S[k]) - grid.bracket(S[j], br(i, k))
            worst = max(worst, r.linf())
        res["D1"] = worst
    if "D2" in wanted:
        worst = 0.0
        for i, j in itertools.product(range(n), repeat=2):
            X, Y = S[i], S[j]
            lie_xy = _vm(X.X, Y.dX) - _vm(Y.X, X.dX)
            worst = max(worst, _linf(br(i, j).X - lie_xy))
        res["D2"] = worst
    if "D3" in wanted:
        worst = 0.0
        for i, j in itertools.product(range(n), repeat=2):
            for fn in fns:
                lhs = grid.bracket(S[i], S[j].scaled(fn))
                Xf = grid.anchor_derivative(S[i], fn)
                worst = max(worst, (lhs - br(i, j).scaled(fn) - S[j].scaled(Xf)).linf())
        res["D3"] = worst
    if "D4" in wanted:
        worst = 0.0
        for i, j, k in itertools.product(range(n), repeat=3):
            if k < j:
                continue
            lhs = grid.anchor_derivative(S[i], grid.pairing(S[j], S[k]))
            rhs = grid.pairing(br(i, j), S[k]) + grid.pairing(S[j], br(i, k))
            worst = max(worst, _linf(lhs - rhs))
        res["D4"] = worst
    if "D5" in wanted:
        worst = 0.0
        for i in range(n):
            for j in range(i, n):
                sym = br(i, j) + br(j, i)
                dp = 2 * grid.partials(grid.pairing(S[i], S[j]))
                worst = max(worst, _linf((sym.X, sym.r, sym.xi - dp)))
        res["D5"] = worst
    norm = max(e.l2_norm() for e in sections)
    return AxiomReport(res, bianchi_residual(alg).l2_norm(), tol, n, len(triples), norm)


@dataclass
class SweepPoint:
    eps: float
    bianchi_residual: float
    d1_residual: float
    threshold: float


def bianchi_sweep(alg: AlgebroidData, eps_values=(0.0, 0.1, 0.2), seed: int = 0, n_sections: int = 20,
                  tol: float = 1e-10) -> list:
    """D1 residual as H0 is pushed off the Bianchi identity by eps times a non-closed mode."""
    sections = sample_sections(alg.lie, n_sections, seed, alg.active_axes()[:2] or (0, 2))
    out = []
    for eps in eps_values:
        rep = check_axioms(perturb_bianchi(alg, eps), sections, tol, seed, only=("D1",))
        out.append(SweepPoint(float(eps), rep.bianchi_residual, rep.residuals["D1"],
                              1e-3 * eps * rep.section_norm ** 3))
    return out


# generalized metrics -------------------------------------------------------------------

@dataclass(eq=False)
class GeneralizedMetricData:
    """Generalized metric from (g, b, a, phi).

    With the isotropic splitting s(X) = X - i_X a + i_X b - c(i_X a, a), the
    positive subbundle is V+ = {s(X) + g(X)} + {r + 2 c(r, a)} and V- = {s(X) - g(X)}.
    """

    omega: FourierField
    b: FourierField
    a: FourierField
    phi: FourierField
    admissibility: dict = field(default_factory=dict)

    def __post_init__(self):
        self.admissibility = self.check_admissible()
        if not self.admissibility["admissible"]:
            raise ValueError(f"generalized metric not admissible: {self.admissibility}")

    @property
    def lie(self) -> LieAlgebraConfig:
        return self.a.lie

    def subbundles(self, g: np.ndarray, b: np.ndarray, a: np.ndarray):
        """Column bases of V+ and V- in coordinates (X, r, xi) at one point."""
        c = self.lie.pairing
        n = c.shape[0]
        caa = a @ c @ a.T
        Vp = np.zeros((14 + n, 7 + n))
        Vm = np.zeros((14 + n, 7))
        for i in range(DIM):
            for V, sgn, col in ((Vp, 1.0, i), (Vm, -1.0, i)):
                V[i, col] = 1.0
                V[7:7 + n, col] = -a[i]
                V[7 + n:, col] = b[i] - caa[i] + sgn * g[i]
        for j in range(n):
            Vp[7 + j, 7 + j] = 1.0
            Vp[7 + n:, 7 + j] = 2 * (a @ c)[:, j]
        return Vp, Vm

    def pairing_matrix(self) -> np.ndarray:
        n = self.lie.dim
        Q = np.zeros((14 + n, 14 + n))
        Q[:7, 7 + n:] = Q[7 + n:, :7] = 0.5 * np.eye(7)
        Q[7:7 + n, 7:7 + n] = self.lie.pairing
        return Q

    def check_admissible(self, tol: float = 1e-10) -> dict:
        ctx = Collocation([self.omega, self.b, self.a], max(self.omega.cutoff, self.b.cutoff, self.a.cutoff))
        pw = PointwiseG2(self.omega, ctx)
        bv = np.einsum("...I,Iij->...ij", ctx.values(self.b)[..., 0], _D2)
        av = ctx.values(self.a)
        Q = self.pairing_matrix()
        n = self.lie.dim
        worst = {"rank_ok": True, "t_star_intersection": 0, "positive": True, "negative": True, "orthogonal": 0.0}
        for idx in np.ndindex(*ctx.grid_shape):
            g = pw.structs[idx].metric.gram
            Vp, Vm = self.subbundles(g, bv[idx], av[idx])
            rk = np.linalg.matrix_rank(Vp)
            proj = np.linalg.matrix_rank(Vp[:7 + n])
            worst["rank_ok"] &= bool(rk == 7 + n)
            worst["t_star_intersection"] = max(worst["t_star_intersection"], int(rk - proj))
            worst["positive"] &= bool(np.linalg.eigvalsh(Vp.T @ Q @ Vp).min() > 0)
            worst["negative"] &= bool(np.linalg.eigvalsh(Vm.T @ Q @ Vm).max() < 0)
            worst["orthogonal"] = max(worst["orthogonal"], float(np.abs(Vp.T @ Q @ Vm).max()))
        worst["admissible"] = bool(worst["rank_ok"] and worst["t_star_intersection"] == 0 and worst["positive"]
                                   and worst["negative"] and worst["orthogonal"] <= tol)
        return worst


@dataclass
class KillingMatch:
    metric: GeneralizedMetricData
    residual: float
    compatible: bool
    residual_field: FourierField


def strominger_to_killing_data(omega: FourierField, phi: FourierField, theta: ConnectionField,
                               alg: AlgebroidData, tol: float = 1e-10, work_cutoff: int | None = None) -> KillingMatch:
    """Match the torsion -*(d omega - theta_omega ^ omega) against
    H0 + db + 2c(a, F0) + c(a, d a) + 1/3 c(a, [a, a]) with a = theta - theta0,
    solving for b by least squares on exact 3-forms."""
    if theta.lie.name != alg.lie.name:
        raise LieAlgebraError("connection and algebroid use different Lie algebras")
    a = theta.a - alg.theta0.a
    K = max(2 * omega.cutoff, 2) if work_cutoff is None else work_cutoff
    lee = lee_form(omega, K)
    T = -pointwise_star(d(omega) - wedge_fields(lee, omega), omega, K)
    S = (alg.H0 + 2.0 * wedge_fields(a, alg.F0, "pair") + wedge_fields(a, covariant_d(alg.theta0, a), "pair")
         + (1.0 / 3.0) * wedge_fields(a, wedge_fields(a, a, "bracket"), "pair"))
    R = T - S
    b = solve_exact_primitive(R)
    resid = R - d(b)
    norm = resid.l2_norm()
    gm = GeneralizedMetricData(omega, b.truncate(b.cutoff), a, phi)
    return KillingMatch(gm, norm, norm <= tol, resid)


@dataclass
class InnerImage:
    omega_dot: FourierField | None
    phi_dot: FourierField | None
    theta_dot: FourierField
    b_dot: FourierField


def inner_symmetry_image(e: CourantSection, alg: AlgebroidData, H: FourierField, F: FourierField,
                         omega: FourierField | None = None, phi: FourierField | None = None) -> InnerImage:
    """(L_V omega, L_V phi, d r + i_V F, d xi + i_V H - 2 c(r, F)) for e = V + r + xi."""
    if e.lie.name != alg.lie.name or F.lie is None or F.lie.name != alg.lie.name:
        raise SectionError("incompatible Lie algebras")
    V = e.X
    theta_dot = covariant_d(alg.theta0, e.r) + interior_field(V, F)
    b_dot = d(e.xi) + interior_field(V, H) - 2.0 * wedge_fields(e.r, F, "pair")
    om = ph = None
    if omega is not None:
        om = d(interior_field(V, omega)) + interior_field(V, d(omega))
    if phi is not None:
        ph = interior_field(V, d(phi))
    return InnerImage(om, ph, theta_dot, b_dot)
