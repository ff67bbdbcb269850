"""Fourier-spectral forms on the flat torus T^7 = (R/Z)^7.

A field is a finite sum  sum_k c_k exp(2 pi i k.x)  with k in Z^7, |k|_inf <= cutoff.
Coefficients are stored sparsely as ``{k: array(C(7, degree), n)}`` where ``n`` is
the Lie algebra dimension (1 for ordinary forms).  Linear differential operators
act mode by mode; products and other pointwise maps go through a collocation
grid spanning only the axes along which the operands actually vary.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .exterior import (DIM, DegreeError, KForm, MetricData, interior_tensor, right_wedge_matrix,
                       wedge_matrix, wedge_tensor)
from .g2 import G2Structure, NotPositiveError
from .lie import LieAlgebraConfig

Wavevector = tuple  # 7 ints

_DROP = 1e-15


def _k(k) -> tuple:
    k = tuple(int(x) for x in k)
    if len(k) != DIM:
        raise ValueError(f"wavevector needs {DIM} entries, got {len(k)}")
    return k


def covector(k) -> np.ndarray:
    """Coefficients of 2 pi sum_j k_j e^j."""
    return 2 * np.pi * np.asarray(k, dtype=float)


@dataclass(eq=False)
class FourierField:
    degree: int
    cutoff: int
    coeffs: dict = field(default_factory=dict)
    lie: LieAlgebraConfig | None = None

    def __post_init__(self):
        if not 0 <= self.degree <= DIM:
            raise DegreeError(f"degree {self.degree} outside 0..{DIM}")
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        shape = (comb(DIM, self.degree), self.ncomp)
        clean = {}
        for k, c in self.coeffs.items():
            k = _k(k)
            if max(abs(x) for x in k) > self.cutoff:
                raise ValueError(f"mode {k} outside cutoff {self.cutoff}")
            c = np.asarray(c, dtype=complex).reshape(shape)
            clean[k] = clean.get(k, 0) + c
        self.coeffs = clean

    @property
    def ncomp(self) -> int:
        return 1 if self.lie is None else self.lie.dim

    @property
    def shape(self) -> tuple[int, int]:
        return comb(DIM, self.degree), self.ncomp

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, degree, cutoff=0, lie=None) -> FourierField:
        return cls(degree, cutoff, {}, lie)

    @classmethod
    def constant(cls, value, degree=None, cutoff=0, lie=None) -> FourierField:
        if isinstance(value, KForm):
            degree = value.degree
            value = value.coeffs
        return cls(degree, cutoff, {(0,) * DIM: np.asarray(value)}, lie)

    @classmethod
    def trig(cls, k, cos=None, sin=None, degree=None, cutoff=None, lie=None) -> FourierField:
        """cos(2 pi k.x) * A + sin(2 pi k.x) * B for coefficient arrays (or KForms) A, B."""
        k = _k(k)
        parts = []
        for v in (cos, sin):
            if isinstance(v, KForm):
                degree = v.degree
                v = v.coeffs
            parts.append(v)
        if degree is None:
            raise ValueError("degree needed when coefficients are plain arrays")
        n = 1 if lie is None else lie.dim
        shape = (comb(DIM, degree), n)
        A = np.zeros(shape) if parts[0] is None else np.asarray(parts[0], float).reshape(shape)
        B = np.zeros(shape) if parts[1] is None else np.asarray(parts[1], float).reshape(shape)
        mk = tuple(-x for x in k)
        K = max(abs(x) for x in k) if cutoff is None else cutoff
        if mk == k:
            return cls(degree, K, {k: A}, lie)
        return cls(degree, K, {k: 0.5 * A - 0.5j * B, mk: 0.5 * A + 0.5j * B}, lie)

    def copy_like(self, coeffs, cutoff=None, degree=None) -> FourierField:
        return FourierField(self.degree if degree is None else degree,
                            self.cutoff if cutoff is None else cutoff, coeffs, self.lie)

    # algebra -------------------------------------------------------------
    def _compatible(self, other: FourierField):
        if other.degree != self.degree or other.ncomp != self.ncomp:
            raise DegreeError("fields of different type")

    def __add__(self, other: FourierField) -> FourierField:
        self._compatible(other)
        out = {k: v.copy() for k, v in self.coeffs.items()}
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v.copy()
        return FourierField(self.degree, max(self.cutoff, other.cutoff), out,
                            self.lie if self.lie is not None else other.lie)

    def __neg__(self) -> FourierField:
        return self.copy_like({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: FourierField) -> FourierField:
        return self + (-other)

    def __mul__(self, s) -> FourierField:
        return self.copy_like({k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def map_modes(self, fn, degree=None, lie="same") -> FourierField:
        """Apply ``fn(k, coeff) -> coeff`` to each stored mode."""
        out = {k: fn(k, v) for k, v in self.coeffs.items()}
        return FourierField(self.degree if degree is None else degree, self.cutoff, out,
                            self.lie if lie == "same" else lie)

    def mode(self, k) -> np.ndarray:
        return self.coeffs.get(_k(k), np.zeros(self.shape, complex))

    def mean(self) -> np.ndarray:
        return self.mode((0,) * DIM)

    def truncate(self, cutoff: int) -> FourierField:
        return FourierField(self.degree, cutoff,
                            {k: v for k, v in self.coeffs.items() if max(map(abs, k)) <= cutoff}, self.lie)

    def active_axes(self, tol: float = 0.0) -> tuple[int, ...]:
        axes = set()
        for k, v in self.coeffs.items():
            if np.abs(v).max(initial=0.0) > tol:
                axes.update(a for a in range(DIM) if k[a])
        return tuple(sorted(axes))

    def reality_residual(self) -> float:
        worst = 0.0
        for k, v in self.coeffs.items():
            w = self.mode(tuple(-x for x in k))
            worst = max(worst, float(np.abs(v - w.conj()).max(initial=0.0)))
        return worst

    def is_constant(self, tol: float = 1e-12) -> bool:
        return all(np.abs(v).max(initial=0.0) <= tol for k, v in self.coeffs.items() if any(k))

    def l2_norm(self, metric: MetricData | None = None) -> float:
        """L^2 norm over the unit torus (Parseval), optionally in a constant metric."""
        total = 0.0
        G = None if metric is None else metric.form_gram(self.degree)
        for v in self.coeffs.values():
            if G is None:
                total += float(np.sum(np.abs(v) ** 2))
            else:
                total += float(np.einsum("ia,ij,ja->", v.conj(), G, v).real) * metric.sqrt_det
        return float(np.sqrt(total))

    def max_abs(self) -> float:
        return max((float(np.abs(v).max(initial=0.0)) for v in self.coeffs.values()), default=0.0)

    def lie_component(self, a: int) -> FourierField:
        return FourierField(self.degree, self.cutoff, {k: v[:, a] for k, v in self.coeffs.items()})

    def __repr__(self) -> str:
        lie = "" if self.lie is None else f", lie={self.lie.name}"
        return f"FourierField(degree={self.degree}, cutoff={self.cutoff}, modes={len(self.coeffs)}{lie})"


# linear operators, mode by mode ---------------------------------------------------

def d(f: FourierField) -> FourierField:
    """Exterior derivative: c_k -> (2 pi i k) ^ c_k."""
    if f.degree >= DIM:
        raise DegreeError("d of a 7-form")
    W = wedge_tensor(1, f.degree)
    return f.map_modes(lambda k, c: 1j * np.einsum("kij,i,ja->ka", W, covector(k), c), degree=f.degree + 1)


def star(f: FourierField, metric: MetricData) -> FourierField:
    """Hodge star for a constant metric."""
    S = metric.star_matrix(f.degree)
    return f.map_modes(lambda k, c: S @ c, degree=DIM - f.degree)


def codifferential(f: FourierField, g2: G2Structure | MetricData) -> FourierField:
    """d^* = (-1)^k * d * on k-forms for a constant metric (Delta = d d^* + d^* d >= 0)."""
    if f.degree == 0:
        raise DegreeError("codifferential of a 0-form")
    m = g2.metric if isinstance(g2, G2Structure) else g2
    return (-1) ** f.degree * star(d(star(f, m)), m)


def wedge_const(a: KForm, f: FourierField) -> FourierField:
    """a ^ f for a constant form a."""
    M = wedge_matrix(a, a.degree, f.degree)
    return f.map_modes(lambda k, c: M @ c, degree=a.degree + f.degree)


def l2_inner(f: FourierField, h: FourierField, metric: MetricData | None = None) -> complex:
    """sum_k <f_k, h_k>, conjugate-linear in f."""
    if f.degree != h.degree:
        raise DegreeError("degree mismatch")
    G = np.eye(f.shape[0]) if metric is None else metric.form_gram(f.degree) * metric.sqrt_det
    return complex(sum(np.einsum("ia,ij,ja->", c.conj(), G, h.mode(k)) for k, c in f.coeffs.items()))


def solve_exact_primitive(f: FourierField) -> FourierField:
    """Least-squares g with dg = f (mode by mode); the k = 0 part of f is left unmatched."""
    def solve(k, c):
        if not any(k):
            return np.zeros((comb(DIM, f.degree - 1), c.shape[1]), complex)
        A = 1j * wedge_matrix(covector(k), 1, f.degree - 1)
        return np.linalg.lstsq(A, c, rcond=None)[0]
    return f.map_modes(solve, degree=f.degree - 1)


# collocation ----------------------------------------------------------------------

class Collocation:
    """Uniform grid on the active axes of a set of fields.

    With ``N >= 2 * out_cutoff + 1`` points per axis, products whose mode content
    stays within ``out_cutoff`` are transformed back without aliasing.
    """

    def __init__(self, fields, out_cutoff: int, oversample: int = 1):
        axes = set()
        for f in fields:
            axes.update(f.active_axes())
        self.axes = tuple(sorted(axes))
        kmax = max([out_cutoff] + [f.cutoff for f in fields])
        self.N = oversample * (2 * kmax + 1)
        self.out_cutoff = out_cutoff

    @classmethod
    def fixed(cls, axes, N: int, out_cutoff: int) -> Collocation:
        ctx = cls.__new__(cls)
        ctx.axes, ctx.N, ctx.out_cutoff = tuple(sorted(axes)), N, out_cutoff
        return ctx

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return (self.N,) * len(self.axes)

    def points(self) -> np.ndarray:
        """Grid coordinates (on active axes), shape grid_shape + (7,)."""
        x = np.zeros(self.grid_shape + (DIM,))
        mesh = np.meshgrid(*[np.arange(self.N) / self.N] * len(self.axes), indexing="ij")
        for a, m in zip(self.axes, mesh):
            x[..., a] = m
        return x

    def values(self, f: FourierField) -> np.ndarray:
        """Real grid values, shape grid_shape + f.shape."""
        na = len(self.axes)
        C = np.zeros(self.grid_shape + f.shape, complex)
        for k, c in f.coeffs.items():
            if any(k[a] for a in range(DIM) if a not in self.axes):
                raise ValueError("field varies along an axis outside the collocation grid")
            C[tuple(k[a] % self.N for a in self.axes)] += c
        if na == 0:
            return C.real
        return np.fft.ifftn(C, axes=tuple(range(na)), norm="forward").real

    def derivative_values(self, f: FourierField) -> np.ndarray:
        """Grid values of the partial derivatives, shape grid_shape + (7,) + f.shape."""
        out = np.zeros(self.grid_shape + (DIM,) + f.shape)
        for i in self.axes:
            g = f.map_modes(lambda k, c, i=i: 2j * np.pi * k[i] * c)
            out[..., i, :, :] = self.values(g)
        return out

    def field(self, values: np.ndarray, degree: int, lie=None, cutoff: int | None = None) -> FourierField:
        K = self.out_cutoff if cutoff is None else cutoff
        na = len(self.axes)
        if 2 * K + 1 > self.N and na:
            raise ValueError("output cutoff exceeds grid resolution")
        n = 1 if lie is None else lie.dim
        values = np.asarray(values).reshape(self.grid_shape + (comb(DIM, degree), n))
        if na == 0:
            return FourierField(degree, K, {(0,) * DIM: values}, lie)
        C = np.fft.fftn(values, axes=tuple(range(na)), norm="forward")
        scale = max(np.abs(C).max(initial=0.0), 1.0)
        out = {}
        for kk in itertools.product(range(-K, K + 1), repeat=na):
            c = C[tuple(x % self.N for x in kk)]
            if np.abs(c).max(initial=0.0) > _DROP * scale:
                k = [0] * DIM
                for a, x in zip(self.axes, kk):
                    k[a] = x
                out[tuple(k)] = c
        return FourierField(degree, K, out, lie)


# pointwise products (exact for trigonometric polynomials) ------------------------------

def _lie_mode(a: FourierField, b: FourierField, mode: str) -> tuple:
    la, lb = a.lie, b.lie
    if mode == "plain":
        if la is not None and lb is not None:
            raise ValueError("plain wedge of two Lie-valued fields; use mode='pair' or 'bracket'")
        return la if la is not None else lb
    if la is None or lb is None:
        raise ValueError(f"mode {mode!r} needs two Lie-valued fields")
    return None if mode == "pair" else la


def pointwise_wedge(va: np.ndarray, vb: np.ndarray, p: int, q: int, mode: str = "plain",
                    lie: LieAlgebraConfig | None = None) -> np.ndarray:
    W = wedge_tensor(p, q)
    if mode == "plain":
        return np.einsum("kij,...ia,...jb->...kab", W, va, vb).reshape(va.shape[:-2] + (W.shape[0], -1))
    if mode == "pair":
        return np.einsum("kij,...ia,ab,...jb->...k", W, va, lie.pairing, vb)[..., None]
    return np.einsum("kij,...ia,...jb,abc->...kc", W, va, vb, lie.structure_constants)


def wedge_fields(a: FourierField, b: FourierField, mode: str = "plain") -> FourierField:
    """a ^ b.  ``mode``: 'plain' (at most one Lie-valued factor), 'pair' (c(a ^ b)),
    'bracket' ([a ^ b])."""
    lie = _lie_mode(a, b, mode)
    ctx = Collocation([a, b], a.cutoff + b.cutoff)
    if a.degree + b.degree > DIM:
        raise DegreeError("wedge degree exceeds 7")
    v = pointwise_wedge(ctx.values(a), ctx.values(b), a.degree, b.degree, mode, a.lie or b.lie)
    return ctx.field(v, a.degree + b.degree, lie)


def interior_field(X: FourierField, f: FourierField) -> FourierField:
    """iota_X f for a vector field X stored as a degree-1 field of components X^i."""
    if f.degree == 0:
        raise DegreeError("interior product of a 0-form")
    ctx = Collocation([X, f], X.cutoff + f.cutoff)
    v = np.einsum("jmi,...m,...ia->...ja", interior_tensor(f.degree), ctx.values(X)[..., 0], ctx.values(f))
    return ctx.field(v, f.degree - 1, f.lie)


def multiply(s: FourierField, f: FourierField) -> FourierField:
    """Product of a scalar function (degree 0, not Lie-valued) with a field."""
    if s.degree != 0 or s.lie is not None:
        raise DegreeError("multiplier must be a plain function")
    ctx = Collocation([s, f], s.cutoff + f.cutoff)
    return ctx.field(ctx.values(s)[..., 0, 0, None, None] * ctx.values(f), f.degree, f.lie)


def apply_function(fn, s: FourierField, cutoff: int, oversample: int = 2) -> FourierField:
    """fn applied pointwise to a scalar field, truncated to ``cutoff`` modes."""
    ctx = Collocation([s], cutoff, oversample)
    return ctx.field(fn(ctx.values(s)), s.degree, s.lie)


# pointwise G2 geometry ---------------------------------------------------------------

class PointwiseG2:
    """G2 structures of a (possibly non-constant) 3-form field at the grid points."""

    def __init__(self, omega: FourierField, ctx: Collocation):
        if omega.degree != 3 or omega.lie is not None:
            raise DegreeError("omega must be a plain 3-form field")
        self.ctx = ctx
        vals = ctx.values(omega)[..., 0]
        self.structs = np.empty(ctx.grid_shape, dtype=object)
        cache = {}
        for idx in np.ndindex(*ctx.grid_shape):
            key = np.round(vals[idx], 14).tobytes()
            if key not in cache:
                try:
                    cache[key] = G2Structure.from_form(KForm(3, vals[idx]))
                except NotPositiveError as exc:
                    x = ctx.points()[idx]
                    raise NotPositiveError(f"omega not positive at x = {np.round(x, 6).tolist()}: {exc}") from None
            self.structs[idx] = cache[key]

    def apply(self, build, values: np.ndarray) -> np.ndarray:
        """values[idx] -> build(structure) @ values[idx] at every grid point."""
        out = None
        for idx in np.ndindex(*self.ctx.grid_shape):
            r = build(self.structs[idx]) @ values[idx]
            if out is None:
                out = np.zeros(self.ctx.grid_shape + r.shape)
            out[idx] = r
        return out

    def star(self, values: np.ndarray, degree: int) -> np.ndarray:
        return self.apply(lambda s: s.metric.star_matrix(degree), values)

    def density(self) -> np.ndarray:
        return np.vectorize(lambda s: s.metric.sqrt_det, otypes=[float])(self.structs)

    def norm(self, values: np.ndarray, degree: int) -> float:
        """L^2 norm of grid values in the pointwise metric and volume."""
        sq = np.zeros(self.ctx.grid_shape)
        for idx in np.ndindex(*self.ctx.grid_shape):
            m = self.structs[idx].metric
            v = values[idx]
            sq[idx] = np.einsum("ia,ij,ja->", v, m.form_gram(degree), v) * m.sqrt_det
        return float(np.sqrt(sq.mean()))


def pointwise_star(f: FourierField, omega: FourierField, cutoff: int | None = None,
                   oversample: int = 2) -> FourierField:
    """Hodge star of f in the metric of the (possibly non-constant) positive 3-form omega."""
    K = omega.cutoff + f.cutoff if cutoff is None else cutoff
    ctx = Collocation([f, omega], K, oversample)
    pw = PointwiseG2(omega, ctx)
    return ctx.field(pw.star(ctx.values(f), f.degree), DIM - f.degree, f.lie)


def _work_cutoff(omega: FourierField, work_cutoff: int | None) -> int:
    return max(2 * omega.cutoff, 2) if work_cutoff is None else work_cutoff


def lee_form(omega: FourierField, work_cutoff: int | None = None) -> FourierField:
    """Lee form theta with pi_7(d*omega) = theta ^ *omega (so theta = -4 d phi on solutions)."""
    K = _work_cutoff(omega, work_cutoff)
    dso = d(pointwise_star(omega, omega, K))
    ctx = Collocation([dso, omega], K, 2)
    pw = PointwiseG2(omega, ctx)
    return ctx.field(_lee_values(pw, ctx.values(dso)), 1)


def _lee_values(pw: PointwiseG2, dso_vals: np.ndarray) -> np.ndarray:
    def solve(s: G2Structure):
        A = right_wedge_matrix(s.star_omega, 4, 1)
        G5 = s.metric.form_gram(5)
        return np.linalg.solve(A.T @ G5 @ A, A.T @ G5)
    return pw.apply(solve, dso_vals)


@dataclass
class TorsionResult:
    H: FourierField
    line1_residual: float
    line1_holds: bool


def torsion_H(omega: FourierField, phi: FourierField, work_cutoff: int | None = None,
              tol: float = 1e-9) -> TorsionResult:
    """H = -*(d omega + 4 d phi ^ omega) with the star of omega; flags whether the
    first-line equations (d omega ^ omega = 0, d*omega = -4 d phi ^ *omega) hold."""
    K = max(_work_cutoff(omega, work_cutoff), phi.cutoff + omega.cutoff)
    inner = d(omega) + 4.0 * wedge_fields(d(phi), omega)
    H = -pointwise_star(inner, omega, K)
    E1, E2 = _first_line(omega, phi, K)
    res = max(E1.l2_norm(), E2.l2_norm())
    return TorsionResult(H.truncate(K), res, res <= tol)


def _first_line(omega, phi, K):
    E1 = wedge_fields(d(omega), omega)
    so = pointwise_star(omega, omega, K)
    E2 = d(so) + 4.0 * wedge_fields(d(phi), so)
    return E1, E2


@dataclass
class ClassReport:
    norms: dict
    flags: dict
    verdict: str
    lee_form: FourierField
    dilaton: FourierField

    def to_dict(self) -> dict:
        return {"norms": self.norms, "flags": self.flags, "verdict": self.verdict}


def fernandez_gray(omega: FourierField, tol: float = 1e-8, work_cutoff: int | None = None) -> ClassReport:
    """Type components of d omega (Lambda^4_{1,7,27}) and d*omega (Lambda^5_{7,14}), plus verdicts."""
    K = _work_cutoff(omega, work_cutoff)
    dw = d(omega)
    dso = d(pointwise_star(omega, omega, K))
    ctx = Collocation([dw, dso, omega], K, 2)
    pw = PointwiseG2(omega, ctx)
    vdw, vdso = ctx.values(dw), ctx.values(dso)
    norms = {}
    for lab in (1, 7, 27):
        norms[f"d_omega_{lab}"] = pw.norm(pw.apply(lambda s, lab=lab: s.projector(4, lab), vdw), 4)
    for lab in (7, 14):
        norms[f"d_star_omega_{lab}"] = pw.norm(pw.apply(lambda s, lab=lab: s.projector(5, lab), vdso), 5)
    theta = ctx.field(_lee_values(pw, vdso), 1)
    phi = -0.25 * solve_exact_primitive(theta)
    exact_defect = (theta + 4.0 * d(phi)).l2_norm()
    so = pointwise_star(omega, omega, K)
    coclosure = (dso + 4.0 * wedge_fields(d(phi), so)).truncate(K).l2_norm()
    wedge_res = wedge_fields(dw, omega).l2_norm()
    scale = max(1.0, omega.l2_norm())
    small = lambda x: x <= tol * scale
    flags = {
        "torsion_free": all(small(v) for v in norms.values()),
        "cocalibrated": small(norms["d_star_omega_7"]) and small(norms["d_star_omega_14"]),
        "conformally_coclosed": small(coclosure) and small(exact_defect),
        "cocalibrated_w3": small(wedge_res) and small(coclosure) and small(exact_defect),
    }
    if flags["torsion_free"]:
        verdict = "torsion-free"
    elif flags["cocalibrated"]:
        verdict = "cocalibrated"
    elif flags["cocalibrated_w3"] and not small(norms["d_omega_27"]):
        verdict = "cocalibrated of type W3"
    elif flags["conformally_coclosed"]:
        verdict = "conformally co-closed"
    else:
        verdict = "none"
    norms.update(lee_exactness_defect=exact_defect, coclosure_residual=coclosure, d_omega_wedge_omega=wedge_res)
    return ClassReport(norms, flags, verdict, theta, phi)


# connections -------------------------------------------------------------------------

@dataclass(eq=False)
class ConnectionField:
    """theta = theta_0 + a on the trivial bundle.

    ``background_curvature`` is a constant Lie-valued 2-form F_0 of theta_0
    (None for the product flat connection); ``a`` must then commute with it.
    """

    a: FourierField
    background_curvature: np.ndarray | None = None

    def __post_init__(self):
        if self.a.degree != 1 or self.a.lie is None:
            raise DegreeError("connection offset must be a Lie-valued 1-form")
        if self.background_curvature is not None:
            F0 = np.asarray(self.background_curvature, float).reshape(21, self.lie.dim)
            self.background_curvature = F0
            ad = np.einsum("ka,abc->kbc", F0, self.lie.structure_constants)
            for c in self.a.coeffs.values():
                if np.abs(np.einsum("kbc,ib->kic", ad, c)).max() > 1e-12:
                    raise ValueError("offset does not commute with the background curvature")

    @property
    def base_flat(self) -> bool:
        return self.background_curvature is None or not np.any(self.background_curvature)

    @property
    def lie(self) -> LieAlgebraConfig:
        return self.a.lie

    @classmethod
    def flat(cls, lie: LieAlgebraConfig, cutoff: int = 0) -> ConnectionField:
        return cls(FourierField.zero(1, cutoff, lie))


def curvature(theta: ConnectionField) -> FourierField:
    """F = F_0 + d a + 1/2 [a ^ a]."""
    a = theta.a
    F = d(a) + 0.5 * wedge_fields(a, a, "bracket")
    if not theta.base_flat:
        F = F + FourierField(2, 0, {(0,) * DIM: theta.background_curvature}, a.lie)
    return F


def covariant_d(theta: ConnectionField, f: FourierField) -> FourierField:
    """d^theta f = d f + [a ^ f] for Lie-valued f."""
    return d(f) + wedge_fields(theta.a, f, "bracket")


def bianchi_residual_connection(theta: ConnectionField) -> float:
    F = curvature(theta)
    return covariant_d(theta, F).l2_norm()


@dataclass
class StromingerResidual:
    E1: FourierField
    E2: FourierField
    E3: FourierField
    E4: FourierField
    pontryagin_mean: np.ndarray
    solvable: bool

    def norms(self) -> dict:
        return {f"E{i}": getattr(self, f"E{i}").l2_norm() for i in range(1, 5)}

    def max_norm(self) -> float:
        return max(self.norms().values())


def strominger_residual(omega: FourierField, phi: FourierField, theta: ConnectionField,
                        lie: LieAlgebraConfig | None = None, work_cutoff: int | None = None,
                        tol: float = 1e-10) -> StromingerResidual:
    """The four equations: d omega ^ omega, d*omega + 4 d phi ^ *omega,
    -d*(d omega + 4 d phi ^ omega) - c(F ^ F), F ^ *omega."""
    lie = theta.lie if lie is None else lie
    F = curvature(theta)
    K = max(_work_cutoff(omega, work_cutoff), 2 * F.cutoff, phi.cutoff + omega.cutoff)
    E1, E2 = _first_line(omega, phi, K)
    H = -pointwise_star(d(omega) + 4.0 * wedge_fields(d(phi), omega), omega, K)
    FF = wedge_fields(F, F, "pair")
    E3 = d(H) - FF
    E4 = wedge_fields(F, pointwise_star(omega, omega, K))
    mean = FF.mean()[:, 0]
    return StromingerResidual(E1, E2, E3.truncate(K), E4.truncate(K), mean,
                              bool(np.abs(mean).max(initial=0.0) <= tol))


def random_field(rng: np.random.Generator, degree: int, cutoff: int = 1, axes=(0, 1),
                 lie: LieAlgebraConfig | None = None, scale: float = 1.0) -> FourierField:
    """Real random trigonometric polynomial with modes on the given axes."""
    n = 1 if lie is None else lie.dim
    shape = (comb(DIM, degree), n)
    out = {}
    for kk in itertools.product(range(-cutoff, cutoff + 1), repeat=len(axes)):
        k = [0] * DIM
        for a, x in zip(axes, kk):
            k[a] = x
        k = tuple(k)
        mk = tuple(-x for x in k)
        if k in out:
            continue
        if k == mk:
            out[k] = scale * rng.normal(size=shape).astype(complex)
        else:
            z = scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / 2
            out[k], out[mk] = z, z.conj()
    return FourierField(degree, cutoff, out, lie)
