"""JSON serialization of Fourier fields.

Format::

    {"degree": 3, "cutoff": 1, "lie": null | {"name": "su2"},
     "coeffs": [{"k": [7 ints], "terms": [{"idx": [1-based ints], "re": x, "im": y,
                                          "lie": [floats]?}]}]}

For Lie-valued fields ``lie`` lists the components along the basis of the algebra
and the complex factor ``re + i im`` multiplies them.  Errors carry a JSON pointer.
"""
from __future__ import annotations

import json
from math import comb
from pathlib import Path

import numpy as np

from .exterior import DIM, basis, basis_index, perm_sign
from .lie import LieAlgebraError, by_name
from .torus import ConnectionField, FourierField

REALITY_TOL = 1e-12


class FieldFormatError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


def _need(obj, key, types, ptr):
    if not isinstance(obj, dict):
        raise FieldFormatError(ptr, "expected an object")
    if key not in obj:
        raise FieldFormatError(f"{ptr}/{key}", "missing")
    v = obj[key]
    if not isinstance(v, types) or isinstance(v, bool):
        raise FieldFormatError(f"{ptr}/{key}", f"wrong type {type(v).__name__}")
    return v


def field_to_json(f: FourierField) -> dict:
    coeffs = []
    idx = basis(f.degree)
    for k in sorted(f.coeffs):
        c = f.coeffs[k]
        terms = []
        for i, row in enumerate(c):
            if not np.any(row):
                continue
            ind = [j + 1 for j in idx[i]]
            if f.lie is None:
                terms.append({"idx": ind, "re": float(row[0].real), "im": float(row[0].imag)})
            else:
                # split into real and imaginary Lie vectors
                for part, (re, im) in (("re", (1.0, 0.0)), ("im", (0.0, 1.0))):
                    vec = row.real if part == "re" else row.imag
                    if np.any(vec):
                        terms.append({"idx": ind, "re": re, "im": im, "lie": [float(x) for x in vec]})
        coeffs.append({"k": list(k), "terms": terms})
    return {"degree": f.degree, "cutoff": f.cutoff,
            "lie": None if f.lie is None else {"name": f.lie.name}, "coeffs": coeffs}


def field_from_json(obj, ptr: str = "", alpha_prime: float = 1.0) -> FourierField:
    deg = _need(obj, "degree", int, ptr)
    if not 0 <= deg <= DIM:
        raise FieldFormatError(f"{ptr}/degree", f"degree {deg} outside 0..7")
    K = _need(obj, "cutoff", int, ptr)
    if K < 0:
        raise FieldFormatError(f"{ptr}/cutoff", "negative cutoff")
    lie = None
    if obj.get("lie") is not None:
        name = _need(obj["lie"], "name", str, f"{ptr}/lie")
        try:
            lie = by_name(name, alpha_prime)
        except (LieAlgebraError, KeyError, ValueError) as exc:
            raise FieldFormatError(f"{ptr}/lie/name", str(exc)) from None
    n = 1 if lie is None else lie.dim
    index = basis_index(deg)
    out = {}
    for j, entry in enumerate(_need(obj, "coeffs", list, ptr)):
        ep = f"{ptr}/coeffs/{j}"
        k = _need(entry, "k", list, ep)
        if len(k) != DIM or not all(isinstance(x, int) and not isinstance(x, bool) for x in k):
            raise FieldFormatError(f"{ep}/k", "expected 7 integers")
        if max(abs(x) for x in k) > K:
            raise FieldFormatError(f"{ep}/k", f"wavevector outside cutoff {K}")
        c = out.setdefault(tuple(k), np.zeros((comb(DIM, deg), n), complex))
        for t, term in enumerate(_need(entry, "terms", list, ep)):
            tp = f"{ep}/terms/{t}"
            ind = _need(term, "idx", list, tp)
            if len(ind) != deg or not all(isinstance(x, int) and 1 <= x <= DIM for x in ind):
                raise FieldFormatError(f"{tp}/idx", f"expected {deg} indices in 1..7")
            if len(set(ind)) != deg:
                continue  # repeated index: the term vanishes
            z = _need(term, "re", (int, float), tp) + 1j * _need(term, "im", (int, float), tp)
            srt = tuple(sorted(x - 1 for x in ind))
            sign = perm_sign([x - 1 for x in ind])
            if lie is None:
                if "lie" in term:
                    raise FieldFormatError(f"{tp}/lie", "Lie components on a scalar-valued field")
                vec = np.ones(1)
            else:
                vec = np.asarray(_need(term, "lie", list, tp), float)
                if vec.shape != (n,):
                    raise FieldFormatError(f"{tp}/lie", f"expected {n} components")
            c[index[srt]] += sign * z * vec
    f = FourierField(deg, K, out, lie)
    bad = f.reality_residual()
    if bad > REALITY_TOL * max(1.0, f.max_abs()):
        raise FieldFormatError(f"{ptr}/coeffs", f"reality constraint violated (residual {bad:.3e})")
    return f


def dumps(f: FourierField) -> str:
    return json.dumps(field_to_json(f), indent=1)


def save_field(f: FourierField, path) -> None:
    Path(path).write_text(dumps(f))


def load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FieldFormatError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FieldFormatError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_field(path, alpha_prime: float = 1.0) -> FourierField:
    return field_from_json(load_json(path), "", alpha_prime)


BUNDLE_KEYS = ("omega", "phi", "theta")


def load_bundle(path, alpha_prime: float = 1.0) -> dict:
    """A file that is either one field, or an object with any of
    "omega", "phi", "theta" (connection offset), "H0", "theta0", "b", "a"."""
    obj = load_json(path)
    if isinstance(obj, dict) and "degree" in obj:
        return {"omega": field_from_json(obj, "", alpha_prime)}
    if not isinstance(obj, dict):
        raise FieldFormatError("", "expected an object")
    out = {}
    for key, val in obj.items():
        if key in ("omega", "phi", "H0", "b", "theta", "theta0", "a"):
            out[key] = field_from_json(val, f"/{key}", alpha_prime)
    if not out:
        raise FieldFormatError("", "no recognised fields")
    for key in ("theta", "theta0"):
        if key in out:
            out[key] = ConnectionField(out[key])
    return out


def save_bundle(path, **fields) -> None:
    obj = {}
    for key, f in fields.items():
        if isinstance(f, ConnectionField):
            f = f.a
        obj[key] = field_to_json(f)
    Path(path).write_text(json.dumps(obj, indent=1))
