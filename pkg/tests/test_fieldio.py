import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from g2strom.fieldio import (FieldFormatError, field_from_json, field_to_json, load_bundle, load_field,
                             save_bundle, save_field)
from g2strom.lie import su2
from g2strom.torus import ConnectionField, FourierField, random_field


def scalar_field(terms, k=(0,) * 7, degree=1, cutoff=1):
    return {"degree": degree, "cutoff": cutoff, "lie": None, "coeffs": [{"k": list(k), "terms": terms}]}


@given(st.integers(0, 7), st.integers(0, 2), st.booleans(), st.integers(0, 1000))
def test_round_trip(deg, K, lie_valued, seed):
    f = random_field(np.random.default_rng(seed), deg, cutoff=K, axes=(2, 6), lie=su2() if lie_valued else None)
    g = field_from_json(json.loads(json.dumps(field_to_json(f))))
    assert g.degree == deg and g.cutoff == K and (g.lie is None) != lie_valued
    assert (f - g).max_abs() < 1e-15


def test_unsorted_index_sign():
    f = field_from_json(scalar_field([{"idx": [2, 1], "re": 1.0, "im": 0.0}], degree=2))
    assert f.mean()[0, 0] == -1.0


def test_repeated_index_vanishes():
    f = field_from_json(scalar_field([{"idx": [3, 3], "re": 1.0, "im": 0.0}], degree=2))
    assert f.max_abs() == 0.0


@pytest.mark.parametrize("obj,pointer", [
    ({"cutoff": 1, "coeffs": []}, "/degree"),
    ({"degree": 9, "cutoff": 1, "coeffs": []}, "/degree"),
    ({"degree": 1, "cutoff": -1, "coeffs": []}, "/cutoff"),
    ({"degree": 1, "cutoff": 1, "coeffs": [{"k": [0] * 6, "terms": []}]}, "/coeffs/0/k"),
    ({"degree": 1, "cutoff": 1, "coeffs": [{"k": [2] + [0] * 6, "terms": []}]}, "/coeffs/0/k"),
    (scalar_field([{"idx": [8], "re": 1.0, "im": 0.0}]), "/coeffs/0/terms/0/idx"),
    (scalar_field([{"idx": [1, 2], "re": 1.0, "im": 0.0}]), "/coeffs/0/terms/0/idx"),
    (scalar_field([{"idx": [1], "re": "x", "im": 0.0}]), "/coeffs/0/terms/0/re"),
    (scalar_field([{"idx": [1], "re": 1.0, "im": 0.0}], k=[1] + [0] * 6), "/coeffs"),
    ({"degree": 1, "cutoff": 0, "lie": {"name": "e8"}, "coeffs": []}, "/lie/name"),
])
def test_errors_carry_pointer(obj, pointer):
    with pytest.raises(FieldFormatError) as err:
        field_from_json(obj)
    assert err.value.pointer == pointer


def test_lie_component_count():
    obj = {"degree": 1, "cutoff": 0, "lie": {"name": "su2"},
           "coeffs": [{"k": [0] * 7, "terms": [{"idx": [1], "re": 1.0, "im": 0.0, "lie": [1.0, 2.0]}]}]}
    with pytest.raises(FieldFormatError) as err:
        field_from_json(obj)
    assert err.value.pointer == "/coeffs/0/terms/0/lie"


def test_files(tmp_path, g2):
    w = FourierField.constant(g2.omega)
    save_field(w, tmp_path / "w.json")
    assert (load_field(tmp_path / "w.json") - w).max_abs() == 0
    theta = ConnectionField(random_field(np.random.default_rng(0), 1, lie=su2()))
    save_bundle(tmp_path / "b.json", omega=w, theta=theta)
    data = load_bundle(tmp_path / "b.json")
    assert isinstance(data["theta"], ConnectionField)
    assert (data["theta"].a - theta.a).max_abs() < 1e-15


def test_invalid_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"degree": 3,\n "cutoff": }')
    with pytest.raises(FieldFormatError, match="line 2"):
        load_field(p)
    with pytest.raises(FieldFormatError, match="cannot read"):
        load_field(tmp_path / "missing.json")


def test_alpha_prime_passed_through():
    obj = field_to_json(FourierField.zero(1, 0, su2()))
    assert np.allclose(field_from_json(obj, alpha_prime=2.0).lie.pairing, 2 * np.eye(3))
