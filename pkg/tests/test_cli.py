import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from g2strom.cli import main
from g2strom.reports import Check, Report, RunConfig, schema, validate

DATA = Path(__file__).resolve().parent.parent / "data" / "fields"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out), out.err


def statuses(report):
    return {c["name"]: c["status"] for c in report["checks"]}


def test_verify_algebra_passes(capsys):
    code, rep, err = run_cli(capsys, "verify-algebra")
    assert code == 0 and rep["status"] == "PASS" and rep["wall_time"] is None
    assert "PASS (verify-algebra)" in err
    validate(rep)


def test_reports_are_byte_identical(capsys):
    texts = []
    for _ in range(2):
        main(["symbols", "--samples", "20", "--lie", "trivial"])
        texts.append(capsys.readouterr().out)
    assert texts[0] == texts[1]


def test_rank_tolerance_can_force_failure(capsys):
    code, rep, _ = run_cli(capsys, "verify-algebra", "--rank-tol", "10")
    assert code == 1 and statuses(rep)["projector_ranks"] == "FAIL"


def test_symbols_small_sample(capsys):
    code, rep, _ = run_cli(capsys, "symbols", "--samples", "30", "--timing")
    assert code == 0 and rep["config"]["samples"] == 30 and rep["wall_time"] > 0


def test_moduli_cutoff_zero_is_error(capsys):
    code, rep, _ = run_cli(capsys, "moduli", "--cutoff", "0")
    assert code == 2 and rep["status"] == "ERROR"


def test_moduli_trivial(capsys):
    code, rep, _ = run_cli(capsys, "moduli", "--lie", "trivial")
    s = statuses(rep)
    assert code == 0 and s["H1_KS"] == "PASS" and s["extension_count"] == "PASS"
    ks = next(c for c in rep["checks"] if c["name"] == "H1_KS")
    assert ks["payload"]["total_H1"] == 36


def test_torsion_requires_input(capsys):
    code, rep, _ = run_cli(capsys, "torsion")
    assert code == 2


def test_torsion_flat_solution(capsys):
    code, rep, _ = run_cli(capsys, "torsion", "--input", str(DATA / "flat_solution.json"))
    assert code == 0
    fg = next(c for c in rep["checks"] if c["name"] == "fernandez_gray")
    assert fg["payload"]["verdict"] == "torsion-free"


def test_torsion_conformal_verdict(capsys):
    code, rep, _ = run_cli(capsys, "torsion", "--input", str(DATA / "conformal.json"))
    fg = next(c for c in rep["checks"] if c["name"] == "fernandez_gray")
    assert code == 0 and fg["payload"]["verdict"] == "conformally co-closed"


def test_torsion_corrupt_file(capsys):
    code, rep, _ = run_cli(capsys, "torsion", "--input", str(DATA / "corrupt.json"))
    assert code == 2
    assert rep["checks"][0]["payload"]["pointer"] == "/"


def test_torsion_bad_field_pointer(tmp_path, capsys):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"omega": {"degree": 3, "cutoff": 0, "coeffs": [{"k": [0] * 7, "terms": [
        {"idx": [1, 2, 9], "re": 1.0, "im": 0.0}]}]}}))
    code, rep, _ = run_cli(capsys, "torsion", "--input", str(p))
    assert code == 2 and rep["checks"][0]["payload"]["pointer"] == "/omega/coeffs/0/terms/0/idx"


def test_courant_degenerate_algebra(capsys):
    code, rep, _ = run_cli(capsys, "courant", "--lie", "u1")
    assert code == 2 and "degenerate" in rep["checks"][0]["payload"]["message"]


def test_courant_small_sample(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = main(["courant", "--samples", "4", "--perturb-bianchi", "0.1", "--output", str(out)])
    capsys.readouterr()
    rep = json.loads(out.read_text())
    assert code == 0 and statuses(rep)["bianchi_sweep"] == "PASS"
    assert rep["config"]["perturb_bianchi"] == [0.1]


def test_invalid_config_exit_code(capsys):
    assert main(["symbols", "--samples", "0"]) == 2


def test_schema_rejects_bad_report():
    rep = Report("symbols", RunConfig("symbols"), [Check("x", "PASS")]).to_dict()
    validate(rep)
    rep["status"] = "MAYBE"
    with pytest.raises(jsonschema.ValidationError):
        validate(rep)
    assert schema()["$schema"].startswith("https://json-schema.org/draft/2020-12")


def test_empty_report_fails():
    assert Report("symbols", RunConfig("symbols")).status == "FAIL"


@pytest.mark.skipif(shutil.which("g2strom") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["g2strom", "verify-algebra"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "PASS"


def test_module_entry():
    proc = subprocess.run([sys.executable, "-m", "g2strom.cli", "moduli", "--cutoff", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
