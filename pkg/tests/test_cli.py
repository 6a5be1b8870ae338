import json

import jsonschema
import pytest

from fwexact.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, schema_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, command, *argv):
    code, out, _ = run(capsys, command, "--format", "json", *argv)
    doc = json.loads(out)
    schema = json.loads(schema_path(command).read_text())
    jsonschema.validate(doc, schema)
    return code, doc


def test_coeffs_text(capsys):
    code, out, _ = run(capsys, "coeffs", "--jmax", "4")
    assert code == EXIT_OK
    a_col = [line.split()[1] for line in out.splitlines()[1:6]]
    assert a_col == ["1", "1", "2", "5", "14"]
    assert "identity A: pass" in out
    assert "identity F: printed-inconsistent" in out


def test_coeffs_json(capsys):
    code, doc = run_json(capsys, "coeffs", "--jmax", "3")
    assert code == EXIT_OK
    assert doc["sequences"]["d"] == [0, 0, 2, 8]
    f = next(i for i in doc["identities"] if i["id"] == "F")
    assert f["status"] == "printed-inconsistent"


def test_coeffs_latex(capsys):
    code, out, _ = run(capsys, "coeffs", "--jmax", "4", "--format", "latex")
    assert out.startswith("\\documentclass") and out.rstrip().endswith("\\end{document}")


def test_series_check(capsys):
    code, doc = run_json(capsys, "series-check", "--series-order", "20")
    assert code == EXIT_OK
    by = {s["name"]: s for s in doc["series"]}
    assert by["c"]["status"] == "fail" and by["c"]["informational"] and by["c"]["ratio"] == "4"
    assert all(by[n]["status"] == "pass" for n in "abd")


def test_solve_latex(capsys):
    code, out, _ = run(capsys, "solve", "--theory", "dirac", "-n", "3", "--format", "latex")
    assert code == EXIT_OK
    for k in ("X_{1}", "X_{2} &= 0", "X_{3}"):
        assert k in out
    assert "\\begin{document}" in out


def test_solve_pauli_text(capsys):
    code, out, _ = run(capsys, "solve", "--theory", "dirac-pauli", "-n", "4")
    assert "X'_3 = " in out and "X'_4 = " in out


def test_solve_json_single_order(capsys):
    code, doc = run_json(capsys, "solve", "-n", "1")
    assert list(doc["series"]["X"]["orders"]) == ["1"]


def test_hamiltonian_expanded(capsys):
    code, out, _ = run(capsys, "hamiltonian", "-n", "2")
    assert "q φ + 1/2 m^-1 π^2" in out
    assert "-1/2 ħ q m^-1 (σ·B)" in out
    assert "H[c^-2] = -1/8 m^-3 π^4 - 1/4 ħ q m^-2 (E×π)·σ" in out
    code, out, _ = run(capsys, "hamiltonian", "-n", "2", "--theory", "dirac-pauli")
    assert "-μ'' (σ·B)" in out


def test_hamiltonian_compact_json(capsys):
    code, doc = run_json(capsys, "hamiltonian", "-n", "2", "--compact")
    assert doc["representation"] == "compact"
    assert doc["series"]["grading"] == "recursion"
    monos = [t["mono"] for t in doc["series"]["orders"]["0"]]
    assert {"sp": 2, "pi2n": 0, "field": "none", "phi": False} in monos


def test_hamiltonian_latex(capsys):
    code, out, _ = run(capsys, "hamiltonian", "-n", "2", "--format", "latex")
    assert "\\begin{align*}" in out and "\\documentclass" in out


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "-n", "6", "--jmax", "30", "--series-order", "20")
    assert code == EXIT_OK
    assert out.rstrip().endswith("overall: PASS")


def test_verify_plus_sign_fails(capsys):
    code, doc = run_json(capsys, "verify", "-n", "6", "--jmax", "10", "--series-order", "10", "--phi-sign", "plus")
    assert code == EXIT_FAIL
    assert not doc["overall_pass"]
    th = next(c for c in doc["checks"] if c["check"] == "closed-form-X")
    assert th["status"] == "fail"
    assert th["first_failure"]["order"] == 3 and th["first_failure"]["structure"] == "sigmaE"


def test_verify_json_has_timings(capsys):
    code, doc = run_json(capsys, "verify", "-n", "4", "--jmax", "10", "--series-order", "10")
    assert code == EXIT_OK
    assert all(isinstance(c["elapsed_s"], float) for c in doc["checks"])
    informational = {c["check"] for c in doc["checks"] if c["informational"]}
    assert informational == {"identity-C1", "identity-F", "series-c"}


def test_verify_is_byte_stable(capsys):
    args = ("verify", "-n", "4", "--jmax", "10", "--series-order", "10", "--format", "json", "--no-timing")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_report(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = main(["report", "-n", "6", "--jmax", "12", "--series-order", "10", "--format", "json", "--out", str(out)])
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, json.loads(schema_path("report").read_text()))
    rows = doc["antihermitian_combination"]
    assert [r["sum"] for r in rows] == ["0"] * 3


def test_report_text(capsys):
    code, out, _ = run(capsys, "report", "-n", "4", "--jmax", "8", "--series-order", "8")
    assert "antihermitian" in out and code == EXIT_OK


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "-n", "31"],
        ["verify", "-n", "0"],
        ["hamiltonian", "-n", "1"],
        ["solve", "--theory", "maxwell"],
        ["coeffs", "--jmax", "1"],
        ["series-check", "--series-order", "3"],
        ["frobnicate"],
        ["verify", "--compact", "--expanded"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_schemas_are_valid():
    for name in ("coeffs", "series-check", "solve", "verify", "hamiltonian", "report"):
        jsonschema.Draft202012Validator.check_schema(json.loads(schema_path(name).read_text()))
