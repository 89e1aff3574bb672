import json

import numpy as np
import pytest

from lie2int.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def machine_lines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_check_algebra_machine_output(capsys):
    code, out = run(capsys, "check-algebra", "--input", "builtin:so3", "demo:so3", "--format", "machine")
    assert code == 0
    lines = machine_lines(out.out)
    assert lines[-1]["overall"] == "pass"
    assert {l["check"] for l in lines[:-1]} >= {"builtin:so3:jacobi", "demo:so3:antisymmetry"}
    assert "demo:so3" in lines[-1]["provenance"]["inputs"]


def test_check_algebra_failure(capsys, tmp_path):
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    path = write(tmp_path, "bad.json", {"c": c.tolist()})
    code, out = run(capsys, "check-algebra", "--input", path)
    assert code == 1 and "FAIL" in out.out


@pytest.mark.parametrize("argv", [
    ("psi", "--input", "/nonexistent/file.json"),
    ("check-algebra", "--grid", "4"),
    ("check-algebra", "--tol", "-1"),
    ("frobnicate",),
])
def test_input_errors(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, out = run(capsys, "check-algebra", "--input", str(path))
    assert code == 2 and "invalid JSON" in out.err


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LIE2INT_TOL", "nope")
    assert run(capsys, "check-algebra")[0] == 2
    monkeypatch.setenv("LIE2INT_TOL", "1e-3")
    code, out = run(capsys, "check-algebra", "--format", "machine")
    assert code == 0
    assert machine_lines(out.out)[-1]["provenance"]["tol"] == 1e-3


def test_psi_zero_bigon(capsys):
    code, out = run(capsys, "psi", "--input", "demo:zero_bigon", "--format", "machine")
    assert code == 0
    summary = machine_lines(out.out)[-1]
    np.testing.assert_array_equal(summary["payload"]["g"], np.eye(3))


def test_psi_refuses_nonzero_face(capsys, tmp_path):
    grid = np.zeros((9, 9, 3))
    b = grid.copy()
    b[0, 3, 1] = 0.5
    path = write(tmp_path, "face.json", {"a": grid.tolist(), "b": b.tolist(), "z": grid.tolist()})
    code, out = run(capsys, "psi", "--input", path)
    assert code == 1 and "refused" in out.out


def test_psi_is_deterministic(capsys):
    argv = ("psi", "--input", "demo:so3_bigon", "--grid", "32", "--format", "machine")
    first, second = run(capsys, *argv), run(capsys, *argv)
    assert first[0] == 0 and first[1].out == second[1].out


def test_random_bigon_input(capsys, tmp_path):
    path = write(tmp_path, "rand.json", {"crossed_module": "builtin:derivation:heisenberg",
                                         "random": {"scale": 0.3}})
    code, _ = run(capsys, "psi", "--input", path, "--grid", "32", "--seed", "4")
    assert code == 0


def test_roundtrip_and_morphism(capsys):
    assert run(capsys, "roundtrip", "--input", "demo:so3_bigon", "--grid", "32")[0] == 0
    assert run(capsys, "integrate-morphism", "--grid", "32")[0] == 0


def test_check_crossed_module(capsys):
    code, out = run(capsys, "check-crossed-module", "--input", "builtin:derivation:sl2",
                    "--grid", "64", "--samples", "2", "--format", "machine")
    assert code == 0
    names = {l.get("check") for l in machine_lines(out.out)}
    assert {"group:peiffer", "algebra:peiffer"} <= names


@pytest.mark.parametrize("check", ["develop", "bigon", "quadrature"])
def test_convergence(capsys, check):
    assert run(capsys, "convergence", "--check", check)[0] == 0
