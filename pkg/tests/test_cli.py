from __future__ import annotations

import json
import subprocess
import sys

import pytest

from badlie.cli import EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.mark.parametrize("type_name,p,flag,dim", [("G2", 2, "--regular", 4), ("E8", 5, "--regular", 10),
                                                  ("G2", 2, "--zero", 14), ("F4", 2, "--levi=1,2", None)])
def test_centralizer(capsys, type_name, p, flag, dim):
    code, doc = run_json(capsys, "centralizer", "--type", type_name, "--p", str(p), flag)
    assert code == EXIT_OK
    if dim is not None:
        assert doc["dim"] == dim
    assert doc["dim"] + doc["codim"] == {"G2": 14, "E8": 248, "F4": 52}[type_name]


def test_centralizer_of_element_text(capsys):
    code, out = run(capsys, "centralizer", "--type", "G2", "--p", "3", "--of", "element", "--basis")
    assert code == EXIT_OK and "dim 3" in out and "e+" in out


def test_table1(capsys):
    code, doc = run_json(capsys, "table1")
    assert code == EXIT_OK and doc["ok"]
    rows = {(r["type"], r["p"]): (r["dim_c_e"], r["dim_c_chi"]) for r in doc["rows"]}
    assert rows[("E6", 3)] == (9, 10) and rows[("F4", 2)] == (8, 6) and rows[("G2", 3)] == (3, 2)


def test_bound(capsys):
    code, doc = run_json(capsys, "bound", "--type", "E7", "--p", "3", "--regular")
    assert code == EXIT_OK and doc["exponent"] == 62
    code, _ = run(capsys, "bound", "--type", "E7", "--p", "3", "--expect", "61")
    assert code == EXIT_MISMATCH
    code, doc = run_json(capsys, "bound", "--type", "G2", "--p", "3", "--method", "nonspecial")
    assert code == EXIT_MISMATCH and doc["error"] == "nonspecial"
    code, doc = run_json(capsys, "bound", "--type", "F4", "--p", "2", "--method", "p-closed",
                         "--psi", json.dumps([[1, 0, 0, 0], [0, 1, 0, 0]]))
    assert code == EXIT_MISMATCH and doc["error"] == "p-closed"


def test_orbits(capsys):
    code, doc = run_json(capsys, "orbits", "--type", "G2", "--p", "3")
    assert code == EXIT_OK and doc["orbit_count"] == 3
    code, out = run(capsys, "orbits", "--type", "G2", "--p", "3", "--sizes", "--expect", "3")
    assert code == EXIT_OK and "[0, 0]: 6" in out
    assert run(capsys, "orbits", "--type", "G2", "--p", "3", "--expect", "4")[0] == EXIT_MISMATCH


def test_verma(capsys):
    code, doc = run_json(capsys, "verma", "--type", "A1", "--p", "3", "--zero", "--all-lambda",
                         "--check-irreducible", "--factors", "--linkage")
    assert code == EXIT_OK
    assert [m["irreducible"] for m in doc["modules"]] == [False, False, True]
    assert [m["factor_dims"] for m in doc["modules"]] == [[1, 2], [1, 2], [3]]
    assert doc["linkage"]["component_count"] == 2
    code, out = run(capsys, "verma", "--type", "G2", "--p", "2", "--lambda", "0,0", "--check-irreducible")
    assert code == EXIT_OK and "reducible" in out


def test_verma_budget_exhaustion_exit_code(capsys):
    code, doc = run_json(capsys, "verma", "--type", "A1", "--p", "3", "--zero", "--lambda", "2",
                         "--check-irreducible", "--budget", "0")
    assert code == EXIT_INCONCLUSIVE and doc["modules"][0]["irreducible"] is None


@pytest.mark.parametrize("argv", [
    ["bound", "--type", "G2", "--p", "4"],
    ["bound", "--type", "Q7", "--p", "3"],
    ["bound", "--type", "G2", "--p", "3", "--levi", "1,x"],
    ["bound", "--type", "G2", "--p", "3", "--levi", "3"],
    ["bound", "--type", "G2", "--p", "3", "--method", "p-closed", "--psi", "[[1,"],
    ["verma", "--type", "G2", "--p", "3", "--lambda", "0"],
    ["verma", "--type", "G2", "--p", "3"],
    ["verma", "--type", "E6", "--p", "3", "--lambda", "0,0,0,0,0,0"],
    ["verify-appendix", "--only", "Z9p9"],
])
def test_invalid_input(capsys, argv):
    assert main(argv) == EXIT_INPUT


def test_malformed_flags_exit_2():
    with pytest.raises(SystemExit) as err:
        main(["bound", "--p", "3"])
    assert err.value.code == 2


def test_verify_appendix_subset(capsys):
    code, doc = run_json(capsys, "verify-appendix", "--only", "F4p2,E6p3")
    assert code == EXIT_OK and doc["ok"]
    e6 = doc["scenarios"][1]
    assert e6["id"] == "E6p3" and e6["facts"]["induced_exponent_exceeds_d_chi"] is True


def test_json_output_is_byte_identical(capsys):
    argv = ["verma", "--type", "A2", "--p", "2", "--all-lambda", "--check-irreducible", "--factors",
            "--seed", "11", "--format", "json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    argv = ["verify-appendix", "--only", "G2p2,G2p3", "--format", "json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv + ["--jobs", "2"])
    assert capsys.readouterr().out == first


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.json"
    assert main(["orbits", "--type", "A1", "--p", "5", "--format", "json", "-o", str(path)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["orbit_count"] == 3


def test_convention_flag(capsys):
    a = run_json(capsys, "centralizer", "--type", "F4", "--p", "2", "--convention", "negative")[1]
    b = run_json(capsys, "centralizer", "--type", "F4", "--p", "2", "--convention", "positive")[1]
    assert a["dim"] == b["dim"] == 6 and a["convention"] == "negative"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "badlie.cli", "orbits", "--type", "G2", "--p", "2"],
                         capture_output=True, text=True, check=True)
    assert "2 dot orbits" in out.stdout
