import json
import subprocess
import sys

import pytest

from dscosc import checks
from dscosc.cli import main
from dscosc.corpus import corpus_files
from dscosc.report import violations

CHI = "space S = lim(; pt)\nfunc f on S = (1 ; ; 0)\n"


@pytest.fixture
def chi_file(tmp_path):
    p = tmp_path / "chi.dsc"
    p.write_text(CHI, encoding="utf-8")
    return str(p)


def _json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_osc_report(capsys, chi_file):
    code, rep = _json(capsys, ["osc", chi_file, "f", "2"])
    assert code == 0
    r = rep["reports"][0]
    assert r["profile"]["ε"] == "1" and r["profile"]["T0"] == "0"
    assert r["oracle_agrees"] is True


def test_dnorm_report(capsys, chi_file):
    code, rep = _json(capsys, ["dnorm", chi_file, "f"])
    r = rep["reports"][0]
    assert code == 0
    assert (r["d_norm"], r["tau"], r["oracle_lower"]) == ("2", 1, "2")
    assert r["u"] == {"ε": "1", "T0": "1", "T1": "1", "T2": "1"}


def test_indices_report(capsys, tmp_path):
    p = tmp_path / "d.dsc"
    p.write_text("space S = lim(; pt)\nfunc f on S = (0 ; ; 0 drift 1)\n", encoding="utf-8")
    code, rep = _json(capsys, ["indices", str(p), "f"])
    r = rep["reports"][0]
    assert code == 0 and r["dsc_index"] == 2 and r["verdict"] == "DSC"
    assert [s["eta"] for s in r["chain"]] == [1, 0, None]


def test_eval_with_addresses(capsys, chi_file):
    code, rep = _json(capsys, ["eval", chi_file, "f", "ε", "T7"])
    assert code == 0 and rep["reports"][0]["values"] == {"ε": "1", "T7": "0"}


def test_input_errors_exit_two(capsys, tmp_path, chi_file):
    bad = tmp_path / "bad.dsc"
    bad.write_text("space S = lim(; pt)\nfunc f on S = (1/0 ; ; 0)\n", encoding="utf-8")
    assert main(["run", str(bad)]) == 2
    assert "2:16: malformed rational: zero denominator" in capsys.readouterr().err
    assert main(["osc", chi_file, "g"]) == 2
    assert main(["osc", str(tmp_path / "missing.dsc"), "f"]) == 2
    assert main(["stepapprox", chi_file, "f", "two"]) == 2
    assert main(["osc"]) == 2
    with pytest.raises(SystemExit) as ex:
        main(["frobnicate", chi_file])
    assert ex.value.code == 2


def test_property_violation_exits_one(capsys, monkeypatch):
    monkeypatch.setitem(checks.CRITERIA, "C5", lambda seed: checks.CriterionResult("C5", False, "forced"))
    assert main(["check", "C5"]) == 1
    assert "C5: FAIL" in capsys.readouterr().out


def test_check_subset_passes(capsys):
    code, rep = _json(capsys, ["check", "C3", "C5"])
    assert code == 0 and rep["reports"][0]["violations"] == 0


def test_unknown_criterion_is_an_input_error(capsys):
    assert main(["check", "C99"]) == 2


@pytest.mark.parametrize("name", sorted(corpus_files()))
def test_corpus_runs_clean_and_deterministically(name, tmp_path, capsys):
    p = tmp_path / name
    p.write_text(corpus_files()[name], encoding="utf-8")
    first = main(["run", str(p), "--json", "--seed", "3"])
    out1 = capsys.readouterr().out
    second = main(["run", str(p), "--json", "--seed", "3"])
    out2 = capsys.readouterr().out
    assert first == second == 0
    assert out1 == out2
    assert violations(json.loads(out1)) == 0


def test_console_script_module_entry(chi_file):
    res = subprocess.run([sys.executable, "-m", "dscosc.cli", "indices", chi_file, "f"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "dsc_index=1" in res.stdout
