import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from logconcave.cli import run_command

SCHEMA = json.loads(resources.files("logconcave").joinpath("report.schema.json").read_text())


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = run_command([*argv, "--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_probe_binomial_row(tmp_path):
    code, text = run(["probe", "--builtin", "binomial_row", "--param", "n=4", "--depth", "3"], tmp_path)
    assert code == 0
    doc = json.loads(text)
    assert doc["results"]["verdict"] == {"kind": "IFoldLogConcave", "depth": 3}
    assert doc["results"]["witness"] is None


def test_apply_perturbed(tmp_path):
    code, text = run(["apply", "--expr", "1 + 1/2^k", "--horizon", "8"], tmp_path)
    assert code == 0
    terms = json.loads(text)["results"]["terms"]
    assert terms[1:4] == ["-1/4", "-1/8", "-1/16"]
    assert json.loads(text)["results"]["boundaryIndices"] == [0, 6]


def test_probe_expect_nonneg_witness(tmp_path):
    code, text = run(["probe", "--explicit", "2,1,2", "--expect-nonneg"], tmp_path)
    assert code == 3
    assert json.loads(text)["results"]["witness"] == {"depth": 1, "k": 1, "value": "-3"}


def test_analyze_expect_nonneg(tmp_path):
    code, _ = run(["analyze", "--builtin", "perturbed_const", "--expect-nonneg"], tmp_path)
    assert code == 3
    code, _ = run(["analyze", "--builtin", "geometric", "--param", "r=1/2", "--expect-nonneg"], tmp_path)
    assert code == 0


def test_witness_without_flag_is_clean(tmp_path):
    assert run(["probe", "--explicit", "2,1,2"], tmp_path)[0] == 0


@pytest.mark.parametrize("argv", [
    ["probe", "--builtin", "binomial_row", "--param", "n=4", "--depth", "3"],
    ["apply", "--expr", "1 + 1/2^k", "--horizon", "8"],
    ["analyze", "--builtin", "harmonic_shift", "--horizon", "64"],
    ["series", "--builtin", "geometric", "--param", "r=2/3", "--horizon", "40"],
])
def test_deterministic(argv, tmp_path):
    _, a = run(argv, tmp_path, "a.json")
    _, b = run(argv, tmp_path, "b.json")
    assert a == b


CORPUS = [
    ["eval", "--builtin", "alternating", "--horizon", "10"],
    ["apply", "--explicit", "1,4,6,4,1"],
    ["probe", "--builtin", "constant", "--param", "c=1", "--horizon", "10", "--depth", "4"],
    ["probe", "--explicit", "1,1,2", "--depth", "2"],
    ["analyze", "--builtin", "perturbed_const"],
    ["analyze", "--builtin", "alternating"],
    ["analyze", "--expr", "k"],
    ["analyze", "--explicit", "5"],
    ["analyze", "--explicit", "0,1,0"],
    ["series", "--builtin", "harmonic_shift", "--horizon", "30"],
    ["series", "--expr", "3*(1/2)^k", "--horizon", "30", "--depth", "2"],
    ["probe", "--builtin", "geometric", "--param", "r=1/2", "--mode", "float", "--horizon", "12"],
    ["analyze", "--builtin", "perturbed_const", "--mode", "float", "--eps", "1e-12"],
]


@pytest.mark.parametrize("argv", CORPUS)
def test_reports_validate_against_schema(argv, tmp_path):
    code, text = run(argv, tmp_path)
    assert code in (0, 3)
    jsonschema.validate(json.loads(text), SCHEMA)


def test_float_probe_is_indeterminate(tmp_path):
    _, text = run(["probe", "--builtin", "geometric", "--param", "r=1/2", "--mode", "float", "--horizon", "12"],
                  tmp_path)
    res = json.loads(text)["results"]
    assert res["verdict"]["kind"] == "Indeterminate"
    assert res["depths"][0]["indeterminateK"] == 1


def test_csv_output(tmp_path):
    code, text = run(["apply", "--explicit", "1,4,6,4,1", "--format", "csv"], tmp_path, "out.csv")
    assert code == 0
    assert text == "k,value\n0,1\n1,10\n2,20\n3,10\n4,1\n"


@pytest.mark.parametrize("argv", [
    ["probe", "--explicit", "1,2", "--format", "csv"],
    ["probe"],
    ["probe", "--expr", "k", "--builtin", "linear"],
    ["probe", "--expr", "k", "--horizon", "3", "--depth", "3"],
    ["eval", "--expr", "k", "--param", "oops"],
    ["frobnicate", "--expr", "k"],
    ["eval", "--expr", "k", "--eps", "abc"],
])
def test_usage_errors(argv, tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        code = run_command(argv)
        raise SystemExit(code)
    assert info.value.code == 64
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["eval", "--expr", "binomial(8, k"],
    ["eval", "--expr", "1/(k-2)", "--horizon", "5"],
    ["eval", "--builtin", "fibonacci"],
    ["eval", "--builtin", "geometric"],
    ["eval", "--expr", "r^k"],
    ["eval", "--explicit", "1,x"],
])
def test_spec_errors_exit_2(argv, tmp_path):
    assert run(argv, tmp_path)[0] == 2


def test_unwritable_output(tmp_path):
    code = run_command(["eval", "--expr", "k", "--out", str(tmp_path / "missing" / "x.json")])
    assert code == 1


def test_batch_spec_file(tmp_path):
    specs = tmp_path / "specs.jsonl"
    specs.write_text("\n".join(json.dumps(s) for s in [
        {"kind": "explicit", "terms": ["2", "1", "2"]},
        {"kind": "builtin", "name": "binomial_row", "params": {"n": "6"}},
        {"kind": "expr", "expr": "r^k", "params": {"r": "1/3"}},
    ]) + "\n")
    code, text = run(["probe", "--spec-file", str(specs), "--horizon", "10", "--expect-nonneg"], tmp_path)
    assert code == 3
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    assert [r["verdict"]["kind"] for r in doc["results"]] == ["FailsAtDepth", "IFoldLogConcave", "IFoldLogConcave"]
    code, parallel = run(["probe", "--spec-file", str(specs), "--horizon", "10", "--jobs", "2"], tmp_path, "p.json")
    assert parallel == text


def test_single_spec_file(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "builtin", "name": "geometric", "params": {"r": "1/2"}}))
    code, text = run(["eval", "--spec-file", str(spec), "--horizon", "4"], tmp_path)
    assert code == 0
    assert json.loads(text)["results"]["terms"] == ["1", "1/2", "1/4", "1/8"]


def test_digit_budget_env(tmp_path, monkeypatch):
    monkeypatch.setenv("LCO_DIGIT_BUDGET", "5")
    assert run(["probe", "--explicit", "3,7,2", "--depth", "8"], tmp_path)[0] == 1


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "logconcave", "probe", "--explicit", "2,1,2", "--expect-nonneg"],
                          capture_output=True, text=True)
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["results"]["witness"]["value"] == "-3"
