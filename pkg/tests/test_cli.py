import json
import subprocess
import sys
from pathlib import Path

import pytest

from extkit.cli import main, run

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "corpus" / "data"


def test_classify_human_and_json():
    code, payload, text = run(["classify", "Q", "Z"])
    assert code == 0 and payload["class"] == "EZero"
    assert text.startswith("class: EZero")
    code, _, text = run(["classify", "Q", "Z", "--json"])
    assert json.loads(text)["pointclass"] == "Σ⁰₂"


def test_trace_flag():
    _, _, plain = run(["classify", "Z[1/2]", "Z"])
    _, _, traced = run(["classify", "Z[1/2]", "Z", "--trace"])
    assert "trace" not in plain and "trace" in traced


def test_prime_binding():
    _, payload, _ = run(["classify", "Z[1/p]", "sum(n: Z/p^n)", "--prime", "3"])
    assert payload["class"] == "EZeroSeq" and payload["invariants"]["C"] == "Z[1/3]"


def test_deterministic_output():
    runs = {run(["classify", "sum(n: Q)", "sum(n: Z/prime(n))", "--json"])[2] for _ in range(3)}
    assert len(runs) == 1


def test_strict_exit_codes():
    assert run(["classify", "Z[1/2]", "Z x Z/2"])[0] == 0
    assert run(["classify", "Z[1/2]", "Z x Z/2", "--strict"])[0] == 1
    assert run(["jensen", "Q", "Z", "--strict"])[0] == 1
    assert run(["jensen", "Z[1/2]", "Z", "--strict"])[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "Z/", "Z"],
        ["classify", "Z[1/6]", "Z"],
        ["classify", "Z x Z/2", "Z"],
        ["classify", "pgroup(2; layer0=Z/4; layer1=Z/2)", "Z"],
        ["ext", "Q", "Z"],
        ["split", "/no/such/file.json"],
        ["purity", "[[1, 2, 3]]", "Z^2"],
        ["verify", "/no/such/dir"],
        ["nosuchcommand"],
        ["classify", "Q", "Z", "--depth", "1"],
    ],
)
def test_input_errors_exit_2(argv):
    code, payload, _ = run(argv)
    assert code == 2 and "error" in payload


def test_dsl_error_location():
    _, payload, _ = run(["classify", "Z x", "Z"])
    assert payload["line"] == 1 and payload["column"] == 4


def test_env_depth(monkeypatch):
    monkeypatch.setenv("EXTKIT_DEPTH", "5")
    _, payload, _ = run(["classify", "Q", "Z"])
    assert payload["depths"]["truncation"] == 5
    monkeypatch.setenv("EXTKIT_DEPTH", "five")
    assert run(["classify", "Q", "Z"])[0] == 2


def test_ext_split_baer():
    assert run(["ext", "Z/4", "Z/6"])[1]["ext"] == "Z/2"
    f = str(DATA / "nonsplit_z2_z2.json")
    assert run(["split", f])[1]["split"] is False
    _, payload, _ = run(["baer", f, f])
    assert payload["split"] is True


def test_bad_json_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["split", str(bad)])[0] == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"base": "Z/2", "coeff": "Z/2"}))
    code, payload, _ = run(["split", str(wrong)])
    assert code == 2 and "schema" in payload["error"]


def test_invariant_commands():
    assert run(["pbasic", "Z x Z[1/3]", "3"])[1]["r"] == 1
    assert run(["beta", "pgroup(2; layer0=sum(n:Z/2^n); layer1=Z/4)"])[1]["beta"] == 1
    assert run(["ulm", "pgroup(2; layer0=sum(n:Z/2^n); layer1=Z/4)", "1"])[1]["ulm_subgroup"] == "pgroup(2; layer0=Z/4)"
    assert run(["ulm", "Z", "1"])[0] == 2


def test_lim1_and_purity():
    _, payload, _ = run(["lim1", str(DATA / "tower_times2.json")])
    assert payload["certificate"]["verdict"] == "nonzero_not_ML"
    assert run(["purity", "[[2]]", "Z"])[1]["pure"] is False
    assert run(["purity", "[[2]]", "Z", "--p-pure", "--prime", "3"])[1]["p_pure"] is True


def test_verify_corpus():
    code, payload, text = run(["verify", str(ROOT / "corpus")])
    assert code == 0 and payload["ok"]
    assert "all suites passed" in text


def test_verify_empty_and_failing(tmp_path, capsys):
    assert main(["verify", str(tmp_path)]) == 0
    assert "empty corpus" in capsys.readouterr().err
    suite = {"suite": "bad", "cases": [{"name": "wrong", "args": ["ext", "Z/2", "Z/2"], "expect": {"ext": "0"}}]}
    (tmp_path / "bad.json").write_text(json.dumps(suite))
    code, payload, _ = run(["verify", str(tmp_path)])
    assert code == 1 and not payload["ok"]


def test_entry_point():
    out = subprocess.run([sys.executable, "-m", "extkit.cli", "ext", "Z/2", "Z/4", "--json"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["ext"] == "Z/2"
