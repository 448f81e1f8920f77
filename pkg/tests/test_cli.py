import json
from pathlib import Path

import pytest

from iazf.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_assign_markdown_matches_fixture(capsys):
    code, out, _ = run_cli(capsys, "assign", "--k", "5", "--l", "5")
    assert code == 0
    assert out == (FIXTURES / "table_k5_l5.md").read_text()


def test_assign_k6_matches_fixture(capsys):
    code, out, _ = run_cli(
        capsys, "assign", "--k", "6", "--l", "5,6", "--format", "markdown"
    )
    assert code == 0
    assert out == (FIXTURES / "table_k6_l56.md").read_text()


def test_assign_json(capsys):
    code, out, _ = run_cli(capsys, "assign", "--k", "5", "--l", "5", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["K"] == 5 and payload["label"] == [5]
    assert len(payload["entries"]) == 12


def test_assign_all_labels(capsys):
    code, out, _ = run_cli(capsys, "assign", "--k", "5", "--format", "json")
    assert code == 0
    assert len(json.loads(out)) == 5


def test_byte_identical_reruns(capsys):
    args = ("verify-independence", "--k", "5", "--trials", "2", "--seed", "7")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_validate_ok(capsys):
    code, out, _ = run_cli(capsys, "validate", "--k", "6")
    assert code == 0
    assert json.loads(out)["all_valid"] is True


def test_validate_corrupted_fixture_exits_one(capsys):
    code, out, _ = run_cli(
        capsys, "validate", "--input", str(FIXTURES / "corrupted_table_k5.json")
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["all_valid"] is False
    assert payload["tables"][0]["violations"]


def test_validate_requires_source(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["validate"])
    assert exc.value.code == 2


def test_zf_check(capsys):
    code, out, _ = run_cli(
        capsys, "zf-check", "--k", "5", "--l", "5", "--trials", "5", "--seed", "3"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["all_passed"] and payload["tables"][0]["failures"] == 0


def test_verify_independence_single_label(capsys):
    code, out, _ = run_cli(
        capsys, "verify-independence", "--k", "6", "--l", "5,6", "--trials", "2"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["all_full_rank"]
    assert payload["reports"][0]["rank"] == 24


def test_verify_independence_all_labels(capsys):
    code, out, _ = run_cli(capsys, "verify-independence", "--k", "6", "--trials", "1")
    assert code == 0
    assert len(json.loads(out)["reports"]) == 15


def test_k5_blocks(capsys):
    code, out, _ = run_cli(capsys, "k5-blocks", "--trials", "10", "--seed", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"]
    assert payload["special_realization"]["jacobian_rank"] == 24


def test_tradeoff_csv(capsys):
    code, out, _ = run_cli(capsys, "tradeoff", "--k-min", "5", "--k-max", "15")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("K,r,delta_ach_num")
    assert len(lines) == 12
    assert lines[1] == "5,2,13,100,0.13,3,20,0.15,0.02,true"


def test_tradeoff_plot_data(capsys):
    code, out, _ = run_cli(
        capsys, "tradeoff", "--k-min", "5", "--k-max", "6", "--plot-data"
    )
    assert code == 0
    assert out.splitlines() == [
        "K,delta_ach,delta_lb",
        "5,0.13,0.15",
        "6,0.138889,0.144444",
    ]


def test_tradeoff_json(capsys):
    code, out, _ = run_cli(
        capsys, "tradeoff", "--k-min", "5", "--k-max", "5", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["delta_achievable"] == [13, 100]


def test_converse_count(capsys):
    code, out, _ = run_cli(capsys, "converse-count", "--k", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["V_total"] == 120 and payload["V"] == 26
    assert payload["passed"] and payload["sdof_upper"] == "60/13"


def test_output_file(tmp_path, capsys):
    target = tmp_path / "table.md"
    code, out, _ = run_cli(
        capsys, "assign", "--k", "5", "--l", "5", "--output", str(target)
    )
    assert code == 0
    assert out == ""
    assert target.read_text() == (FIXTURES / "table_k5_l5.md").read_text()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["assign"])  # missing required --k
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_bad_label_value(capsys):
    code, _, err = run_cli(capsys, "assign", "--k", "5", "--l", "0")
    assert code == 2
    assert "error" in err


def test_field_modulus_env_override(capsys, monkeypatch):
    monkeypatch.setenv("IAZF_FIELD_MODULUS", "1000003")
    code, out, _ = run_cli(
        capsys, "zf-check", "--k", "5", "--l", "5", "--trials", "3"
    )
    assert code == 0
    assert json.loads(out)["all_passed"]


def test_bad_field_modulus(capsys):
    code, _, err = run_cli(
        capsys, "verify-independence", "--k", "5", "--l", "5",
        "--field-modulus", "100",
    )
    assert code == 2
    assert "prime" in err
