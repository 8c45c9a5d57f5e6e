import json

import numpy as np
import pytest

from margindisc.cli import main
from margindisc.probfile import problem_to_json
from margindisc.two_unitary import UnitaryPair


@pytest.fixture()
def pair_file(tmp_path):
    pair = UnitaryPair(np.eye(2), np.diag([1.0, 1j]))
    path = tmp_path / "pair.json"
    path.write_text(problem_to_json(pair, margin=0.05))
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_two_unitary_subcommand(capsys, pair_file):
    code, doc = run_json(capsys, ["two-unitary", "--file", pair_file, "--margin", "0.05"])
    assert code == 0
    assert doc["p_max"] == pytest.approx(0.5849235, abs=1e-6)
    assert doc["domain"] == "intermediate"
    assert doc["s_min"] == pytest.approx(0.5, abs=1e-12)
    assert doc["m_c_prime"] == 0.0
    assert doc["seed"] == 0


def test_two_unitary_uses_file_margin_by_default(capsys, pair_file):
    code, doc = run_json(capsys, ["two-unitary", "--file", pair_file])
    assert code == 0
    assert doc["p_max"] == pytest.approx(0.5849235, abs=1e-6)


def test_report_json_roundtrips(capsys, pair_file):
    code, doc = run_json(capsys, ["two-unitary", "--file", pair_file])
    assert code == 0
    assert json.loads(json.dumps(doc)) == doc


def test_malformed_priors_exit_code(tmp_path, capsys):
    doc = json.loads(problem_to_json(UnitaryPair(np.eye(2), np.eye(2)), margin=1.0))
    doc["payload"]["priors"] = [0.7, 0.5]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code = main(["two-unitary", "--file", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "priors" in err


def test_missing_file_exit_code(capsys):
    assert main(["two-unitary", "--file", "/nonexistent/file.json"]) == 1


def test_catalog_color_coding_report(capsys):
    code, doc = run_json(
        capsys, ["catalog", "color-coding", "--N", "4", "--d", "2", "--margin", "1"]
    )
    assert code == 0
    assert doc["kappa"]["kappa"] == [1, 2]
    assert doc["kappa"]["kappa_ancilla"] == [7, 12]
    assert doc["p_max_exact"] == [1, 2]
    assert doc["domain"] == "minimum-error"


def test_catalog_superdense_ancilla_story(capsys):
    code, doc = run_json(capsys, ["catalog", "superdense", "--d", "2", "--margin", "0"])
    assert code == 0
    assert doc["p_max"] == 0.0
    code, doc = run_json(
        capsys, ["catalog", "superdense", "--d", "2", "--margin", "0", "--ancilla", "2"]
    )
    assert code == 0
    assert doc["p_max"] == 1.0
    assert doc["kappa_prime"] == [1, 1]


def test_catalog_exact_linear_branch(capsys):
    code, doc = run_json(
        capsys, ["catalog", "phase-shift", "--K", "3", "--margin", "0.2"]
    )
    assert code == 0
    assert doc["p_max_exact"] == [2, 5]
    assert doc["p_max"] == pytest.approx(0.4)


def test_catalog_curve_csv(capsys):
    code = main(["catalog", "color-coding", "--N", "4", "--d", "2", "--curve", "--max-N", "5"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("N,d,kappa_num")
    row42 = [l for l in lines if l.startswith("4,2,")]
    assert row42 and row42[0].split(",")[2:6] == ["1", "2", "7", "12"]


def test_catalog_emit_file_roundtrip(tmp_path, capsys):
    target = tmp_path / "sd3.json"
    code = main(
        ["catalog", "superdense", "--d", "3", "--emit-file", str(target), "--margin", "1"]
    )
    assert code == 0
    capsys.readouterr()
    code, doc = run_json(capsys, ["group", "--file", str(target), "--margin", "1"])
    assert code == 0
    assert doc["p_max_exact"] == [1, 3]
    assert doc["kappa"]["signature"] == [[3, 1]]


def test_group_with_theorem_verification(tmp_path, capsys):
    target = tmp_path / "sd2.json"
    assert main(["catalog", "superdense", "--d", "2", "--emit-file", str(target)]) == 0
    capsys.readouterr()
    code, doc = run_json(
        capsys,
        ["group", "--file", str(target), "--margin", "0.3", "--verify-theorem", "25"],
    )
    assert code == 0
    assert doc["key_inequality"]["passed"] is True
    assert doc["p_max"] == pytest.approx(0.3, abs=1e-12)  # linear branch: 0.5*0.3/0.5


def test_group_with_ancilla_flag(tmp_path, capsys):
    target = tmp_path / "sd2.json"
    assert main(["catalog", "superdense", "--d", "2", "--emit-file", str(target)]) == 0
    capsys.readouterr()
    code, doc = run_json(
        capsys, ["group", "--file", str(target), "--margin", "0", "--ancilla", "2"]
    )
    assert code == 0
    assert doc["p_max"] == 1.0


def test_verify_two_unitary(capsys, pair_file):
    code = main(["verify", "--file", pair_file, "--trials", "10"])
    out = capsys.readouterr().out
    assert code == 0
    assert "[ok]" in out
    assert "FAIL" not in out


def test_verify_group(tmp_path, capsys):
    target = tmp_path / "z3.json"
    assert main(["catalog", "phase-shift", "--K", "3", "--emit-file", str(target)]) == 0
    capsys.readouterr()
    code = main(["verify", "--file", str(target), "--trials", "15"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("[ok]") >= 4


def test_table_and_csv_formats(capsys, pair_file):
    code = main(["two-unitary", "--file", pair_file, "--format", "table"])
    out = capsys.readouterr().out
    assert code == 0
    assert "p_max" in out
    code = main(["two-unitary", "--file", pair_file, "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    header, values = out.strip().splitlines()
    assert "p_max" in header.split(",")


def test_seed_env_default(tmp_path, capsys, monkeypatch, pair_file):
    monkeypatch.setenv("MARGINDISC_SEED", "17")
    from margindisc.cli import build_parser

    args = build_parser().parse_args(["two-unitary", "--file", pair_file])
    assert args.seed == 17


def test_oracle_flag_two_unitary(capsys, pair_file):
    code, doc = run_json(
        capsys,
        [
            "two-unitary",
            "--file",
            pair_file,
            "--oracle",
            "--oracle-restarts",
            "6",
            "--oracle-iterations",
            "800",
        ],
    )
    assert code == 0
    assert doc["oracle"]["certified"] is True
    assert abs(doc["oracle"]["gap"]) <= 1e-3
