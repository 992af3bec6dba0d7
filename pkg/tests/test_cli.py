import json

import pytest

from logdiam.cli import (
    EXIT_BUDGET,
    EXIT_CONFIG,
    EXIT_INTERNAL,
    EXIT_NO,
    EXIT_OK,
    main,
    parse_bytes,
    parse_q,
)
from logdiam.errors import ConfigError


def test_parse_q():
    assert parse_q("7") == [7]
    assert parse_q("2..5") == [2, 3, 4, 5]
    assert parse_q("3,9,27") == [3, 9, 27]
    with pytest.raises(ConfigError):
        parse_q("0")
    with pytest.raises(ValueError):
        parse_q("x")


def test_parse_bytes():
    assert parse_bytes("1024") == 1024
    assert parse_bytes("2G") == 2 << 30
    assert parse_bytes("16M") == 16 << 20
    with pytest.raises(ConfigError):
        parse_bytes("0")


@pytest.fixture
def sl2_file(tmp_path, sl2):
    path = tmp_path / "sl2.json"
    path.write_text(json.dumps(sl2.to_json()))
    return str(path)


@pytest.fixture
def sa2_file(tmp_path, sa2):
    path = tmp_path / "sa2.json"
    path.write_text(json.dumps(sa2.to_json()))
    return str(path)


def test_diam_scan(sl2_file, tmp_path, capsys):
    out = tmp_path / "scan.csv"
    rc = main(["diam", "--spec", sl2_file, "--q", "2..6", "--out", str(out)])
    assert rc == EXIT_OK
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 6 and lines[0] == "q,|Xq|,diam,ratio,ms"
    summary = json.loads(capsys.readouterr().out.strip())
    assert summary["count"] == 5 and summary["fitted_C"] > 0


def test_diam_q1(sl2_file, tmp_path):
    out = tmp_path / "one.csv"
    rc = main(["diam", "--spec", sl2_file, "--q", "1", "--out", str(out)])
    assert rc == EXIT_OK
    assert out.read_text().strip().split("\n")[1].startswith("1,1,0,")


def test_missing_spec_is_config_error(tmp_path):
    rc = main(["diam", "--spec", str(tmp_path / "nope.json"), "--q", "2"])
    assert rc == EXIT_CONFIG


def test_budget_exit(sl2_file):
    rc = main(
        ["diam", "--spec", sl2_file, "--q", "64", "--budget-mem", "1K"]
    )
    assert rc == EXIT_BUDGET


def test_decompose_roundtrip(tmp_path, capsys):
    target = tmp_path / "t.json"
    target.write_text(json.dumps({"rows": [[1, 81], [81, 1]]}))
    cert = tmp_path / "cert.json"
    rc = main(
        ["decompose", "--q", "243", "--target", str(target), "--out", str(cert)]
    )
    assert rc == EXIT_OK
    obj = json.loads(cert.read_text())
    assert obj["context"]["q"] == 243 and len(obj["letters"]) == 4
    rc = main(
        ["decompose", "--q", "243", "--target", str(target), "--verify", str(cert)]
    )
    assert rc == EXIT_OK


def test_decompose_identity_empty(tmp_path):
    target = tmp_path / "t.json"
    target.write_text(json.dumps({"rows": [[1, 0], [0, 1]]}))
    cert = tmp_path / "cert.json"
    rc = main(
        ["decompose", "--q", "243", "--target", str(target), "--out", str(cert)]
    )
    assert rc == EXIT_OK
    assert json.loads(cert.read_text())["letters"] == []


def test_decompose_shallow_target_config_error(tmp_path):
    target = tmp_path / "t.json"
    target.write_text(json.dumps({"rows": [[1, 9], [0, 1]]}))
    rc = main(["decompose", "--q", "243", "--target", str(target)])
    assert rc == EXIT_CONFIG


def test_certify_roundtrip(sa2_file, tmp_path):
    target = tmp_path / "t.json"
    target.write_text(
        json.dumps({"linear": [[1, 0], [0, 1]], "trans": [5, 7]})
    )
    cert = tmp_path / "cert.json"
    rc = main(
        ["certify", "--spec", sa2_file, "--q", "243",
         "--target", str(target), "--out", str(cert)]
    )
    assert rc == EXIT_OK
    obj = json.loads(cert.read_text())
    assert obj["accounting"]["assembled"] <= obj["accounting"]["bound"]
    rc = main(
        ["certify", "--spec", sa2_file, "--q", "243",
         "--target", str(target), "--verify", str(cert)]
    )
    assert rc == EXIT_OK
    # a tampered certificate fails the replay
    obj["word"] = obj["word"][:-1]
    cert.write_text(json.dumps(obj))
    rc = main(
        ["certify", "--spec", sa2_file, "--q", "243",
         "--target", str(target), "--verify", str(cert)]
    )
    assert rc == EXIT_INTERNAL


def test_check_seed_exit_codes(tmp_path):
    mat = tmp_path / "m.json"
    mat.write_text(json.dumps({"rows": [[2, 9], [3, 14]]}))
    assert main(["check-seed", "--q", "243", "--target", str(mat)]) == EXIT_OK
    assert (
        main(["check-seed", "--q", "243", "--target", str(mat), "--variant", "upper"])
        == EXIT_NO
    )


def test_surjectivity_cli(sl2_file, capsys):
    rc = main(["surjectivity", "--spec", sl2_file, "--q", "2..5"])
    assert rc == EXIT_OK
    out = capsys.readouterr().out.strip().split("\n")
    assert all(json.loads(line)["surjective"] for line in out)
