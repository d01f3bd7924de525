"""Command line interface tests."""

import json

import pytest

from walkpatterns.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "walkpatterns" in capsys.readouterr().out


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--class", "excursion", "-n", "8")
    assert code == 0
    assert json.loads(out) == {"collection": "excursion(n=8)", "count": 5}


def test_enumerate_plain_and_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "excursion", "-n", "4")
    assert code == 0
    assert out.splitlines() == ["++--"]
    code, out, _ = run(capsys, "enumerate", "--class", "excursion", "-n", "4", "--json")
    obj = json.loads(out)
    assert obj["patterns"] == ["++--"]


def test_wait_rational_output(capsys):
    code, out, _ = run(capsys, "wait", "--class", "positive", "-n", "3")
    obj = json.loads(out)
    assert code == 0
    assert obj["collection_wait"] == "7/1"
    assert obj["collection_wait_float"] == 7.0


def test_oracle_compare(capsys):
    code, out, _ = run(capsys, "oracle", "--class", "excursion", "-n", "4", "--compare")
    obj = json.loads(out)
    assert code == 0
    assert obj["agree"] is True
    assert obj["oracle_wait"] == "16/1"


def test_matrix_formats(capsys):
    code, out, _ = run(capsys, "matrix", "--class", "positive", "-n", "3")
    assert code == 0
    assert out.splitlines()[0].split(",")[0] in ("3/2", "1", "2")
    code, out, _ = run(
        capsys, "matrix", "--class", "positive", "-n", "3", "--format", "json"
    )
    obj = json.loads(out)
    assert obj["k"] == 2


def test_custom_patterns_file(tmp_path, capsys):
    f = tmp_path / "pats.txt"
    f.write_text("# comment\n++\n")
    code, out, _ = run(capsys, "wait", "--class", "custom", "--patterns", str(f))
    assert code == 0
    assert json.loads(out)["collection_wait"] == "6/1"


def test_simulate_deterministic(capsys):
    args = ["simulate", "--class", "bridge", "-n", "10", "--level", "0", "--reps", "200"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    code3, out3, _ = run(capsys, *args, "--workers", "2")
    assert out3 == out1


def test_capacity_json(capsys):
    code, out, _ = run(
        capsys, "capacity", "--class", "positive", "-n", "5", "--alpha", "0.9"
    )
    obj = json.loads(out)
    assert code == 0
    assert obj["lower"] <= obj["exact"] <= obj["upper"] * (1 + 1e-9)
    assert obj["within_bounds"] is True


def test_fill_sample(capsys):
    code, out, _ = run(
        capsys,
        "fill-sample",
        "--target",
        "meander",
        "-m",
        "25",
        "--count",
        "200",
        "--ks",
    )
    obj = json.loads(out)
    assert code == 0
    assert obj["count"] == 200
    assert 0 <= obj["ks_distance"] <= 1


def test_usage_errors_exit_1(capsys):
    code, _, err = run(capsys, "count", "--class", "bridge")
    assert code == 1
    assert "length" in err
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--class", "nope", "-n", "4"])
    assert exc.value.code == 1


def test_computation_errors_exit_2(capsys):
    code, _, err = run(capsys, "wait", "--class", "custom", "--patterns", "/no/such/file")
    assert code == 2
    code, _, err = run(capsys, "count", "--class", "excursion", "-n", "5")
    assert code == 2
    assert "even" in err


def test_output_keys_sorted(capsys):
    _, out, _ = run(capsys, "count", "--class", "excursion", "-n", "4")
    obj = json.loads(out)
    assert list(obj) == sorted(obj)
