import csv
import io
import json

import pytest

from robin_spectra import cli
from robin_spectra.errors import ConvergenceError
from robin_spectra.exact_models import disc_exterior_asymptotic, disc_exterior_eigenvalue


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_disc_row(capsys):
    code, out, _ = _run(capsys, "disc", "--R", "1", "--beta", "10", "--m", "0")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == cli.COLUMNS["disc"] + ["config_hash"]
    assert float(rows[0]["lambda_exact"]) == disc_exterior_eigenvalue(1.0, 10.0, 0).lam
    assert float(rows[0]["lambda_asymptotic"]) == disc_exterior_asymptotic(1.0, 10.0, 0)
    assert float(rows[0]["residual"]) == pytest.approx(
        float(rows[0]["lambda_exact"]) - float(rows[0]["lambda_asymptotic"]), rel=1e-15)
    assert len(rows[0]["config_hash"]) == 16


def test_curve_check_failure_record(capsys):
    code, out, err = _run(capsys, "curve-check", "--curve", '{"family": "circle", "R": 1}', "--a", "1.5")
    assert code == 2
    record = json.loads(err.strip().splitlines()[-1])
    assert record["error"] == "InjectivityFailure" and record["exit_code"] == 2
    assert "false" in out.splitlines()[1]


def test_curve_check_success(capsys):
    code, out, _ = _run(capsys, "curve-check", "--curve", '{"family": "circle", "R": 1}', "--a", "0.5")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["injective"] == "true" and float(row["gamma_star"]) == 1.0


@pytest.mark.parametrize("argv", [
    ["disc", "--beta", "-1"],
    ["disc", "--R", "0"],
    ["disc", "--bogus", "1"],
    ["spectrum", "--mesh", "4", "4"],
    ["spectrum", "--curve", '{"family": "spiral"}'],
    ["spectrum", "--curve", "not json"],
])
def test_validation_exits_2(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["exit_code"] == 2


def test_unknown_config_key(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"schema": 1, "command": "disc", "betta": 3}))
    code, _, err = _run(capsys, "disc", "--config", str(p))
    assert code == 2 and "betta" in err


def test_schema_version_checked(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"schema": 2, "command": "disc"}))
    assert _run(capsys, "disc", "--config", str(p))[0] == 2


def test_flags_override_config(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"schema": 1, "command": "disc", "beta": [5, 10], "m": [0, 1]}))
    code, out, _ = _run(capsys, "disc", "--config", str(p), "--m", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [(r["beta"], r["m"]) for r in rows] == [("5", "2"), ("10", "2")]


def test_byte_identical_repeats(tmp_path):
    args = ["spectrum", "--curve", '{"family": "circle", "R": 1}', "--side", "exterior",
            "--beta", "8", "--k", "2", "--mesh", "64", "32", "--seed", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(args + ["--output", str(a)]) == 0
    assert cli.main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.splitlines()[0] == ",".join(cli.COLUMNS["spectrum"] + ["config_hash"])
    hashes = {line.rsplit(",", 1)[1] for line in text.splitlines()[1:]}
    assert len(hashes) == 1


def test_hash_tracks_config_not_output(tmp_path):
    base = {"command": "disc", "beta": [10.0]}
    h1 = cli.validate(base).config_hash()
    assert cli.validate({**base, "output": "x.csv", "format": "json"}).config_hash() == h1
    assert cli.validate({**base, "seed": 1}).config_hash() != h1


def test_json_output(capsys):
    code, out, _ = _run(capsys, "disc", "--beta", "10", "20", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and len(doc["rows"]) == 2
    assert all(r["config_hash"] == doc["config_hash"] for r in doc["rows"])


def test_floats_round_trip(capsys):
    _, out, _ = _run(capsys, "disc", "--beta", "7.3", "--m", "1")
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["lambda_exact"]) == disc_exterior_eigenvalue(1.0, 7.3, 1).lam


def test_nonconvergence_exits_3(monkeypatch, capsys):
    def boom(cfg):
        raise ConvergenceError("no convergence", residuals=[1e-3])
    monkeypatch.setitem(cli.HANDLERS, "spectrum", boom)
    code, _, err = _run(capsys, "spectrum")
    record = json.loads(err.strip())
    assert code == 3 and record["error"] == "ConvergenceError" and record["residuals"] == [1e-3]


def test_sweep_columns(capsys):
    code, out, _ = _run(capsys, "sweep", "--beta", "8", "12", "16", "--mesh", "48", "24",
                        "--s-trunc", "6", "--no-mesh-check")
    lines = out.splitlines()
    assert code == 0 and lines[0] == ",".join(cli.COLUMNS["sweep"] + ["config_hash"])
    assert [l.split(",")[0] for l in lines[1:]] == ["8", "12", "16"]


def test_bracket_and_waveguide(capsys):
    code, out, _ = _run(capsys, "bracket", "--beta", "10", "--mesh", "48", "24", "--s-trunc", "6")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(row["lambda_lower"]) <= float(row["lambda_upper"])
    code, out, _ = _run(capsys, "waveguide", "--curve", '{"family": "line", "window": [-8, 8]}',
                        "--beta", "2", "--d", "1", "--mesh", "64", "32")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(row["lambda"]) > float(row["threshold"])


def test_verify_subset(capsys):
    code, out, err = _run(capsys, "verify", "--criteria", "3", "8")
    assert code == 0
    assert "[PASS] criterion  3" in err and "[PASS] criterion  8" in err
    assert out.splitlines()[0].startswith("criterion,title,passed")
