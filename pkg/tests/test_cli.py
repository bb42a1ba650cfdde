import json
import os
import subprocess
import sys

import pytest

from xsec.cli import EXIT_GEOMETRY, EXIT_INPUT, EXIT_OVERFLOW, decode_csv, parse_args, run


@pytest.fixture
def hexfile(tmp_path):
    p = tmp_path / "hex.json"
    p.write_text(json.dumps({"n": 3, "given_as": "complement", "rows": [[1, 1, 1]]}))
    return str(p)


@pytest.fixture
def planefile(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"n": 4, "given_as": "H", "rows": [[1, 0.5, -1, 2], [0, 1, 1, -0.5]]}))
    return str(p)


def xsec(*argv, threads=None):
    env = dict(os.environ)
    if threads is not None:
        env["XSEC_THREADS"] = str(threads)
    return subprocess.run([sys.executable, "-m", "xsec.cli", *argv], capture_output=True, text=True, env=env)


class TestParse:
    def test_estimate(self, hexfile):
        cfg = parse_args(["estimate", "--subspace", hexfile, "--mode", "codim", "--a", "1,1,1", "--samples", "1000000", "--seed", "7"])
        assert (cfg.command, cfg.mode, cfg.a, cfg.samples, cfg.seed) == ("estimate", "codim", [1.0, 1.0, 1.0], 10**6, 7)

    def test_scan(self):
        cfg = parse_args(["scan", "--subspace", "s.json", "--box", "2", "--triples", "100", "--samples", "100000"])
        assert cfg.command == "scan" and cfg.box == 2.0 and cfg.triples == 100

    def test_default_seed(self):
        assert parse_args(["estimate", "--subspace", "x", "--a", "1"]).seed == 42

    def test_nonpositive_dilation(self, capsys):
        with pytest.raises(SystemExit) as exc:
            parse_args(["estimate", "--subspace", "x", "--a", "1,0,1"])
        assert exc.value.code != 0
        assert "dilation entries must be positive" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "argv",
        [
            ["estimate", "--subspace", "x", "--a", "1", "--t", "0"],
            ["estimate", "--subspace", "x"],
            ["estimate", "--a", "1"],
            ["estimate", "--subspace", "x", "--a", "1,abc"],
            ["estimate", "--subspace", "x", "--a", "1", "--samples", "1000", "--batches", "7"],
            ["oracle", "--subspace", "x", "--a", "1", "--bogus"],
            ["frobnicate"],
        ],
    )
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit) as exc:
            parse_args(argv)
        assert exc.value.code == 2


class TestRun:
    def test_estimate_hexagon(self, hexfile, capsys):
        assert run(parse_args(["estimate", "--subspace", hexfile, "--a", "1,1,1", "--samples", "1000000", "--seed", "7"])) == 0
        row = json.loads(capsys.readouterr().out)["rows"][0]
        assert abs(row["value"] - 1.299038) <= 3 * row["stderr"]
        assert row["seed"] == 7 and row["samples"] == 10**6 and row["method"] == "codim"

    def test_counterexample(self, capsys):
        assert run(parse_args(["counterexample"])) == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        cert = [r for r in rows if r["kind"] == "certificate"][0]
        assert cert["margin"] <= -0.5
        assert len(rows) == 42

    def test_oracle_routes_k3_to_mc(self, tmp_path, capsys):
        p = tmp_path / "k3.json"
        p.write_text(json.dumps({"n": 4, "given_as": "complement", "rows": [[1, 1, 1, 1]]}))
        assert run(parse_args(["oracle", "--subspace", str(p), "--a", "1,1,1,1", "--samples", "10000"])) == 0
        assert json.loads(capsys.readouterr().out)["rows"][0]["method"] == "oracle_mc"

    def test_mixed_disc(self, tmp_path, capsys):
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"matrices": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}))
        assert run(parse_args(["mixed-disc", "--matrices", str(p), "--weights", "1,2"])) == 0
        row = json.loads(capsys.readouterr().out)["rows"][0]
        assert row["value"] == pytest.approx(0.5)
        assert row["residual"] <= 1e-12

    def test_density_check(self, capsys):
        assert run(parse_args(["density-check", "--format", "csv"])) == 0
        rows = decode_csv(capsys.readouterr().out)
        assert [r["x"] for r in rows] == [0, 1, 3]
        assert all(r["error"] <= 1e-6 for r in rows)

    def test_output_file(self, hexfile, tmp_path):
        out = tmp_path / "o.csv"
        assert run(parse_args(["oracle", "--subspace", hexfile, "--a", "1,1,1", "--format", "csv", "--output", str(out)])) == 0
        assert decode_csv(out.read_text())[0]["method"] == "oracle_k2"

    def test_error_codes(self, tmp_path, capsys):
        assert run(parse_args(["oracle", "--subspace", str(tmp_path / "missing.json"), "--a", "1"])) == EXIT_INPUT
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"n": 2, "given_as": "H", "rows": [[1, 0], [2, 0]]}))
        assert run(parse_args(["oracle", "--subspace", str(bad), "--a", "1,1"])) == EXIT_GEOMETRY
        ok = tmp_path / "ok.json"
        ok.write_text(json.dumps({"n": 1, "given_as": "H", "rows": [[1]]}))
        assert run(parse_args(["oracle", "--subspace", str(ok), "--t", "1000"])) == EXIT_OVERFLOW
        assert "overflow" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["estimate", "--a", "1,0.5,2", "--samples", "20000", "--batches", "20"],
        ["oracle", "--a", "1,0.5,2"],
        ["density-check"],
        ["counterexample", "--grid=-5:5:11"],
    ],
)
def test_json_csv_same_values(hexfile, argv):
    if "--a" in argv:
        argv = argv + ["--subspace", hexfile]
    j = json.loads(xsec(*argv, "--format", "json").stdout)["rows"]
    c = decode_csv(xsec(*argv, "--format", "csv").stdout)
    assert len(j) == len(c)
    for rj, rc in zip(j, c):
        assert rj == rc


def test_scan_rows_carry_seed(planefile):
    res = xsec("scan", "--subspace", planefile, "--triples", "3", "--samples", "2000", "--batches", "10", "--seed", "9")
    rows = json.loads(res.stdout)["rows"]
    assert len(rows) == 3
    assert all(r["seed"] == 9 and r["samples"] == 2000 for r in rows)
    assert all(r["verdict"] in ("consistent", "inconclusive", "violation") for r in rows)
