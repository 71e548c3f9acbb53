"""End-to-end tests of the cnecc command line."""

import json

import pytest
from click.testing import CliRunner
from jsonschema import validate

from cnecc.cli.main import cli
from cnecc.cli.manifest import load_manifest, manifest_schema
from cnecc.config import set_default_config
from cnecc.errors import ParseError

C2 = "[[ [1,1,1],[1,0,1] ]]"


@pytest.fixture
def runner():
    return CliRunner()


def test_butterfly_then_net_info_from_stdin(runner):
    """butterfly output piped to net-info prints M_T1 and M_T2 with no failures."""
    net_json = runner.invoke(cli, ["butterfly"])
    assert net_json.exit_code == 0
    assert json.loads(net_json.stdout)["sinks"]

    result = runner.invoke(cli, ["net-info", "-"], input=net_json.stdout)
    assert result.exit_code == 0, result.stdout
    lines = result.stdout.splitlines()
    t1 = lines.index("M_T1 =")
    assert lines[t1 + 1:t1 + 3] == ["  1 1", "  0 1"]
    t2 = lines.index("M_T2 =")
    assert lines[t2 + 1:t2 + 3] == ["  1 0", "  1 1"]
    assert not any(line.strip().startswith("FAIL") for line in lines)


def test_net_info_json_with_output_codes(runner):
    """net-info --json includes transfer matrices and output codes."""
    result = runner.invoke(cli, ["net-info", "butterfly", "--json", "--code", "[1+z+z^2, 1+z^2]"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["edges"] == 9
    assert doc["M"]["T1"] == [[1, 1], [0, 1]]
    assert set(doc["output_codes"]) == {"T1", "T2"}


def test_net_info_missing_file(runner, tmp_path):
    """A missing network file exits 2."""
    result = runner.invoke(cli, ["net-info", str(tmp_path / "nope.json")])
    assert result.exit_code == 2


def test_net_info_malformed_json(runner, tmp_path):
    """Malformed network JSON exits 2 with a line number."""
    path = tmp_path / "net.json"
    path.write_text("{\n  nodes: [}\n")
    result = runner.invoke(cli, ["net-info", str(path)])
    assert result.exit_code == 2
    assert "line 2" in result.stderr


def test_net_info_ragged_matrix_is_usage_error(runner, tmp_path):
    """A ragged coefficient matrix exits 2 with the field named."""
    doc = json.loads(runner.invoke(cli, ["butterfly"]).stdout)
    doc["A"][0] = doc["A"][0][:-1]
    path = tmp_path / "net.json"
    path.write_text(json.dumps(doc))
    result = runner.invoke(cli, ["net-info", str(path)])
    assert result.exit_code == 2
    assert "E003" in result.stderr
    assert "field A" in result.stderr


def test_code_analyze_text(runner):
    """code-analyze reports distance, slope, bound and minimality."""
    result = runner.invoke(cli, ["code-analyze", C2])
    assert result.exit_code == 0
    assert "d_free = 5" in result.stdout
    assert "slope = 1/2" in result.stdout
    assert "slope bound = 1/3" in result.stdout
    assert "minimal-basic = yes" in result.stdout


def test_code_analyze_json(runner):
    """code-analyze --json reports exact fractions as strings."""
    result = runner.invoke(cli, ["code-analyze", "[1+z, 1]", "--json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["free_distance"] == 3
    assert doc["slope"] == "1"
    assert doc["slope_bound"] == "1/2"
    assert doc["slope_bound_pass"] is True


def test_code_analyze_not_minimal_basic(runner):
    """A non-minimal-basic code exits 1."""
    result = runner.invoke(cli, ["code-analyze", "[1+z, 1+z^2]"])
    assert result.exit_code == 1
    assert "minimal-basic = no" in result.stdout


def test_code_analyze_parse_error(runner):
    """An unparsable code exits 2."""
    result = runner.invoke(cli, ["code-analyze", "[1+z, "])
    assert result.exit_code == 2
    assert "Error" in result.stderr


def test_error_spectrum_csv(runner):
    """error-spectrum writes one CSV row per weight and y."""
    result = runner.invoke(cli, ["error-spectrum", "butterfly", "--sink", "T1"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "sink,weight,y,count"
    assert len(lines) == 1 + 10 * 4
    assert "T1,1,00,2" in lines
    assert "T1,1,01,5" in lines
    assert "T1,0,00,1" in lines


def test_error_spectrum_unknown_sink(runner):
    """An unknown sink exits 1."""
    result = runner.invoke(cli, ["error-spectrum", "butterfly", "--sink", "T7"])
    assert result.exit_code == 1


def test_pe_threshold(runner, tmp_path):
    """pe-threshold reports thresholds and writes curves with a manifest."""
    out = tmp_path / "curves.csv"
    result = runner.invoke(cli, ["pe-threshold", "butterfly", "--lambda", "10", "-o", str(out)])
    assert result.exit_code == 0, result.stderr
    doc = json.loads(result.stdout)
    assert doc["proposition_bound"] == pytest.approx(1 / 648)
    assert doc["dominance_at_bound"] is True
    assert 0.0115 <= doc["min_threshold"] <= 0.0155
    assert set(doc["sinks"]) == {"T1", "T2"}
    assert out.read_text().startswith("sink,y,p_e,single,lambda_multi\n")
    assert (tmp_path / "curves.csv.manifest.json").exists()


def test_ber_bound_csv(runner):
    """ber-bound writes a commented CSV and flags divergence."""
    result = runner.invoke(cli, ["ber-bound", "butterfly", "[1+z+z^2, 1+z^2]",
                                 "--pe-grid", "0.001,0.002,0.3"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[:2] == ["# sink: T1", "# side: input"]
    assert lines[3] == "p_e,bound,diverged"
    rows = [line.split(",") for line in lines[4:]]
    assert [r[0] for r in rows] == ["0.001", "0.002", "0.3"]
    assert rows[0][2] == "false"
    assert float(rows[0][1]) < float(rows[1][1])
    assert rows[2][2] == "true"


def test_ber_sim_manifest_and_replay(runner, tmp_path):
    """ber-sim writes a valid manifest that replays."""
    out = tmp_path / "ber.csv"
    args = ["ber-sim", "butterfly", "--code", "[1+z, 1]", "--pe", "0.01,0.05",
            "--trials", "32", "--frame-length", "40", "--seed", "7",
            "--side", "input,output", "-o", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.stderr

    csv_lines = out.read_text().splitlines()
    assert "# seed: 7" in csv_lines
    assert "sink,side,p_e,bits,bit_errors,ber,ci95" in csv_lines

    manifest_path = tmp_path / "ber.csv.manifest.json"
    doc = json.loads(manifest_path.read_text())
    validate(instance=doc, schema=manifest_schema())
    assert doc["subcommand"] == "ber-sim"
    assert doc["seed"] == 7
    assert doc["params"]["pe_grid"] == [0.01, 0.05]
    assert doc["metrics"]["points_total"] == 2 * 2 * 2

    replayed = runner.invoke(cli, ["replay", str(manifest_path)])
    assert replayed.exit_code == 0, replayed.stderr
    assert replayed.stdout.startswith("OK: ber.csv reproduced")


def test_replay_uses_recorded_config(runner, tmp_path, monkeypatch):
    """Replay installs the recorded config, whatever the environment says now."""
    monkeypatch.setenv("CNECC_FRAME_LENGTH", "30")
    set_default_config(None)
    try:
        out = tmp_path / "ber.csv"
        args = ["ber-sim", "butterfly", "--code", "[1+z, 1]", "--pe", "0.05",
                "--trials", "16", "--seed", "3", "-o", str(out)]
        assert runner.invoke(cli, args).exit_code == 0
        manifest_path = tmp_path / "ber.csv.manifest.json"
        assert json.loads(manifest_path.read_text())["config"]["frame_length"] == 30

        monkeypatch.setenv("CNECC_FRAME_LENGTH", "70")
        set_default_config(None)
        replayed = runner.invoke(cli, ["replay", str(manifest_path)])
        assert replayed.exit_code == 0, replayed.stderr
        assert replayed.stdout.startswith("OK")
    finally:
        set_default_config(None)


def test_replay_detects_mismatch(runner, tmp_path):
    """A tampered output digest makes replay exit 1."""
    out = tmp_path / "sweep.csv"
    assert runner.invoke(cli, ["slope-sweep", "--max-degree", "1", "-o", str(out)]).exit_code == 0
    manifest_path = tmp_path / "sweep.csv.manifest.json"
    doc = json.loads(manifest_path.read_text())
    doc["outputs"]["sweep.csv"] = "0" * 16
    manifest_path.write_text(json.dumps(doc))
    result = runner.invoke(cli, ["replay", str(manifest_path)])
    assert result.exit_code == 1
    assert result.stdout.startswith("MISMATCH")


def test_slope_sweep(runner):
    """slope-sweep passes every small code."""
    result = runner.invoke(cli, ["slope-sweep", "--max-degree", "2"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "G,degree,slope,bound,pass,matches_cycles"
    assert all(line.endswith("true,true") for line in lines[1:])
    assert any(line.startswith('"[[[1,1,1],[1,0,1]]]",2,1/2,1/3') for line in lines)


def test_load_manifest_errors(tmp_path):
    """Bad manifests raise E001 or E004."""
    bad_json = tmp_path / "a.manifest.json"
    bad_json.write_text("{")
    with pytest.raises(ParseError) as exc_info:
        load_manifest(bad_json)
    assert exc_info.value.code == "E001"

    bad_schema = tmp_path / "b.manifest.json"
    bad_schema.write_text(json.dumps({"manifest_version": 1, "subcommand": "replay"}))
    with pytest.raises(ParseError) as exc_info:
        load_manifest(bad_schema)
    assert exc_info.value.code == "E004"
