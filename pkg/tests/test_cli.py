import json
import subprocess
import sys

import pytest

from hqrsim.cli import UsageError, load_config, parse, run


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "hqrsim", *args],
                          capture_output=True, text=True)


def rows_of(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


class TestParse:
    def test_defaults(self):
        spec = parse(["homodyne", "--d", "3", "--L0", "5", "--alpha", "1.0"])
        assert spec.format == "csv"
        assert spec.params["delta_frac"] == 0.2
        assert spec.settings.l_att_km == 22.0
        assert spec.settings.fiber_speed_km_s == 2.0e5

    def test_negativity_range(self):
        spec = parse(["negativity-scan", "--d", "3", "--L0", "5",
                      "--alpha-range", "0:2.5:100"])
        grid = spec.params["alpha_range"]
        assert len(grid) == 100
        assert grid[0] == 0.0 and grid[-1] == 2.5

    def test_rate_spec(self):
        spec = parse(["rate", "--scheme", "usd", "--d", "3", "--L0", "5",
                      "--alpha", "1.2", "--rounds", "2", "--span", "10"])
        assert spec.command == "rate"
        assert spec.params["rounds"] == 2

    def test_rejects_unknown_flag(self):
        with pytest.raises(UsageError):
            parse(["usd", "--d", "3", "--L0", "5", "--alpha", "1", "--bogus", "1"])

    def test_rejects_low_dimension(self):
        with pytest.raises(UsageError):
            parse(["usd", "--d", "1", "--L0", "5", "--alpha", "1"])

    def test_rejects_bad_weights(self):
        with pytest.raises(UsageError):
            parse(["purify", "--weights", "0.5,0.4"])


class TestConfig:
    def test_roundtrip_defaults(self, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("# comment\nl_att_km = 22\nfiber_speed_km_s = 2.0e5\n")
        assert load_config(str(cfg)) == {"l_att_km": 22.0, "fiber_speed_km_s": 2.0e5}

    def test_rejects_unknown_key(self, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("bogus = 1\n")
        with pytest.raises(UsageError, match="cfg:1"):
            load_config(str(cfg))

    def test_rejects_bad_number(self, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("l_att_km = twenty\n")
        with pytest.raises(UsageError, match=":1"):
            load_config(str(cfg))

    def test_config_keeps_benchmark_rates(self, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("fiber_speed_km_s = 2.0e5\n")
        spec = parse(["--config", str(cfg), "rate", "--scheme", "usd", "--d", "3",
                      "--L0", "5", "--alpha", "1.2", "--rounds", "0", "--span", "10"])
        _, text = run(spec)
        value = dict(r for r in (line.split(",") for line in text.strip().splitlines()[1:]))
        assert float(value["rate_hz"]) == pytest.approx(10175, rel=1e-3)


class TestRun:
    def test_usd_contains_benchmark_value(self):
        spec = parse(["usd", "--d", "3", "--L0", "20", "--alpha", "0.5"])
        status, text = run(spec)
        assert status == 0
        assert "0.0137597" in text

    def test_mc_certain_success(self):
        spec = parse(["mc", "--n", "1", "--p", "1.0", "--trials", "100000",
                      "--seed", "7"])
        status, text = run(spec)
        assert status == 0
        values = dict(line.split(",") for line in text.strip().splitlines()[1:])
        assert float(values["mean_attempts"]) == 1.0

    def test_mc_deterministic(self):
        args = ["mc", "--n", "1", "--p", "0.3", "--trials", "20000", "--seed", "11"]
        assert run(parse(args)) == run(parse(args))

    def test_table_has_status_column(self):
        status, text = run(parse(["table", "--id", "I"]))
        header, rows = rows_of(text)
        assert status == 0
        assert header == ["section", "span_km", "rounds", "printed", "computed", "status"]
        assert {r[5] for r in rows} <= {"match", "known-typo", "unresolved"}

    def test_constants_models(self):
        _, gram = run(parse(["constants", "--d", "3", "--alpha", "0.541061"]))
        _, closed = run(parse(["constants", "--d", "3", "--alpha", "0.541061",
                               "--model", "closed-form"]))
        assert "0.287" in gram  # Gram-derived m=1 constant
        assert "0.84797" in closed  # trig-variant m=1 constant

    def test_entangle_weights(self):
        status, text = run(parse(["entangle", "--d", "3", "--L0", "20",
                                  "--alpha", "0.5"]))
        header, rows = rows_of(text)
        assert header == ["component", "weight", "bell_phase_index"]
        assert float(rows[0][1]) == pytest.approx(0.861808, abs=1e-6)
        assert [r[2] for r in rows] == ["0", "2", "1"]

    def test_purify_rounds(self):
        status, text = run(parse(["purify", "--weights", "0.7494,0.0942,0.1564",
                                  "--rounds", "2"]))
        header, rows = rows_of(text)
        assert float(rows[1][2]) == pytest.approx(0.94394, abs=1e-4)
        assert float(rows[2][2]) == pytest.approx(0.99786, abs=1e-4)

    def test_homodyne_report_fields(self):
        status, text = run(parse(["homodyne", "--d", "3", "--L0", "5",
                                  "--alpha", "1.0", "--delta-frac", "0.2"]))
        values = dict(line.split(",") for line in text.strip().splitlines()[1:])
        assert float(values["P_succ"]) == pytest.approx(0.496076, abs=1e-5)
        assert float(values["F_av"]) == pytest.approx(0.684023, abs=1e-5)
        assert float(values["offdiag_bound"]) == pytest.approx(0.161099059629, abs=1e-6)

    def test_json_mirrors_csv(self):
        spec_csv = parse(["usd", "--d", "3", "--L0", "20", "--alpha", "0.5"])
        spec_json = parse(["--format", "json", "usd", "--d", "3", "--L0", "20",
                           "--alpha", "0.5"])
        _, text_csv = run(spec_csv)
        _, text_json = run(spec_json)
        doc = json.loads(text_json)
        csv_map = dict(line.split(",") for line in text_csv.strip().splitlines()[1:])
        assert {row["quantity"]: row["value"] for row in doc} == \
            {k: float(v) for k, v in csv_map.items()}

    def test_negativity_scan_roundtrip_six_digits(self):
        spec = parse(["negativity-scan", "--d", "3", "--L0", "5",
                      "--alpha-range", "0:2.5:20"])
        _, text = run(spec)
        header, rows = rows_of(text)
        assert header == ["alpha", "negativity"]
        for row in rows:
            for cell in row:
                assert f"{float(cell):.6g}" == cell

    def test_table_roundtrip_six_digits(self):
        _, text = run(parse(["table", "--id", "V"]))
        _, rows = rows_of(text)
        for row in rows:
            for cell in (row[3], row[4]):
                assert f"{float(cell):.6g}" == cell


class TestMainProcess:
    def test_exit_zero_and_stdout(self):
        cp = run_cli("usd", "--d", "3", "--L0", "20", "--alpha", "0.5")
        assert cp.returncode == 0
        assert "0.0137597" in cp.stdout

    def test_usage_error_is_two(self):
        cp = run_cli("usd", "--d", "1", "--L0", "20", "--alpha", "0.5")
        assert cp.returncode == 2
        assert "--d" in cp.stderr
        assert cp.stdout == ""

    def test_unknown_flag_is_two(self):
        cp = run_cli("usd", "--d", "3", "--L0", "20", "--alpha", "0.5", "--nope")
        assert cp.returncode == 2
        assert cp.stdout == ""

    def test_out_file_atomic(self, tmp_path):
        out = tmp_path / "scan.csv"
        cp = run_cli("negativity-scan", "--d", "3", "--L0", "5",
                     "--alpha-range", "0:1:5", "--out", str(out))
        assert cp.returncode == 0
        assert out.exists()
        lines = out.read_text().splitlines()
        assert lines[0] == "alpha,negativity"
        assert len(lines) == 6
        assert not list(tmp_path.glob(".hqrsim-*"))

    def test_missing_config_is_two(self):
        cp = run_cli("--config", "/nonexistent/cfg", "usd", "--d", "3",
                     "--L0", "20", "--alpha", "0.5")
        assert cp.returncode == 2
