"""End-to-end tests of the command-line interface."""

import json
import subprocess
import sys

import pytest

from ehadc.cli import main

FAST_CFG = """\
signal.amplitude_v = 0.4
signal.m_cycles = 5
clock.f_s_hz = 10e3
clock.alpha = 0.1
clock.n_periods = 64
adc.n_bits = 8
adc.v_ref = 0.4
adc.c_unit_f = 12e-9
eh.c_eh_f = 1e-9
engine.n_sub = 8
engine.n_fft = 16
"""

SUMMARY_KEYS = [
    "f_s_hz",
    "t_s_s",
    "t_aq_s",
    "t_eh_s",
    "alpha",
    "f_in_hz",
    "n_bits",
    "v_ref_v",
    "c_dac_f",
    "s1_r_on_ohm",
    "c_eh_f",
    "v_drop_v",
    "r_series_ohm",
    "p_in_w",
    "p_in_provenance",
    "v_eh_v",
    "t_ceh_s",
    "eta_v",
    "eta_e",
    "e_h_j",
    "sndr_db",
    "enob",
]


def write_cfg(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestRunCommand:
    def test_writes_all_outputs(self, tmp_path, monkeypatch):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        cfg = write_cfg(tmp_path, FAST_CFG)
        out = tmp_path / "results"
        assert main(["run", cfg, "--out", str(out)]) == 0
        for name in ("trace.csv", "codes.csv", "spectrum.csv", "summary.json"):
            assert (out / name).exists()

        summary = json.loads((out / "summary.json").read_text())
        assert list(summary.keys()) == SUMMARY_KEYS
        assert summary["n_bits"] == 8
        assert summary["p_in_provenance"] == "computed_from_source"
        assert summary["v_eh_v"] > 0.0

        trace_lines = (out / "trace.csv").read_text().strip().splitlines()
        assert trace_lines[0] == "t_s,v_in,phase,v_dac,v_ceh"
        assert len(trace_lines) == 1 + 2 * 8 * 64
        assert trace_lines[1].split(",")[2] == "acq"
        assert trace_lines[9].split(",")[2] == "eh"

        codes_lines = (out / "codes.csv").read_text().strip().splitlines()
        assert codes_lines[0] == "period,code,v_sampled,saturated"
        assert len(codes_lines) == 1 + 64
        first = codes_lines[1].split(",")
        assert first[0] == "0" and first[3] in ("0", "1")

    def test_reruns_are_byte_identical(self, tmp_path, monkeypatch):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        cfg = write_cfg(tmp_path, FAST_CFG)
        assert main(["run", cfg, "--out", str(tmp_path / "a")]) == 0
        assert main(["run", cfg, "--out", str(tmp_path / "b")]) == 0
        for name in ("trace.csv", "codes.csv", "spectrum.csv", "summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_env_var_overrides_the_output_directory(self, tmp_path, monkeypatch):
        cfg = write_cfg(tmp_path, FAST_CFG)
        env_out = tmp_path / "env_out"
        monkeypatch.setenv("ESAMPLE_OUT_DIR", str(env_out))
        assert main(["run", cfg, "--out", str(tmp_path / "ignored")]) == 0
        assert (env_out / "summary.json").exists()
        assert not (tmp_path / "ignored").exists()

    def test_config_error_exits_2_without_partial_outputs(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        cfg = write_cfg(tmp_path, FAST_CFG + "bogus.key = 1\n")
        out = tmp_path / "results"
        assert main(["run", cfg, "--out", str(out)]) == 2
        assert not out.exists()
        err = capsys.readouterr().err
        assert "bogus.key" in err and ":12:" in err

    def test_not_converged_exits_3_without_partial_outputs(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        # A huge storage cap cannot reach steady state in 64 periods.
        text = FAST_CFG.replace("eh.c_eh_f = 1e-9", "eh.c_eh_f = 100e-6")
        cfg = write_cfg(tmp_path, text)
        out = tmp_path / "results"
        assert main(["run", cfg, "--out", str(out)]) == 3
        assert not out.exists()
        assert "not converged" in capsys.readouterr().err

    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "absent.cfg")]) == 2
        assert "absent.cfg" in capsys.readouterr().err


class TestSweepCommand:
    def test_range_syntax_produces_inclusive_rows(self, tmp_path, monkeypatch):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        cfg = write_cfg(tmp_path, FAST_CFG + "run.metrics =\n")
        out = tmp_path / "sweep_out"
        code = main(
            ["sweep", cfg, "--param", "alpha", "--values", "0.05:0.5:0.05", "--out", str(out)]
        )
        assert code == 0
        lines = (out / "sweep.csv").read_text().strip().splitlines()
        assert lines[0] == "parameter,value,v_eh_v,t_ceh_s,eta_v,eta_e,sndr_db,enob,error"
        assert len(lines) == 1 + 10
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert values[0] == 0.05 and values[-1] == pytest.approx(0.5, rel=1e-12)

    def test_comma_list_with_metrics(self, tmp_path, monkeypatch):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        cfg = write_cfg(tmp_path, FAST_CFG.replace("engine.n_fft = 16", "engine.n_fft = 32"))
        out = tmp_path / "sweep_out"
        code = main(
            ["sweep", cfg, "--param", "c_eh", "--values", "1e-9,2e-9", "--out", str(out)]
        )
        assert code == 0
        lines = (out / "sweep.csv").read_text().strip().splitlines()
        assert len(lines) == 3
        row = lines[1].split(",")
        assert row[0] == "c_eh" and float(row[2]) > 0.0

    def test_unknown_parameter_is_a_usage_error(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_CFG)
        with pytest.raises(SystemExit) as exc:
            main(["sweep", cfg, "--param", "v_ref", "--values", "0.4"])
        assert exc.value.code == 2

    def test_bad_range_exits_2(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, FAST_CFG)
        assert main(["sweep", cfg, "--param", "alpha", "--values", "0.5:0.1:0.1"]) == 2
        assert "range" in capsys.readouterr().err


class TestSizeCapCommand:
    def test_prints_the_capacitance(self, capsys):
        assert main(["size-cap", "--i-load", "1e-3", "--t-p", "1e-4", "--delta-v", "1e-3"]) == 0
        assert float(capsys.readouterr().out) == 1e-4

    def test_second_reference_point(self, capsys):
        assert main(["size-cap", "--i-load", "5e-6", "--t-p", "5e-3", "--delta-v", "1e-3"]) == 0
        assert float(capsys.readouterr().out) == 25e-6

    def test_zero_ripple_exits_2(self, capsys):
        assert main(["size-cap", "--i-load", "1e-3", "--t-p", "1e-4", "--delta-v", "0"]) == 2
        assert "delta_v" in capsys.readouterr().err


class TestAnalyzeCommand:
    def test_reproduces_the_run_sndr_exactly(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        cfg = write_cfg(tmp_path, FAST_CFG)
        out = tmp_path / "results"
        assert main(["run", cfg, "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        capsys.readouterr()

        code = main(
            [
                "analyze",
                str(out / "codes.csv"),
                "--n-bits", "8",
                "--v-ref", "0.4",
                "--f-s", "10e3",
                "--n-fft", "16",
                "--out", str(tmp_path / "analysis"),
            ]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        lines = dict(line.split(" = ") for line in stdout.strip().splitlines())
        assert int(lines["signal_bin"]) == 5
        assert float(lines["sndr_db"]) == summary["sndr_db"]
        assert float(lines["enob"]) == summary["enob"]
        assert (tmp_path / "analysis" / "spectrum.csv").exists()

    def test_short_record_exits_2(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("ESAMPLE_OUT_DIR", raising=False)
        path = tmp_path / "codes.csv"
        path.write_text("period,code,v_sampled,saturated\n0,10,0.1,0\n1,12,0.2,0\n")
        code = main(
            ["analyze", str(path), "--n-bits", "8", "--v-ref", "0.4", "--f-s", "10e3",
             "--out", str(tmp_path / "analysis")]
        )
        assert code == 2
        assert "n_fft" in capsys.readouterr().err

    def test_missing_code_column_exits_2(self, tmp_path, capsys):
        path = tmp_path / "codes.csv"
        path.write_text("a,b\n1,2\n")
        code = main(
            ["analyze", str(path), "--n-bits", "8", "--v-ref", "0.4", "--f-s", "10e3"]
        )
        assert code == 2
        assert "code" in capsys.readouterr().err


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ehadc", "size-cap",
         "--i-load", "1e-3", "--t-p", "1e-4", "--delta-v", "1e-3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert float(proc.stdout) == 1e-4
