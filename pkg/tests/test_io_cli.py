import subprocess
import sys

import numpy as np
import pytest

from wqsim import ParseError, PRESETS, parse_config_text, format_config
from wqsim.cli import main
from wqsim.runio import RunSettings, fmt, parse_config_file, write_csv

GOOD = """\
# two chirally coupled atoms
omega_a = 50.0
label = demo
[atom.1]
z = 0.1
gamma_l = 0.25
gamma_r = 0.5
[atom.2]
z = 0.2
gamma_l = 0.25
gamma_r = 0.5
[run]
t_end = 0.5
dt = 0.0015625
k_points = 41
k_halfwidth = 8.0
"""


class TestConfigParsing:
    def test_good_round_trip(self):
        cfg, run = parse_config_text(GOOD)
        assert cfg.omega_a == 50.0
        assert cfg.label == "demo"
        assert len(cfg.atoms) == 2
        assert cfg.atoms[1].gamma_r == 0.5
        assert run.k_points == 41
        text = format_config(cfg, run)
        cfg2, run2 = parse_config_text(text)
        assert cfg2 == cfg
        assert run2 == run

    def test_missing_omega_a_named(self):
        bad = GOOD.replace("omega_a = 50.0\n", "")
        with pytest.raises(ParseError, match="omega_a"):
            parse_config_text(bad)

    def test_unknown_field_has_line_number(self):
        bad = GOOD.replace("z = 0.1", "zz = 0.1")
        with pytest.raises(ParseError, match=r":5: .*zz"):
            parse_config_text(bad)

    def test_non_numeric_value(self):
        bad = GOOD.replace("z = 0.1", "z = abc")
        with pytest.raises(ParseError, match="abc"):
            parse_config_text(bad)

    def test_missing_atom_section(self):
        with pytest.raises(ParseError, match=r"atom\.1"):
            parse_config_text("omega_a = 50.0\n")

    def test_unknown_section(self):
        with pytest.raises(ParseError, match="mirror"):
            parse_config_text("omega_a = 50\n[mirror]\nz = 0\n")

    def test_invalid_geometry_surfaces(self):
        from wqsim import InvalidGeometry
        bad = GOOD.replace("z = 0.2", "z = 0.05")
        with pytest.raises(InvalidGeometry):
            parse_config_text(bad)

    def test_preset_fidelity_round_trip(self):
        for name, preset in PRESETS.items():
            text = format_config(preset.config, preset.settings)
            cfg, run = parse_config_text(text, origin=name)
            assert cfg.atoms == preset.config.atoms, name
            assert cfg.omega_a == preset.config.omega_a
            assert run == preset.settings


class TestCsv:
    def test_deterministic_bytes(self, tmp_path):
        rng = np.random.default_rng(7)
        col = rng.standard_normal(50)
        p1 = write_csv(tmp_path / "a.csv", ["t", "v"], [np.arange(50.0), col])
        p2 = write_csv(tmp_path / "b.csv", ["t", "v"], [np.arange(50.0), col])
        assert p1.read_bytes() == p2.read_bytes()

    def test_lossless_round_trip(self, tmp_path):
        vals = np.array([1.0 / 3.0, np.pi, 1e-17, 123456.789012345678])
        p = write_csv(tmp_path / "c.csv", ["v"], [vals])
        back = np.loadtxt(p, delimiter=",", skiprows=1)
        assert np.array_equal(back, vals)

    def test_fmt_17_digits(self):
        assert float(fmt(np.pi)) == np.pi

    def test_preset_rerun_byte_identical(self, tmp_path):
        from wqsim import run_preset
        run_preset("fig4_dashed", tmp_path / "a")
        run_preset("fig4_dashed", tmp_path / "b")
        assert ((tmp_path / "a" / "cee.csv").read_bytes()
                == (tmp_path / "b" / "cee.csv").read_bytes())


ONE_ATOM = """\
omega_a = 50.0
[atom.1]
z = 0.14137166941154069
gamma_l = 0.1
gamma_r = 0.3
[run]
t_end = 1.0
"""


class TestCli:
    def test_simulate_single_atom(self, tmp_path, capsys):
        cfg = tmp_path / "one.cfg"
        cfg.write_text(ONE_ATOM)
        out = tmp_path / "out"
        rc = main(["simulate", "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        captured = capsys.readouterr().out
        assert "classify:" in captured
        for f in ("amplitudes.csv", "field_snapshot.csv", "norm.csv",
                  "manifest.txt"):
            assert (out / f).exists()

    def test_simulate_two_atom_cascade(self, tmp_path, capsys):
        cfg = tmp_path / "two.cfg"
        cfg.write_text(GOOD)
        out = tmp_path / "out2"
        rc = main(["simulate", "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        assert "classify: TwoPhoton" in capsys.readouterr().out
        for f in ("cee.csv", "populations.csv", "spectra.csv",
                  "two_photon.csv", "norm.csv", "manifest.txt"):
            assert (out / f).exists()
        manifest = (out / "manifest.txt").read_text()
        assert "param.atom1.z = 0.1" in manifest
        assert "timestamp" in manifest

    def test_dt_too_large_is_surfaced(self, tmp_path, capsys):
        cfg = tmp_path / "two.cfg"
        cfg.write_text(GOOD)
        rc = main(["simulate", "--config", str(cfg), "--out",
                   str(tmp_path / "x"), "--dt", "0.05"])
        assert rc == 2
        assert "min(delay)/8" in capsys.readouterr().err

    def test_unknown_preset(self, capsys):
        rc = main(["preset", "nope", "--out", "/tmp/wq-nope"])
        assert rc == 2
        assert "unknown preset" in capsys.readouterr().err

    def test_preset_run(self, tmp_path, capsys):
        rc = main(["preset", "fig4_dashed", "--out", str(tmp_path / "d")])
        assert rc == 0
        assert (tmp_path / "d" / "cee.csv").exists()

    def test_parse_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("omega_a = fifty\n[atom.1]\nz=0.1\n")
        rc = main(["simulate", "--config", str(cfg), "--out",
                   str(tmp_path / "y")])
        assert rc == 2
        assert "fifty" in capsys.readouterr().err

    def test_verify_passing_scope_exit_zero(self, capsys):
        rc = main(["verify", "theorem4"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "checks passed" in out

    def test_verify_failing_scope_exit_nonzero(self, capsys):
        # the dark-state floor check is a documented honest failure, so the
        # scope must carry a nonzero exit status
        rc = main(["verify", "theorem3"])
        out = capsys.readouterr().out
        assert rc == 1
        assert "[FAIL]" in out

    def test_verify_unknown_scope(self, capsys):
        rc = main(["verify", "theoremX"])
        assert rc == 2

    def test_preset_plot_writes_svg(self, tmp_path):
        pytest.importorskip("matplotlib")
        rc = main(["preset", "fig4_dashed", "--out", str(tmp_path / "p"),
                   "--plot"])
        assert rc == 0
        assert (tmp_path / "p" / "cee.svg").exists()

    def test_console_script_help(self):
        proc = subprocess.run([sys.executable, "-m", "wqsim.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "simulate" in proc.stdout

    def test_thread_cap_env(self, tmp_path):
        cfg = tmp_path / "one.cfg"
        cfg.write_text(ONE_ATOM)
        proc = subprocess.run(
            [sys.executable, "-m", "wqsim.cli", "simulate", "--config",
             str(cfg), "--out", str(tmp_path / "o")],
            capture_output=True, text=True,
            env={"PATH": "/usr/bin:/bin", "WQSIM_THREADS": "1",
                 "HOME": "/root"})
        assert proc.returncode == 0, proc.stderr


class TestConfigFileApi:
    def test_parse_config_file(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text(GOOD)
        cfg, run = parse_config_file(p)
        assert cfg.omega_a == 50.0

    def test_settings_merge(self):
        s = RunSettings(t_end=1.0, dt=0.1)
        m = s.merged(dt=0.05, k_points=11)
        assert m.t_end == 1.0 and m.dt == 0.05 and m.k_points == 11
