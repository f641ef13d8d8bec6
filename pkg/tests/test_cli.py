import csv
import json
import math
import subprocess
import sys

import pytest

from dirsim.cli import main


def small_config(tmp_path, **kw):
    cfg = {
        "ue_region": [900.0, 1100.0, 900.0, 1100.0],
        "num_ues_x": 3,
        "num_ues_y": 3,
        "num_irs": 2,
        "elements_per_irs": 8,
        "paths": 2,
        "link_budget_db": 0.0,
        "slots": 300,
        "master_seed": 77,
        "normalize_pathloss": True,
    }
    cfg.update(kw)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestDesign:
    def test_power_of_two(self, capsys):
        assert main(["design", "128", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["m_star"] == 2 and out["s_star"] == 64
        assert out["delta_star"] == pytest.approx(1.0 / 7.0)

    def test_saturated(self, capsys):
        assert main(["design", "64", "200"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out == {"delta_star": 1.0, "m_star": 64, "s_star": 1}

    def test_perfect_square(self, capsys):
        assert main(["design", "1024", "32"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert (out["delta_star"], out["m_star"], out["s_star"]) == (0.5, 32, 32)

    def test_non_numeric_input_exit_2(self):
        result = subprocess.run(
            [sys.executable, "-m", "dirsim", "design", "128", "two"],
            capture_output=True, text=True)
        assert result.returncode == 2


class TestSweepSe:
    def test_csv_schema_and_rows(self, tmp_path):
        cfg = small_config(tmp_path)
        out = tmp_path / "out"
        code = main(["sweep-se", "--config", str(cfg), "--n", "8", "16",
                     "--s", "1", "2", "--out-dir", str(out)])
        assert code == 0
        rows = read_csv(out / "sweep_se.csv")
        assert rows[0] == ["N", "S", "M", "se_x_mc", "se_x_cf", "se_y_mc",
                           "se_y_cf", "stderr_x", "stderr_y"]
        assert len(rows) == 1 + 4
        assert rows[1][:3] == ["8", "1", "8"]
        manifest = json.loads((out / "sweep_se.manifest.json").read_text())
        assert manifest["command"] == "sweep-se"
        assert manifest["outputs"] == ["sweep_se.csv"]
        assert manifest["seed"] == 77

    def test_indivisible_grid_exit_2(self, tmp_path):
        cfg = small_config(tmp_path)
        code = main(["sweep-se", "--config", str(cfg), "--n", "8",
                     "--s", "3", "--out-dir", str(tmp_path / "o")])
        assert code == 2

    def test_invalid_config_exit_1(self, tmp_path):
        bad = small_config(tmp_path, elements_per_irs=0)
        code = main(["sweep-se", "--config", str(bad), "--n", "8",
                     "--s", "1", "--out-dir", str(tmp_path / "o")])
        assert code == 1

    def test_unknown_config_key_exit_1(self, tmp_path):
        bad = small_config(tmp_path, bogus_knob=3)
        code = main(["sweep-se", "--config", str(bad), "--n", "8",
                     "--s", "1", "--out-dir", str(tmp_path / "o")])
        assert code == 1

    def test_empty_n_list_exit_2(self):
        result = subprocess.run(
            [sys.executable, "-m", "dirsim", "sweep-se", "--n", "--s", "1"],
            capture_output=True, text=True)
        assert result.returncode == 2

    def test_seed_flag_overrides_config(self, tmp_path):
        cfg = small_config(tmp_path)
        out_a, out_b, out_c = (tmp_path / x for x in ("a", "b", "c"))
        for out, seed in ((out_a, "5"), (out_b, "5"), (out_c, "6")):
            main(["sweep-se", "--config", str(cfg), "--n", "8", "--s", "2",
                  "--seed", seed, "--out-dir", str(out)])
        bytes_a = (out_a / "sweep_se.csv").read_bytes()
        assert bytes_a == (out_b / "sweep_se.csv").read_bytes()
        assert bytes_a != (out_c / "sweep_se.csv").read_bytes()

    def test_no_irs_rows_supported(self, tmp_path):
        cfg = small_config(tmp_path)
        out = tmp_path / "out"
        assert main(["sweep-se", "--config", str(cfg), "--n", "8",
                     "--s", "0", "--out-dir", str(out)]) == 0
        rows = read_csv(out / "sweep_se.csv")
        assert rows[1][:3] == ["8", "0", "0"]

    def test_out_dir_env_override(self, tmp_path, monkeypatch):
        cfg = small_config(tmp_path)
        env_dir = tmp_path / "from_env"
        monkeypatch.setenv("DIRSIM_OUT_DIR", str(env_dir))
        assert main(["sweep-se", "--config", str(cfg), "--n", "8", "--s", "1"]) == 0
        assert (env_dir / "sweep_se.csv").exists()


class TestOutageCmd:
    def test_csv_schema(self, tmp_path):
        cfg = small_config(tmp_path, num_irs=2, elements_per_irs=8)
        out = tmp_path / "out"
        code = main(["outage", "--config", str(cfg), "--s", "1", "2",
                     "--delta", "0.25", "--rho", "0.5", "--trials", "400",
                     "--out-dir", str(out)])
        assert code == 0
        rows = read_csv(out / "outage.csv")
        assert rows[0] == ["S", "delta", "L", "p_out_mc", "ci_lo", "ci_hi",
                           "p_out_cf"]
        assert len(rows) == 3

    def test_zero_threshold_all_zero(self, tmp_path):
        cfg = small_config(tmp_path)
        out = tmp_path / "out"
        main(["outage", "--config", str(cfg), "--s", "1", "--delta", "0.5",
              "--rho", "0", "--trials", "200", "--out-dir", str(out)])
        rows = read_csv(out / "outage.csv")
        assert float(rows[1][3]) == 0.0

    def test_single_point_single_row(self, tmp_path):
        cfg = small_config(tmp_path)
        out = tmp_path / "out"
        main(["outage", "--config", str(cfg), "--s", "2", "--delta", "0.3",
              "--trials", "200", "--out-dir", str(out)])
        assert len(read_csv(out / "outage.csv")) == 2

    def test_negative_rho_exit_2(self, tmp_path):
        cfg = small_config(tmp_path)
        code = main(["outage", "--config", str(cfg), "--s", "1",
                     "--delta", "0.5", "--rho", "-1", "--trials", "10",
                     "--out-dir", str(tmp_path / "o")])
        assert code == 2


class TestPrelogCmd:
    def test_csv_schema_and_s_star(self, tmp_path):
        cfg = small_config(tmp_path, num_irs=4, elements_per_irs=4, slots=400)
        out = tmp_path / "out"
        code = main(["prelog", "--config", str(cfg), "--s", "0", "4",
                     "--delta", "0.25", "--out-dir", str(out)])
        assert code == 0
        rows = read_csv(out / "prelog.csv")
        assert rows[0] == ["S", "delta", "tau_oob", "tau_inband", "s_star"]
        # L = round(16**0.25) = 2 so s_star = 8.
        assert rows[1][4] == "8"

    def test_no_irs_row_zero_tau(self, tmp_path):
        cfg = small_config(tmp_path, num_irs=4, elements_per_irs=4)
        out = tmp_path / "out"
        main(["prelog", "--config", str(cfg), "--s", "0", "--delta", "0.5",
              "--out-dir", str(out)])
        row = read_csv(out / "prelog.csv")[1]
        assert float(row[2]) == 0.0 and float(row[3]) == 0.0

    def test_tau_inband_near_two_at_unit_snr(self, tmp_path):
        # Unit losses and snr keep the SE offset term small, so the in-band
        # prelog ratio sits near its growth rate of 2.
        cfg = small_config(tmp_path, num_irs=4, elements_per_irs=32,
                           num_ues_x=2, num_ues_y=2, slots=2000)
        out = tmp_path / "out"
        main(["prelog", "--config", str(cfg), "--s", "1", "4",
              "--delta", str(1 / 7), "--out-dir", str(out)])
        rows = read_csv(out / "prelog.csv")
        for row in rows[1:]:
            assert 1.7 <= float(row[3]) <= 2.2


class TestValidateCmd:
    def test_default_config_passes(self, tmp_path, capsys):
        cfg = small_config(tmp_path, num_irs=2, elements_per_irs=16)
        assert main(["validate", "--config", str(cfg)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4
        assert all(line.startswith("PASS") for line in lines)

    def test_corrupted_config_exit_1(self, tmp_path):
        bad = small_config(tmp_path, elements_per_irs=0)
        assert main(["validate", "--config", str(bad)]) == 1

    def test_tampered_tolerance_exit_3(self, tmp_path, capsys):
        cfg = small_config(tmp_path)
        assert main(["validate", "--config", str(cfg),
                     "--identity-tol", "0"]) == 3
        out = capsys.readouterr().out
        assert "FAIL" in out


class TestReproducibility:
    def test_rerun_from_manifest_is_bit_exact(self, tmp_path):
        cfg = small_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["sweep-se", "--config", str(cfg), "--n", "16", "--s", "2",
              "--out-dir", str(out_a)])
        manifest = json.loads((out_a / "sweep_se.manifest.json").read_text())
        replay = tmp_path / "replay.json"
        replay.write_text(json.dumps(manifest["config"]))
        main(["sweep-se", "--config", str(replay), "--n", "16", "--s", "2",
              "--seed", str(manifest["seed"]), "--out-dir", str(out_b)])
        assert (out_a / "sweep_se.csv").read_bytes() == (out_b / "sweep_se.csv").read_bytes()

    def test_full_precision_floats_in_csv(self, tmp_path):
        cfg = small_config(tmp_path)
        out = tmp_path / "out"
        main(["sweep-se", "--config", str(cfg), "--n", "8", "--s", "1",
              "--out-dir", str(out)])
        row = read_csv(out / "sweep_se.csv")[1]
        value = float(row[3])
        assert repr(value) == row[3]
        assert not math.isnan(value)
