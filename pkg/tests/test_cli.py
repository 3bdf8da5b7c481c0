import json
import subprocess
import sys

import numpy as np
import pytest
from conftest import random_density

from entrosteer import (
    basis_sweep,
    entropic_sumdiff_cv,
    reid_sumdiff_cv,
    singlet_state,
    tmsv,
    walborn_cv,
    werner_state,
)
from entrosteer.cli import load_state, main, save_state


def run(tmp_path, *argv):
    out = tmp_path / "out.dat"
    code = main([*argv, "--out", str(out)])
    return code, out


class TestStateFiles:
    def test_round_trip_exact(self, tmp_path, rng):
        rho = random_density(rng, 2, 3)
        path = tmp_path / "state.json"
        save_state(str(path), rho)
        back = load_state(str(path))
        assert back.dims == (2, 3)
        assert np.array_equal(back.mat, rho.mat)

    def test_layout(self, tmp_path):
        path = tmp_path / "w.json"
        save_state(str(path), werner_state(0.8))
        data = json.loads(path.read_text())
        assert data["dims"] == [2, 2]
        assert len(data["matrix"]) == 4
        re, im = data["matrix"][0][0]
        assert abs(re - 0.05) < 1e-15 and im == 0.0

    def test_load_errors_are_config_errors(self, tmp_path):
        from entrosteer.cli import ConfigError

        bad = tmp_path / "bad.json"
        bad.write_text('{"dims": [2, 2]}')
        with pytest.raises(ConfigError):
            load_state(str(bad))
        with pytest.raises(ConfigError):
            load_state(str(tmp_path / "missing.json"))


class TestFig1Command:
    def test_csv_shape(self, tmp_path):
        code, out = run(tmp_path, "fig1", "--n", "40", "--seed", "7")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "state_id,v_conditional_AtoB,v_symmetric,purity"
        assert len(lines) == 41
        first = lines[1].split(",")
        assert first[0] == "0"
        assert all(np.isfinite(float(v)) for v in first[1:])

    def test_byte_identical_reruns_and_threads(self, tmp_path):
        args = ["fig1", "--n", "150", "--seed", "11"]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        c = tmp_path / "c.csv"
        assert main([*args, "--threads", "1", "--out", str(a)]) == 0
        assert main([*args, "--threads", "1", "--out", str(b)]) == 0
        assert main([*args, "--threads", "4", "--out", str(c)]) == 0
        assert a.read_bytes() == b.read_bytes() == c.read_bytes()

    def test_seed_changes_output(self, tmp_path):
        _, a = run(tmp_path, "fig1", "--n", "20", "--seed", "1")
        text_a = a.read_text()
        _, b = run(tmp_path, "fig1", "--n", "20", "--seed", "2")
        assert text_a != b.read_text()

    def test_json_format_matches_csv(self, tmp_path):
        code, out = run(tmp_path, "fig1", "--n", "10", "--seed", "3",
                        "--format", "json")
        assert code == 0
        rows = json.loads(out.read_text())
        assert len(rows) == 10
        assert set(rows[0]) == {"state_id", "v_conditional_AtoB", "v_symmetric",
                                "purity"}

    def test_stdout_when_no_out(self, capsys):
        assert main(["fig1", "--n", "5", "--seed", "4"]) == 0
        captured = capsys.readouterr().out
        assert captured.startswith("state_id,")
        assert len(captured.splitlines()) == 6


class TestManifest:
    def test_written_next_to_out(self, tmp_path):
        out = tmp_path / "survey.csv"
        assert main(["fig1", "--n", "8", "--seed", "5", "--out", str(out)]) == 0
        manifest = json.loads((tmp_path / "survey.manifest.json").read_text())
        assert manifest["command"] == "fig1"
        assert manifest["seed"] == 5
        assert manifest["parameters"]["n_states"] == 8
        assert set(manifest["versions"]) == {"entrosteer", "numpy", "python"}
        assert manifest["wall_time_s"] >= 0

    def test_not_written_for_stdout(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["fig1", "--n", "5"]) == 0
        assert list(tmp_path.glob("*.manifest.json")) == []

    def test_not_written_on_failure(self, tmp_path):
        out = tmp_path / "t.json"
        code = main(["werner-threshold", "--lo", "0.9", "--hi", "0.95",
                     "--out", str(out)])
        assert code == 1
        assert not (tmp_path / "t.manifest.json").exists()


class TestFig2Command:
    def test_csv_shape(self, tmp_path):
        code, out = run(tmp_path, "fig2", "--n", "4", "--trials", "40",
                        "--seed", "9")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "state_id,best_v_AtoB,best_v_BtoA,purity"
        assert len(lines) == 5

    def test_threads_do_not_change_bytes(self, tmp_path):
        args = ["fig2", "--n", "6", "--trials", "30", "--seed", "10"]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert main([*args, "--threads", "1", "--out", str(a)]) == 0
        assert main([*args, "--threads", "3", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestSweepCommand:
    def test_default_werner(self, tmp_path):
        code, out = run(tmp_path, "sweep", "--n", "25", "--seed", "12")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "trial_id,v_AtoB,v_BtoA"
        assert len(lines) == 26
        for line in lines[1:]:
            _, v_ab, v_ba = line.split(",")
            assert abs(float(v_ab) - float(v_ba)) < 1e-9

    def test_matches_library_sweep(self, tmp_path):
        code, out = run(tmp_path, "sweep", "--n", "20", "--seed", "13",
                        "--werner", "0.8")
        assert code == 0
        want = basis_sweep(werner_state(0.8), 20, np.random.default_rng(13))
        lines = out.read_text().splitlines()[1:]
        for line, (v_ab, v_ba) in zip(lines, want):
            _, got_ab, got_ba = line.split(",")
            assert abs(float(got_ab) - v_ab) < 1e-9
            assert abs(float(got_ba) - v_ba) < 1e-9

    def test_state_file_input(self, tmp_path):
        path = tmp_path / "singlet.json"
        save_state(str(path), singlet_state().to_density())
        code, out = run(tmp_path, "sweep", "--n", "30", "--seed", "14",
                        "--state-file", str(path))
        assert code == 0
        best = max(float(l.split(",")[1]) for l in out.read_text().splitlines()[1:])
        assert best > 0.5

    def test_bad_werner_parameter(self, tmp_path):
        code, _ = run(tmp_path, "sweep", "--n", "5", "--werner", "1.5")
        assert code == 2


class TestWernerThresholdCommand:
    def test_two_settings(self, tmp_path):
        code, out = run(tmp_path, "werner-threshold", "--settings", "2",
                        "--tol", "1e-7")
        assert code == 0
        data = json.loads(out.read_text())
        assert abs(data["p_star"] - 0.7799442711232785) < 1e-5
        assert data["settings"] == 2
        assert data["witness"] == "pair-conditional"

    def test_three_settings(self, tmp_path):
        code, out = run(tmp_path, "werner-threshold", "--settings", "3",
                        "--tol", "1e-7")
        assert code == 0
        data = json.loads(out.read_text())
        assert abs(data["p_star"] - 0.6520953371812113) < 1e-5
        assert data["witness"] == "mub-conditional"

    def test_no_bracket_exits_one(self, tmp_path):
        code, _ = run(tmp_path, "werner-threshold", "--lo", "0.9", "--hi", "0.95")
        assert code == 1

    def test_rejects_csv_format(self, tmp_path):
        code, _ = run(tmp_path, "werner-threshold", "--format", "csv")
        assert code == 2


class TestCvScanCommand:
    def test_rows_match_library(self, tmp_path):
        code, out = run(tmp_path, "cv-scan", "--r-min", "0", "--r-max", "2",
                        "--steps", "5")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "r,v_walborn,v_reid,v_entropic_sumdiff"
        assert len(lines) == 6
        for line in lines[1:]:
            r, vw, vr, ve = (float(v) for v in line.split(","))
            state = tmsv(r)
            assert abs(vw - walborn_cv(state).violation_bits) < 1e-9
            assert abs(vr - reid_sumdiff_cv(state).violation_bits) < 1e-9
            assert abs(ve - entropic_sumdiff_cv(state).violation_bits) < 1e-9

    def test_rejects_bad_range(self, tmp_path):
        code, _ = run(tmp_path, "cv-scan", "--r-min", "2", "--r-max", "1")
        assert code == 2


class TestEvalCommand:
    def test_werner_mub_conditional(self, tmp_path):
        path = tmp_path / "w08.json"
        save_state(str(path), werner_state(0.8))
        code, out = run(tmp_path, "eval", "--state-file", str(path),
                        "--witness", "mub-conditional")
        assert code == 0
        data = json.loads(out.read_text())
        assert abs(data["violation_bits"] - 0.5930132192321567) < 1e-9
        assert data["name"] == "mub_conditional"
        assert data["direction"] == "AtoB"

    def test_all_witnesses_run_on_singlet(self, tmp_path):
        path = tmp_path / "singlet.json"
        save_state(str(path), singlet_state().to_density())
        for witness, violation in [
            ("pair-conditional", 1.0),
            ("pair-symmetric-mi", 1.0),
            ("mub-conditional", 2.0),
            ("mub-mi", 2.0),
            ("sumdiff-discrete", 1.0),
        ]:
            code, out = run(tmp_path, "eval", "--state-file", str(path),
                            "--witness", witness)
            assert code == 0
            data = json.loads(out.read_text())
            assert abs(data["violation_bits"] - violation) < 1e-9, witness

    def test_missing_state_file(self, tmp_path):
        code, _ = run(tmp_path, "eval", "--state-file",
                      str(tmp_path / "nope.json"), "--witness", "mub-mi")
        assert code == 2

    def test_witness_not_applicable(self, tmp_path, rng):
        path = tmp_path / "rect.json"
        save_state(str(path), random_density(rng, 2, 3))
        code, _ = run(tmp_path, "eval", "--state-file", str(path),
                      "--witness", "pair-symmetric-mi")
        assert code == 2


class TestSeparableAuditCommand:
    def test_small_audit_is_sound(self, tmp_path):
        code, out = run(tmp_path, "separable-audit", "--n", "200", "--seed", "17")
        assert code == 0
        data = json.loads(out.read_text())
        assert data["sound"] is True
        assert data["ppt_min_eigenvalue"] >= -1e-12
        assert len(data["max_violation"]) == 9
        assert all(v <= 1e-9 for v in data["max_violation"].values())


class TestSeedResolution:
    def test_env_seed_used(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ENTROSTEER_SEED", "11")
        _, a = run(tmp_path, "fig1", "--n", "15")
        text_env = a.read_text()
        monkeypatch.delenv("ENTROSTEER_SEED")
        _, b = run(tmp_path, "fig1", "--n", "15", "--seed", "11")
        assert text_env == b.read_text()

    def test_flag_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ENTROSTEER_SEED", "99")
        _, a = run(tmp_path, "fig1", "--n", "15", "--seed", "11")
        text_flag = a.read_text()
        monkeypatch.delenv("ENTROSTEER_SEED")
        _, b = run(tmp_path, "fig1", "--n", "15", "--seed", "11")
        assert text_flag == b.read_text()

    def test_bad_env_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ENTROSTEER_SEED", "eleven")
        code, _ = run(tmp_path, "fig1", "--n", "5")
        assert code == 2

    def test_default_seed_is_zero(self, tmp_path):
        _, a = run(tmp_path, "fig1", "--n", "10")
        text_default = a.read_text()
        _, b = run(tmp_path, "fig1", "--n", "10", "--seed", "0")
        assert text_default == b.read_text()


class TestValidation:
    def test_zero_states_rejected(self, tmp_path):
        code, _ = run(tmp_path, "fig1", "--n", "0")
        assert code == 2

    def test_zero_threads_rejected(self, tmp_path):
        code, _ = run(tmp_path, "fig1", "--n", "5", "--threads", "0")
        assert code == 2


class TestModuleEntryPoint:
    def test_python_dash_m(self, tmp_path):
        out = tmp_path / "m.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "entrosteer", "fig1", "--n", "5",
             "--seed", "2", "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert out.read_text().startswith("state_id,")
