from __future__ import annotations
import os
from optipac.cli import main
from optipac.storage import loads


class TestBounds:
    def test_margin(self, capsys):
        assert main(["bounds", "--which", "margin", "--theta", "0.75", "--gamma", "0.45", "--t", "100"]) == 0
        out = capsys.readouterr().out
        assert "margin_loss_bound" in out and "per_round_base" in out

    def test_uniform_convergence(self, capsys):
        assert main(["bounds", "--which", "uc", "--d", "1", "--m", "550", "--delta", "0.5"]) == 0
        assert "0.0492" in capsys.readouterr().out

    def test_tail(self, capsys):
        assert main(["bounds", "--which", "tail", "--n", "12"]) == 0
        assert f"{0.83 ** 12:.6g}" in capsys.readouterr().out

    def test_complexity(self, capsys):
        assert main(["bounds", "--which", "complexity", "--d", "1", "--m", "1296", "--delta", "0.1"]) == 0
        assert "hanneke_training_calls" in capsys.readouterr().out

    def test_missing_parameter(self):
        assert main(["bounds", "--which", "margin"]) == 2

    def test_bad_params(self):
        assert main(["bounds", "--which", "uc", "--d", "1", "--m", "550", "--delta", "2"]) == 2
        assert main(["bounds", "--which", "tail", "--n", "0"]) == 2


class TestUsage:
    def test_unknown_flag(self):
        assert main(["bounds", "--which", "margin", "--bogus"]) == 2

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert "optipac" in capsys.readouterr().out

    def test_effective_configuration_first(self, capsys):
        main(["bounds", "--which", "tail", "--n", "3"])
        out = capsys.readouterr().out
        assert out.startswith('command = "bounds"')
        assert "[settings.boost]" in out


class TestVerify:
    def test_single_suite(self, capsys):
        assert main(["verify", "--suite", "subsample"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert any(line.startswith("subsample") and line.endswith("pass") for line in lines)
        assert not any(line.startswith("boost ") for line in lines)

    def test_unknown_suite(self):
        assert main(["verify", "--suite", "nope"]) == 2


class TestTrainEval:
    def test_plain_erm_round_trip(self, tmp_path, capsys):
        out_dir = str(tmp_path)
        assert main(["train", "--learner", "erm", "--m", "50", "--seed", "1", "--output-dir", out_dir, "--out", "erm.json"]) == 0
        path = os.path.join(out_dir, "erm.json")
        assert os.path.exists(path)
        assert "erm_train_calls" in capsys.readouterr().out
        assert main(["eval", "--model", path]) == 0
        assert "error" in capsys.readouterr().out

    def test_optimal_truncates(self, tmp_path):
        assert main(["train", "--learner", "optimal", "--m", "200", "--profile", "desk", "--seed", "7",
                     "--output-dir", str(tmp_path), "--out", "opt.json"]) == 0
        with open(tmp_path / "opt.json") as f:
            descriptor = loads(f.read())
        assert descriptor["m_input"] == 200 and descriptor["m_effective"] == 36
        assert descriptor["predictor"]["type"] == "ensemble"
        assert len(descriptor["predictor"]["voters"]) == descriptor["params"]["voters_l"]
        assert descriptor["ledger"]["erm_train_calls"] > 0

    def test_bagging_voters(self, tmp_path):
        assert main(["train", "--learner", "bagging", "--m", "100", "--delta", "0.1", "--output-dir", str(tmp_path), "--out", "bag.json"]) == 0
        with open(tmp_path / "bag.json") as f:
            assert len(loads(f.read())["predictor"]["voters"]) == 137

    def test_default_output_directory(self, output_dir):
        assert main(["train", "--learner", "erm", "--m", "20"]) == 0
        assert os.listdir(output_dir) == ["model-erm-threshold-m20-s0.json"]

    def test_unknown_profile(self, tmp_path):
        assert main(["train", "--m", "36", "--profile", "nope", "--output-dir", str(tmp_path)]) == 2

    def test_runtime_failure(self, tmp_path):
        bad = tmp_path / "model.json"
        bad.write_text("{}")
        assert main(["eval", "--model", str(bad), "--distribution", "threshold"]) == 1

    def test_bad_probability_flag(self, tmp_path):
        assert main(["train", "--m", "36", "--delta", "1.5", "--output-dir", str(tmp_path)]) == 2


class TestSweep:
    def test_small_sweep(self, tmp_path, capsys):
        args = ["sweep", "--distribution", "threshold", "--m", "36", "--seeds", "2", "--learners", "optimal", "erm",
                "--profile", "desk", "--output-dir", str(tmp_path), "--output", "mini"]
        assert main(args) == 0
        out = capsys.readouterr().out
        assert "mean_error" in out
        with open(tmp_path / "mini.csv") as f:
            assert len(f.read().splitlines()) == 1 + 2 * 2

    def test_incompatible_ladder(self, tmp_path):
        assert main(["sweep", "--m", "200", "--learners", "optimal", "--output-dir", str(tmp_path)]) == 2
