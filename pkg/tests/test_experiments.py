from __future__ import annotations
import math
import numpy as np
import pytest
from optipac.errors import BadParams
from optipac.experiments import (DISTRIBUTIONS, SweepSpec, adversarial_witness, build_adversarial_universe, build_learner,
                                 discrete_threshold_table, finite_class_universe, load_spec, make_distribution, run_error_sweep,
                                 run_perceptron_complexity, run_trial, sample_dataset, shape_compatible, threshold_universe)
from optipac.experiments.sweep import with_overrides
from optipac.learners import BaggingLearner, HannekeLearner, OptimalLearner, PlainERMLearner
from optipac.oracles import FiniteClassERM
from optipac.storage import ResultStore


class TestUniverses:
    def test_threshold_grid(self):
        u = threshold_universe(10)
        assert u.points.tolist() == pytest.approx([(j + 0.5) / 10 for j in range(10)])
        assert u.concept.tolist() == [-1] * 5 + [1] * 5

    def test_discrete_table(self):
        table = discrete_threshold_table(4)
        assert table.shape == (10, 4)
        assert table[0].tolist() == [-1, -1, -1, -1]
        assert table[5 + 2].tolist() == [-1, -1, 1, 1]

    def test_finite_concept_is_late_in_scan(self):
        universe, table = finite_class_universe(64)
        position = next(i for i, row in enumerate(table) if np.array_equal(row, universe.concept))
        assert position == 65 + 32

    def test_finite_erm_on_finite_universe(self):
        universe, table = finite_class_universe(16)
        S = sample_dataset(universe, 30, 0)
        h = FiniteClassERM(table).train(S)
        assert np.array_equal(h.predict(S.X), S.y)


class TestAdversarialUniverse:
    def test_geometry(self):
        m = 1000
        universe = build_adversarial_universe(m)
        X = universe.points
        assert math.fsum(universe.probs) == pytest.approx(1.0, abs=1e-12)
        assert universe.probs[-1] == pytest.approx(250 / m)
        assert np.allclose(X[:-1] @ X[-1], 2 - np.arange(1, m) / m ** 4)
        assert universe.concept.tolist().count(1) == 1

    def test_witness_margin(self):
        m = 2200
        universe = build_adversarial_universe(m)
        w = adversarial_witness(m)
        margin = np.min(universe.concept * (universe.points @ w)) / np.linalg.norm(w)
        assert margin >= math.sqrt(1 / (64 * m))

    @pytest.mark.parametrize("m", [9, 250, 10_001])
    def test_rejected_sizes(self, m):
        with pytest.raises(BadParams):
            build_adversarial_universe(m)


class TestSampling:
    def test_seeded(self):
        u = threshold_universe(1000)
        assert np.array_equal(sample_dataset(u, 50, 1).indices, sample_dataset(u, 50, 1).indices)
        assert not np.array_equal(sample_dataset(u, 50, 1).indices, sample_dataset(u, 50, 2).indices)
        assert not np.array_equal(sample_dataset(u, 50, 1, 0).indices, sample_dataset(u, 50, 1, 1).indices)

    def test_labels_follow_concept(self):
        u = threshold_universe(1000)
        S = sample_dataset(u, 200, 3)
        assert np.array_equal(S.y, u.concept[S.indices])

    def test_rare_positive_count_concentrates(self):
        m = 2200
        universe = build_adversarial_universe(m)
        counts = [int(np.sum(sample_dataset(universe, m, seed).indices == m - 1)) for seed in range(30)]
        # x_m has mass 250/m, so each sample holds 250 copies on average
        assert all(abs(c - 250) <= 3 * math.sqrt(250) for c in counts)

    def test_bad_size(self):
        with pytest.raises(BadParams):
            sample_dataset(threshold_universe(10), 0, 0)

    def test_distribution_lookup(self):
        assert set(DISTRIBUTIONS) == {"threshold", "degenerate", "finite", "perceptron"}
        assert make_distribution("perceptron", 1000).d == 3
        with pytest.raises(BadParams):
            make_distribution("nope", 10)


class TestSweepSpec:
    def test_defaults(self):
        spec = SweepSpec()
        assert spec.jobs() == sorted(spec.jobs())
        assert len(spec.jobs()) == 2 * 5

    def test_shape_checks(self):
        assert shape_compatible("optimal", 216) and not shape_compatible("optimal", 200)
        assert shape_compatible("hanneke", 3) and shape_compatible("hanneke", 64) and not shape_compatible("hanneke", 48)
        assert shape_compatible("bagging", 17)
        with pytest.raises(BadParams):
            SweepSpec(m=(200,))

    def test_ladders(self):
        spec = SweepSpec(m=(36,), learners=("optimal", "hanneke"), ladders={"hanneke": (16, 64)})
        assert spec.ladder("hanneke") == (16, 64)
        assert spec.ladder("optimal") == (36,)
        with pytest.raises(BadParams):
            SweepSpec(m=(36,), learners=("optimal",), ladders={"hanneke": (16,)})

    def test_validation(self):
        with pytest.raises(BadParams):
            SweepSpec(distribution="nope")
        with pytest.raises(BadParams):
            SweepSpec(learners=("nope",))
        with pytest.raises(BadParams):
            SweepSpec(seeds=())

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "sweep.toml"
        path.write_text('distribution = "threshold"\nm = [36, 216]\nseeds = 3\nlearners = ["optimal", "erm"]\nprofile = "desk"\n')
        spec = load_spec(str(path), {"delta": 0.2})
        assert spec.m == (36, 216) and spec.seeds == (0, 1, 2) and spec.delta == 0.2
        assert spec.learners == ("optimal", "erm")

    def test_load_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "sweep.toml"
        path.write_text('distribution = "threshold"\nbogus = 1\n')
        with pytest.raises(BadParams):
            load_spec(str(path))

    def test_load_rejects_bad_values(self):
        with pytest.raises(BadParams):
            load_spec(None, {"delta": 2.0})

    def test_with_overrides(self):
        spec = with_overrides(SweepSpec(), profile="full", d=None)
        assert spec.profile == "full" and spec.d is None

    def test_build_learner(self):
        assert isinstance(build_learner("optimal", delta=0.1, d=1, seed=0), OptimalLearner)
        assert isinstance(build_learner("hanneke", delta=0.1, d=1, seed=0), HannekeLearner)
        assert isinstance(build_learner("bagging", delta=0.1, d=1, seed=0), BaggingLearner)
        assert isinstance(build_learner("erm", delta=0.1, d=1, seed=0), PlainERMLearner)
        with pytest.raises(BadParams):
            build_learner("nope", delta=0.1, d=1, seed=0)


class TestErrorSweep:
    @pytest.fixture(scope="class")
    def rows(self):
        spec = SweepSpec(distribution="threshold", m=(36,), seeds=(0, 1), learners=("optimal", "erm"), profile="desk")
        return spec, run_error_sweep(spec)

    def test_rows(self, rows):
        spec, out = rows
        assert [(r["learner"], r["m"], r["seed"]) for r in out] == spec.jobs()
        assert all(0 <= r["error"] <= 1 for r in out)
        assert all(r["fallbacks"] == 0 for r in out)
        assert all("failure" not in r for r in out)

    def test_deterministic_apart_from_timing(self, rows):
        spec, out = rows
        again = run_error_sweep(spec)
        strip = lambda rs: [{k: v for k, v in r.items() if k != "wall_ms"} for r in rs]
        assert strip(again) == strip(out)

    def test_rows_are_byte_identical(self, tmp_path):
        spec = SweepSpec(distribution="threshold", m=(36,), seeds=(0,), learners=("erm",))
        paths = [ResultStore(str(tmp_path / run)).append_rows("sweep", run_error_sweep(spec)) for run in ("a", "b")]
        for first, second in zip(*paths):
            with open(first, "rb") as a, open(second, "rb") as b:
                assert a.read() == b.read()

    def test_failed_trial_is_recorded(self):
        spec = SweepSpec(distribution="perceptron", m=(36,), seeds=(0,), learners=("optimal",), profile="desk")
        row = run_trial(spec, "optimal", 36, 0)
        assert "failure" in row and math.isnan(row["error"])


class TestPerceptronBench:
    def test_minimum_size(self):
        with pytest.raises(BadParams):
            run_perceptron_complexity(1000, 1, 0)

    def test_bad_counts(self):
        with pytest.raises(BadParams):
            run_perceptron_complexity(2200, 0, 0)

    @pytest.mark.slow
    def test_small_run(self):
        report = run_perceptron_complexity(2200, 2, 0)
        assert len(report.trials) == 2
        assert report.derived["trials_ok"] == 2
        assert report.derived["boosted_within_cap"]
        assert report.ledgers["boosted"].train_sizes.keys() <= {2200}
        assert report.to_dict()["cost_proxy"] == "perceptron updates + examples scanned"
