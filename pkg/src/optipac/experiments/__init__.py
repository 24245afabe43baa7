from .universes import (DISTRIBUTIONS, Distribution, adversarial_points, adversarial_witness, build_adversarial_universe,
                        degenerate_universe, discrete_threshold_table, finite_class_universe, make_distribution,
                        sample_dataset, threshold_universe)
from .sweep import LEARNERS, SweepSpec, build_learner, load_spec, run_error_sweep, run_trial, shape_compatible
from .perceptron_bench import CostReport, TrialRecord, run_perceptron_complexity

__all__ = ("DISTRIBUTIONS", "Distribution", "adversarial_points", "adversarial_witness", "build_adversarial_universe",
           "degenerate_universe", "discrete_threshold_table", "finite_class_universe", "make_distribution",
           "sample_dataset", "threshold_universe",
           "LEARNERS", "SweepSpec", "build_learner", "load_spec", "run_error_sweep", "run_trial", "shape_compatible",
           "CostReport", "TrialRecord", "run_perceptron_complexity")
