from .ThresholdERM import ThresholdERM, ThresholdHypothesis
from .FiniteClassERM import FiniteClassERM, FiniteClassHypothesis
from .PerceptronERM import PerceptronERM, PerceptronHypothesis, PerceptronRun, perceptron_update_count

__all__ = ("ThresholdERM", "ThresholdHypothesis",
           "FiniteClassERM", "FiniteClassHypothesis",
           "PerceptronERM", "PerceptronHypothesis", "PerceptronRun", "perceptron_update_count")
