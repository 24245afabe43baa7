from .OptimalLearner import OptimalLearner, LearnerConfig, train_optimal, voters_count
from .HannekeLearner import HannekeLearner, train_hanneke
from .BaggingLearner import BaggingLearner, train_bagging, bootstrap_count, bootstrap_size
from .PlainERMLearner import PlainERMLearner, train_plain_erm

__all__ = ("OptimalLearner", "LearnerConfig", "train_optimal", "voters_count",
           "HannekeLearner", "train_hanneke",
           "BaggingLearner", "train_bagging", "bootstrap_count", "bootstrap_size",
           "PlainERMLearner", "train_plain_erm")
