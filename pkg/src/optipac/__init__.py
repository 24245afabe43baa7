__version__ = "0.1.0"
__version_info__ = tuple(int(i) for i in __version__.split(".") if i.isdigit())

from .settings import settings
from .log import log
from . import util
from .errors import OptipacError, BadShape, BadParams, NotRealizable, NonConvergence, StreamExhausted, NotSerializable
from .ledger import CostLedger
from .core import LabeledExample, TrainingSequence, MajorityVote, Ensemble, vote_margin, empirical_margin_loss, predict_ensemble
from .Oracle import ErmOracle, Hypothesis
from .oracles import ThresholdERM, FiniteClassERM, PerceptronERM, perceptron_update_count
from .boost import BoostConfig, RandomString, adaboost_sample, inverse_cdf, margin_loss_bound, round_success_tail
from .Learner import Learner, TrainReport
from .learners import LearnerConfig, train_optimal, train_hanneke, train_bagging, train_plain_erm

__all__ = ("settings", "log", "util",
           "OptipacError", "BadShape", "BadParams", "NotRealizable", "NonConvergence", "StreamExhausted", "NotSerializable",
           "CostLedger", "LabeledExample", "TrainingSequence", "MajorityVote", "Ensemble",
           "vote_margin", "empirical_margin_loss", "predict_ensemble",
           "ErmOracle", "Hypothesis", "ThresholdERM", "FiniteClassERM", "PerceptronERM", "perceptron_update_count",
           "BoostConfig", "RandomString", "adaboost_sample", "inverse_cdf", "margin_loss_bound", "round_success_tail",
           "Learner", "TrainReport", "LearnerConfig", "train_optimal", "train_hanneke", "train_bagging", "train_plain_erm")
