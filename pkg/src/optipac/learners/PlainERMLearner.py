from __future__ import annotations
from ..Learner import Learner, TrainReport
from ..core import TrainingSequence
from ..ledger import CostLedger

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from ..Oracle import ErmOracle, Hypothesis


class PlainERMLearner(Learner):
    """A single ERM call on all of S."""

    cli_name = "erm"

    def _fit(self, S: TrainingSequence, erm: ErmOracle) -> TrainReport:
        ledger = CostLedger()
        h = erm.train(S, ledger)
        h.provenance = {"sample_size": len(S), "fallback": False}
        return TrainReport(h, ledger, len(S), len(S))


def train_plain_erm(S: TrainingSequence, erm: ErmOracle) -> Hypothesis:
    return PlainERMLearner().fit(S, erm).predictor  # type: ignore[return-value]
