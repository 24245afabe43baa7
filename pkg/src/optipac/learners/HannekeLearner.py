from __future__ import annotations
from ..Learner import Learner, TrainReport
from ..core import MajorityVote, TrainingSequence
from ..ledger import CostLedger
from ..subsample import enumerate_rows_hanneke

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from ..Oracle import ErmOracle


class HannekeLearner(Learner):
    """Hanneke's deterministic subsampling baseline: one ERM per row of the four-way recursion, 3^k voters,
    combined by an unweighted majority vote."""

    cli_name = "hanneke"
    shape_base = 4

    def prepare(self, S: TrainingSequence) -> TrainingSequence:
        # 1 to 3 examples is the recursion's base case, so those sizes pass through untouched
        if 1 <= len(S) <= 3:
            return S
        return super().prepare(S)

    def _fit(self, S: TrainingSequence, erm: ErmOracle) -> TrainReport:
        ledger = CostLedger()
        voters = []
        for i, row in enumerate(enumerate_rows_hanneke(S)):
            h = erm.train(row, ledger)
            h.provenance = {"row": i, "sample_size": len(row), "fallback": False}
            voters.append(h)
        return TrainReport(MajorityVote(voters), ledger, len(S), len(S), params={"rows": len(voters)})


def train_hanneke(S: TrainingSequence, erm: ErmOracle) -> MajorityVote:
    return HannekeLearner().fit(S, erm).predictor  # type: ignore[return-value]
