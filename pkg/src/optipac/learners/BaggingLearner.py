from __future__ import annotations
from typing import Any
import math
from ..Learner import Learner, TrainReport
from ..core import MajorityVote, TrainingSequence
from ..errors import BadParams
from ..ledger import CostLedger
from ..settings import settings
from ..util import derive_rng

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from ..Oracle import ErmOracle


def bootstrap_count(m: int, delta: float) -> int:
    """n' = ⌈18·ln(2m/δ)⌉."""
    return math.ceil(18 * math.log(2 * m / delta))


def bootstrap_size(m: int, frac: float) -> int:
    return max(1, math.ceil(frac * m))


class BaggingLearner(Learner):
    """Bagging baseline: n' bootstrap samples of size ⌈frac·m⌉ drawn with replacement, one ERM each,
    combined by an unweighted majority vote."""

    cli_name = "bagging"

    default_settings = {
        "frac": 1.0,
    }

    def __init__(self, delta: float | None = None, frac: float | None = None, seed: int | None = None,
                 name: str | None = None, overrides: dict[str, Any] | None = None) -> None:
        super().__init__(name, overrides)
        self.delta = settings.learner.delta if delta is None else delta
        self.seed = settings.learner.seed if seed is None else seed
        self._frac = frac
        if not 0 < self.delta < 1:
            raise BadParams(f"delta must lie in (0, 1), not {self.delta}.")
        if not 0.02 <= self.frac <= 1:
            raise BadParams(f"frac must lie in [0.02, 1], not {self.frac}.")

    @property
    def frac(self) -> float:
        return self.settings.frac if self._frac is None else self._frac

    def validate_settings(self) -> None:
        assert 0.02 <= self.settings.frac <= 1, "frac must lie in [0.02, 1]."

    def bootstraps(self, m: int) -> list[Any]:
        """The index arrays of every bootstrap sample (0-based, uniform over S's positions)."""
        rng = derive_rng(self.seed, 2)
        return list(rng.integers(0, m, size=(bootstrap_count(m, self.delta), bootstrap_size(m, self.frac))))

    def _fit(self, S: TrainingSequence, erm: ErmOracle) -> TrainReport:
        m = len(S)
        ledger = CostLedger()
        voters = []
        samples = self.bootstraps(m)
        for i, idx in enumerate(samples):
            ledger.sampler_draws += len(idx)
            h = erm.train(S.view(idx), ledger)
            h.provenance = {"bootstrap": i, "sample_size": len(idx), "fallback": False}
            voters.append(h)
        return TrainReport(MajorityVote(voters), ledger, m, m,
                           params={"delta": self.delta, "frac": self.frac, "seed": self.seed, "bootstraps": len(samples)})

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "frac": self.frac}


def train_bagging(S: TrainingSequence, erm: ErmOracle, delta: float, frac: float, seed: int = 0) -> MajorityVote:
    return BaggingLearner(delta, frac, seed).fit(S, erm).predictor  # type: ignore[return-value]
