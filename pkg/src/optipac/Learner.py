from __future__ import annotations
from typing import Any
from abc import abstractmethod
from dataclasses import dataclass, field
from .Component import Component
from .core import MajorityVote, TrainingSequence
from .errors import BadShape
from .ledger import CostLedger
from .log import log
from .subsample import truncate_to_power

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from .Oracle import ErmOracle, Hypothesis


@dataclass
class TrainReport:
    """Everything a learner run produced: the predictor, what it cost, and how it got there."""

    predictor: MajorityVote | Hypothesis
    ledger: CostLedger
    m_input: int
    m_effective: int
    fallback_count: int = 0
    cache_hits: int = 0
    # One entry per sampled row (optimal learner only)
    branches: list[dict[str, Any]] = field(default_factory=list)
    # Per-row sub-ledgers, in the order rows were first boosted
    row_ledgers: list[CostLedger] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def ensemble(self) -> MajorityVote | Hypothesis:
        return self.predictor

    @property
    def truncated(self) -> bool:
        return self.m_effective != self.m_input


class Learner(Component):
    """A learning algorithm that turns a training sequence and an ERM into a predictor.
    Subclasses that need |S| to be a power of something set shape_base; fit() truncates S accordingly."""

    kind = "Learner"

    # |S| must be a power of this (None: any size)
    shape_base: int | None = None

    def prepare(self, S: TrainingSequence) -> TrainingSequence:
        """Truncate S to the longest prefix the learner can use, with a warning when that drops examples."""
        if len(S) < 1:
            raise BadShape(f"{self} needs at least one example.")
        if self.shape_base is None:
            return S
        S_eff = truncate_to_power(S, self.shape_base)
        if len(S_eff) != len(S):
            log.warning(f"m={len(S)} is not a power of {self.shape_base}; truncated to m_effective={len(S_eff)}")
        return S_eff

    def fit(self, S: TrainingSequence, erm: ErmOracle) -> TrainReport:
        S_eff = self.prepare(S)
        log.info(f"Training m={len(S_eff)} erm={erm.name}")
        report = self._fit(S_eff, erm)
        report.m_input = len(S)
        log.info(f"Trained m={len(S_eff)} fallbacks={report.fallback_count} {report.ledger.summary()}")
        return report

    @abstractmethod
    def _fit(self, S: TrainingSequence, erm: ErmOracle) -> TrainReport:
        """Train on an already-truncated S."""
        pass

    def describe(self) -> dict[str, Any]:
        """Learner parameters stored in model descriptors."""
        return {"type": self.cli_name or self.__class__.__name__}
