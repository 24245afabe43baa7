from __future__ import annotations
from typing import Any
from abc import ABC, abstractmethod
import numpy as np
from .Component import Component
from .errors import BadShape, NotSerializable
from .ledger import CostLedger
from .log import log

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from .core import TrainingSequence


class Hypothesis(ABC):
    """A predictor X -> {-1,+1} produced by an ERM.
    Every prediction is charged to the ledger it is given, one inference call per point."""

    # tag -> class, for rebuilding hypotheses from model descriptors
    registry: dict[str, type[Hypothesis]] = {}

    # Set this in concrete subclasses that know how to serialize themselves.
    tag: str | None = None

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        if "tag" in cls.__dict__ and cls.tag is not None:
            Hypothesis.registry[cls.tag] = cls

    def __init__(self) -> None:
        # Where this hypothesis came from (row selector, boosting round, sample size...). Filled in by the learners.
        self.provenance: dict[str, Any] = {}

    def predict(self, points: Any, ledger: CostLedger | None = None) -> np.ndarray:
        """Predict a batch of points. Returns an int8 array of ±1."""
        points = np.asarray(points)
        if ledger is not None:
            ledger.inference_calls += len(points)
        return self._predict(points)

    def __call__(self, point: Any, ledger: CostLedger | None = None) -> int:
        return int(self.predict(np.asarray([point]), ledger)[0])

    @abstractmethod
    def _predict(self, points: np.ndarray) -> np.ndarray:
        """Vectorized prediction without any bookkeeping."""
        pass

    def params(self) -> dict[str, Any]:
        """The parameters that determine this hypothesis. Override alongside tag to make it serializable."""
        raise NotSerializable(f"{self.__class__.__name__} hypotheses can't be written to a model descriptor.")

    def to_dict(self) -> dict[str, Any]:
        if self.tag is None:
            raise NotSerializable(f"{self.__class__.__name__} hypotheses can't be written to a model descriptor.")
        return {"type": self.tag, "params": self.params(), "provenance": self.provenance}

    @staticmethod
    def from_dict(d: dict[str, Any]) -> Hypothesis:
        if d.get("type") not in Hypothesis.registry:
            raise NotSerializable(f"Unknown hypothesis type '{d.get('type')}' in model descriptor.")
        h = Hypothesis.registry[d["type"]].from_params(d["params"])
        h.provenance = dict(d.get("provenance", {}))
        return h

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> Hypothesis:
        raise NotSerializable(f"{cls.__name__} hypotheses can't be read from a model descriptor.")


class ErmOracle(Component):
    """A black-box empirical risk minimizer.
    train(S) must return a hypothesis consistent with S whenever S is realizable by the oracle's class,
    and must be a deterministic function of S (the learners cache on that)."""

    kind = "ERM"

    # VC dimension of the oracle's class. Concrete oracles set it.
    vc_dimension: int = 1

    def train(self, S: TrainingSequence, ledger: CostLedger | None = None) -> Hypothesis:
        """Train on S, charging one call and |S| examples to the ledger."""
        if len(S) < 1:
            raise BadShape(f"{self} can't train on an empty sequence.")
        if ledger is None:
            ledger = CostLedger()
        ledger.record_train(len(S))
        h = self._train(S, ledger)
        log.debug(f"Trained size={len(S)} -> {h!r}")
        return h

    @abstractmethod
    def _train(self, S: TrainingSequence, ledger: CostLedger) -> Hypothesis:
        """The actual ERM. Add internal loop counts to ledger.arithmetic_ops.
        Raise NotRealizable if no hypothesis in the class is consistent with S."""
        pass

    def describe(self) -> dict[str, Any]:
        """ERM parameters stored in model descriptors."""
        return {"type": self.cli_name or self.__class__.__name__, "vc_dimension": self.vc_dimension}
