from __future__ import annotations
from typing import Any
import numpy as np
from ..Oracle import ErmOracle, Hypothesis
from ..errors import NotRealizable
from ..ledger import CostLedger
from ..core import TrainingSequence


class ThresholdHypothesis(Hypothesis):
    """x -> s if x > b else -s."""

    tag = "threshold"

    def __init__(self, b: float, s: int) -> None:
        super().__init__()
        self.b = float(b)
        self.s = int(s)

    def _predict(self, points: np.ndarray) -> np.ndarray:
        x = points.reshape(len(points), -1)[:, 0] if points.ndim > 1 else points
        return np.where(x > self.b, self.s, -self.s).astype(np.int8)

    def params(self) -> dict[str, Any]:
        return {"b": self.b, "s": self.s}

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> ThresholdHypothesis:
        return cls(params["b"], params["s"])

    def __repr__(self) -> str:
        return f"ThresholdHypothesis(b={self.b!r}, s={self.s:+d})"


class ThresholdERM(ErmOracle):
    """ERM over signed 1-D thresholds.
    The boundary is the midpoint between the closest points of opposite labels; s=+1 is preferred when both signs fit."""

    cli_name = "threshold"
    vc_dimension = 1

    def _train(self, S: TrainingSequence, ledger: CostLedger) -> ThresholdHypothesis:
        x = np.asarray(S.X, dtype=float).reshape(-1)
        y = S.y
        ledger.arithmetic_ops += len(x)
        pos, neg = x[y == 1], x[y == -1]

        if len(neg) == 0:
            return ThresholdHypothesis(pos.min() - 1.0, 1)
        if len(pos) == 0:
            return ThresholdHypothesis(neg.max() + 1.0, 1)
        if neg.max() < pos.min():
            return ThresholdHypothesis((neg.max() + pos.min()) / 2, 1)
        if pos.max() < neg.min():
            return ThresholdHypothesis((pos.max() + neg.min()) / 2, -1)
        raise NotRealizable(f"No threshold separates this sample (negatives reach {neg.max()}, positives start at {pos.min()}).")
