from __future__ import annotations
from typing import Any
import math
import numpy as np
from ..Oracle import ErmOracle, Hypothesis
from ..errors import NotRealizable
from ..ledger import CostLedger
from ..core import TrainingSequence


class FiniteClassHypothesis(Hypothesis):
    """One row of an explicit hypothesis table over a universe of indexed points."""

    tag = "finite"

    def __init__(self, position: int, table_row: np.ndarray) -> None:
        super().__init__()
        self.position = int(position)
        self.table_row = np.asarray(table_row, dtype=np.int8)

    def _predict(self, points: np.ndarray) -> np.ndarray:
        return self.table_row[points.astype(np.int64).reshape(-1)]

    def params(self) -> dict[str, Any]:
        return {"position": self.position, "table_row": self.table_row.tolist()}

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> FiniteClassHypothesis:
        return cls(params["position"], np.asarray(params["table_row"]))

    def __repr__(self) -> str:
        return f"FiniteClassHypothesis(position={self.position})"


class FiniteClassERM(ErmOracle):
    """Searches an explicit hypothesis list, checking one projection onto S at a time.
    Points are universe indices; table[i, j] is hypothesis i's label for universe point j.
    Returns the first consistent hypothesis in scan order, so training cost grows with its position."""

    cli_name = "finite"

    def __init__(self, table: Any, name: str | None = None) -> None:
        super().__init__(name)
        table = np.asarray(table, dtype=np.int8)
        if table.ndim != 2 or table.shape[0] < 1:
            raise ValueError("The hypothesis table must be a non-empty 2-D array (hypotheses x universe points).")
        if not np.all(np.abs(table) == 1):
            raise ValueError("Hypothesis table entries must be -1 or +1.")
        self.table = table

    @property
    def vc_dimension(self) -> int:  # type: ignore[override]
        # Only an upper bound: a finite class can't shatter more than log2 of its size
        return max(1, int(math.floor(math.log2(self.table.shape[0]))))

    def _train(self, S: TrainingSequence, ledger: CostLedger) -> FiniteClassHypothesis:
        idx = np.asarray(S.X, dtype=np.int64).reshape(-1)
        y = S.y
        for position, row in enumerate(self.table):
            ledger.arithmetic_ops += len(idx)
            if np.array_equal(row[idx], y):
                return FiniteClassHypothesis(position, row)
        raise NotRealizable(f"None of the {len(self.table)} hypotheses is consistent with the sample.")

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "hypotheses": int(self.table.shape[0]), "universe_points": int(self.table.shape[1])}
