from __future__ import annotations
from typing import Any
from dataclasses import dataclass
import math
import numpy as np
from ..Oracle import ErmOracle, Hypothesis
from ..errors import NonConvergence
from ..ledger import CostLedger
from ..core import TrainingSequence


class PerceptronHypothesis(Hypothesis):
    """x -> sign(<w, x>), ties to +1. The last coordinate of every point is the bias coordinate (always 1)."""

    tag = "perceptron"

    def __init__(self, w: Any, updates: int = 0, passes: int = 0, scanned: int = 0) -> None:
        super().__init__()
        self.w = np.asarray(w, dtype=float)
        # Training statistics of the run that produced w
        self.updates = int(updates)
        self.passes = int(passes)
        self.scanned = int(scanned)

    def _predict(self, points: np.ndarray) -> np.ndarray:
        return np.where(points.reshape(len(points), -1) @ self.w >= 0, 1, -1).astype(np.int8)

    def params(self) -> dict[str, Any]:
        return {"w": self.w.tolist(), "updates": self.updates, "passes": self.passes, "scanned": self.scanned}

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> PerceptronHypothesis:
        return cls(params["w"], params.get("updates", 0), params.get("passes", 0), params.get("scanned", 0))

    def __repr__(self) -> str:
        return f"PerceptronHypothesis(dim={len(self.w)}, updates={self.updates}, passes={self.passes})"


@dataclass
class PerceptronRun:
    """What one training run did."""

    w: np.ndarray
    updates: int
    passes: int
    scanned: int  # examples looked at across all passes


class PerceptronERM(ErmOracle):
    """The classic perceptron, run to convergence: passes over S until one full pass makes no mistake.
    w starts at 0 and every mistake (y<w,x> <= 0) does w <- w + y·x."""

    cli_name = "perceptron"

    default_settings = {
        "gamma_floor": 0.001,
        "pass_multiplier": 10,
    }

    def __init__(self, dim: int = 3, name: str | None = None, overrides: dict[str, Any] | None = None) -> None:
        super().__init__(name, overrides)
        if dim < 1:
            raise ValueError(f"dim must be positive, not {dim}.")
        self.dim = dim

    @property
    def vc_dimension(self) -> int:  # type: ignore[override]
        # Homogeneous halfspaces in R^dim
        return self.dim

    def validate_settings(self) -> None:
        assert 0 < self.settings.gamma_floor < 1, "gamma_floor must lie in (0, 1)."
        assert isinstance(self.settings.pass_multiplier, int) and self.settings.pass_multiplier >= 1, "pass_multiplier must be a positive integer."

    def pass_budget(self, X: np.ndarray) -> int:
        """pass_multiplier·⌈M²/γ_floor²⌉ with M the largest norm in the sample."""
        M2 = float(np.max(np.einsum("ij,ij->i", X, X))) if len(X) else 0.0
        return self.settings.pass_multiplier * max(1, math.ceil(M2 / self.settings.gamma_floor ** 2))

    def fit(self, S: TrainingSequence, ledger: CostLedger | None = None) -> PerceptronRun:
        """Run the perceptron to convergence and report the weights plus update/pass/scan counts."""
        X = np.asarray(S.X, dtype=float).reshape(len(S), -1)
        if X.shape[1] != self.dim:
            raise ValueError(f"{self} expects {self.dim}-dimensional points, got {X.shape[1]}.")
        y = S.y.astype(float)
        n = len(y)
        budget = self.pass_budget(X)

        w = np.zeros(self.dim)
        updates = passes = scanned = 0
        while True:
            passes += 1
            if passes > budget:
                if ledger is not None:
                    ledger.arithmetic_ops += scanned
                raise NonConvergence(f"Perceptron made no clean pass within {budget} passes (updates={updates}); the sample is probably not separable.")
            pos = 0
            mistakes = 0
            while pos < n:
                # w only changes at a mistake, so the next mistake can be found for the whole tail at once
                bad = np.flatnonzero(y[pos:] * (X[pos:] @ w) <= 0)
                if bad.size == 0:
                    scanned += n - pos
                    break
                j = pos + int(bad[0])
                scanned += j - pos + 1
                w = w + y[j] * X[j]
                updates += 1
                mistakes += 1
                pos = j + 1
            if mistakes == 0:
                break

        if ledger is not None:
            ledger.arithmetic_ops += scanned
        return PerceptronRun(w, updates, passes, scanned)

    def _train(self, S: TrainingSequence, ledger: CostLedger) -> PerceptronHypothesis:
        run = self.fit(S, ledger)
        return PerceptronHypothesis(run.w, run.updates, run.passes, run.scanned)

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "dim": self.dim}


def perceptron_update_count(S: TrainingSequence, erm: PerceptronERM | None = None) -> int:
    """Train to convergence and return the exact number of weight updates."""
    erm = erm or PerceptronERM(dim=np.asarray(S.X).reshape(len(S), -1).shape[1])
    return erm.fit(S).updates
