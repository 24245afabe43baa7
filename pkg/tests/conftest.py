from __future__ import annotations
import numpy as np
import pytest
from optipac.core import TrainingSequence
from optipac.ledger import CostLedger
from optipac.Oracle import ErmOracle
from optipac.oracles import ThresholdHypothesis
from optipac.util import derive_rng


def threshold_sample(m: int, seed: int, cut: float = 0.5) -> TrainingSequence:
    """m uniform points in [0, 1), labelled +1 above cut."""
    x = derive_rng(seed, 1000).random(m)
    return TrainingSequence(x, np.where(x > cut, 1, -1))


class ConstantERM(ErmOracle):
    """Ignores its sample and always returns the all-negative threshold. Never consistent on positives."""

    def _train(self, S: TrainingSequence, ledger: CostLedger) -> ThresholdHypothesis:
        ledger.arithmetic_ops += len(S)
        return ThresholdHypothesis(2.0, 1)


@pytest.fixture
def sample36() -> TrainingSequence:
    return threshold_sample(36, 7)


@pytest.fixture
def output_dir(tmp_path, monkeypatch) -> str:
    path = str(tmp_path / "results")
    monkeypatch.setenv("OPTIPAC_OUTPUT_DIR", path)
    return path
