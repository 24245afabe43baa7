"""
Closed-form bounds and exact evaluation over finite universes.

Everything here is an evaluator: the universal constants the bounds leave unspecified (the ramp-loss
constant C, the final error constant c5) are parameters, never algorithm inputs.
"""

from __future__ import annotations
from typing import Any, Protocol
from dataclasses import dataclass
import itertools
import math
import numpy as np
from .boost import BoostConfig, RandomString, adaboost_sample
from .core import TrainingSequence
from .errors import BadParams, BadShape
from .ledger import CostLedger
from .settings import settings
from .subsample import RowSelector, depth_of, extract_row
from .util import derive_rng

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from .Oracle import ErmOracle


class Predictor(Protocol):
    def predict(self, points: Any, ledger: CostLedger | None = None) -> np.ndarray: ...


@dataclass(frozen=True)
class FiniteUniverse:
    """A distribution over finitely many points with a target concept.
    points[i] has probability probs[i] and true label concept[i]."""

    points: np.ndarray
    probs: np.ndarray
    concept: np.ndarray
    name: str = "universe"

    def __post_init__(self) -> None:
        if not len(self.points) == len(self.probs) == len(self.concept):
            raise BadShape(f"Universe arrays disagree in length ({len(self.points)}, {len(self.probs)}, {len(self.concept)}).")
        if len(self.points) == 0:
            raise BadShape("A universe needs at least one point.")
        if np.any(self.probs < 0) or abs(math.fsum(self.probs) - 1) > 1e-12:
            raise BadParams(f"Universe probabilities must be non-negative and sum to 1 (sum={math.fsum(self.probs)}).")
        if not np.all(np.abs(self.concept) == 1):
            raise BadParams("Concept labels must be -1 or +1.")

    def __len__(self) -> int:
        return len(self.points)

    def mix(self, other: FiniteUniverse, weight: float) -> FiniteUniverse:
        """weight·self + (1-weight)·other over the same points and concept."""
        if len(other) != len(self) or not np.array_equal(other.concept, self.concept):
            raise BadShape("Can only mix universes over the same points and concept.")
        return FiniteUniverse(self.points, weight * self.probs + (1 - weight) * other.probs, self.concept, f"{self.name}+{other.name}")


def exact_error(predictor: Predictor, universe: FiniteUniverse, ledger: CostLedger | None = None) -> float:
    """P[predictor(x) ≠ c(x)] summed exactly over the universe."""
    wrong = predictor.predict(universe.points, ledger) != universe.concept
    return math.fsum(universe.probs[wrong])


def monte_carlo_error(predictor: Predictor, universe: FiniteUniverse, draws: int, seed: int) -> tuple[float, float]:
    """Sampled estimate of the error and its standard error. Only used to cross-check exact_error."""
    rng = derive_rng(seed, 3)
    idx = rng.choice(len(universe), size=draws, p=universe.probs)
    # Predict each distinct point once and look the rest up
    uniq, inverse = np.unique(idx, return_inverse=True)
    wrong = (predictor.predict(universe.points[uniq]) != universe.concept[uniq])[inverse]
    p = float(wrong.mean())
    return p, math.sqrt(max(p * (1 - p), 1e-300) / draws)


def uniform_convergence_bound(d: int, m: int, delta: float) -> float:
    """2(d·log₂(2em/d) + log₂(2/δ))/m: the error of any consistent hypothesis, with probability 1-δ."""
    if not (1 <= d <= m) or not 0 < delta < 1:
        raise BadParams(f"Need m ≥ d ≥ 1 and 0 < delta < 1 (d={d}, m={m}, delta={delta}).")
    return 2 * (d * math.log2(2 * math.e * m / d) + math.log2(2 / delta)) / m


def ramp_generalization_bound(d: int, m_cond: int, delta: float, gamma: float, xi: float, C: float | None = None) -> float:
    """The two slack terms C·√(2d/(((ξ-1)γ)²m)) + √(2ln(2/δ)/m) of the ramp-loss bound.
    The empirical ramp-loss term is the caller's."""
    C = settings.analysis.ramp_constant if C is None else C
    if not 0 < gamma < 1 or xi <= 1 or C < 1 or d < 1 or m_cond < 1 or not 0 < delta < 1:
        raise BadParams(f"Need 0 < gamma < 1, xi > 1, C ≥ 1, d, m ≥ 1, 0 < delta < 1 (gamma={gamma}, xi={xi}, C={C}, d={d}, m={m_cond}, delta={delta}).")
    return C * math.sqrt(2 * d / (((xi - 1) * gamma) ** 2 * m_cond)) + math.sqrt(2 * math.log(2 / delta) / m_cond)


def c5_constant(C: float | None = None) -> float:
    """max{32C²·960, 3840 ln 160}·(2·80·6(ln 40 + 1))²."""
    C = settings.analysis.ramp_constant if C is None else C
    return max(32 * C ** 2 * 960, 3840 * math.log(160)) * (2 * 80 * 6 * (math.log(40) + 1)) ** 2


def optimal_error_bound(d: int, m: int, delta: float, C: float | None = None) -> float:
    """(4 + c5)(d + ln(4/δ))/m. Vacuous at any practical m; reported for completeness."""
    if d < 1 or m < 1 or not 0 < delta < 1:
        raise BadParams(f"Need d, m ≥ 1 and 0 < delta < 1 (d={d}, m={m}, delta={delta}).")
    return (4 + c5_constant(C)) * (d + math.log(4 / delta)) / m


def high_level_complexity(m: int, delta: float, d: int, u_train: float, u_inf: float) -> dict[str, float]:
    """The cost expressions (constants dropped) of the random majority voter and the two baselines,
    given the ERM's training cost at its sample size and its per-inference cost.

    u_train is U_Train at Θ(d) examples for the optimal learner; the baselines' costs are reported in
    terms of the same numbers so the rows line up in a table."""
    if m < 2 or d < 1 or not 0 < delta < 1:
        raise BadParams(f"Need m ≥ 2, d ≥ 1 and 0 < delta < 1 (m={m}, d={d}, delta={delta}).")
    voters = math.log(m / (delta * (d + math.log(1 / delta))))
    rounds = math.log(m / delta)
    return {
        "optimal_training": voters * rounds * (m * math.log(m) + d * math.log(m) + u_train + m * u_inf),
        "optimal_inference": voters * u_inf,
        "bagging_training_calls": 18 * math.log(2 * m / delta),
        "hanneke_training_calls": m ** math.log(3, 4),
        "hanneke_inference": m ** math.log(3, 4) * u_inf,
    }


def exact_majority_of_majorities_failure(S: TrainingSequence, r: RandomString, erm: ErmOracle, cfg: BoostConfig,
                                         universe: FiniteUniverse, ledger: CostLedger | None = None) -> float:
    """Boost on every row of the subsampling scheme and return the universe mass where fewer than 3/4 of
    the rows have at least 3/4 of their voters correct."""
    k = depth_of(S)
    if k > 3:
        raise BadShape(f"Full enumeration needs k ≤ 3, got k={k} (|S|={len(S)}).")
    ledger = ledger if ledger is not None else CostLedger()
    rows = 5 ** k
    good_rows = np.zeros(len(universe), dtype=np.int64)
    for w in itertools.product(range(1, 6), repeat=k):
        res = adaboost_sample(extract_row(S, RowSelector.of(w)), r, erm, cfg, ledger)
        correct = np.zeros(len(universe), dtype=np.int64)
        for h in res.vote.voters:
            correct += h.predict(universe.points, ledger) == universe.concept
        # at least 3/4 of the t voters correct
        good_rows += 4 * correct >= 3 * res.vote.t
    failing = 4 * good_rows < 3 * rows
    return math.fsum(universe.probs[failing])
