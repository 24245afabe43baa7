"""
Synthetic distributions for the experiments, each paired with the ERM that realizes its concept.
"""

from __future__ import annotations
from typing import Callable
from dataclasses import dataclass
import math
import numpy as np
from ..analysis import FiniteUniverse
from ..core import TrainingSequence
from ..errors import BadParams
from ..oracles import FiniteClassERM, PerceptronERM, ThresholdERM
from ..settings import settings
from ..util import derive_rng

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from ..Oracle import ErmOracle

# Past this the 1 - i/m⁴ gaps run into double-precision spacing
MAX_ADVERSARIAL_M = 10_000


def threshold_universe(points: int | None = None, cut: float | None = None) -> FiniteUniverse:
    """A uniform grid (j + 0.5)/N in (0, 1), labelled +1 above cut."""
    n = points or settings.universe.threshold_points
    cut = settings.universe.threshold_cut if cut is None else cut
    x = (np.arange(n) + 0.5) / n
    return FiniteUniverse(x, np.full(n, 1.0 / n), np.where(x > cut, 1, -1).astype(np.int8), "threshold")


def degenerate_universe(points: int | None = None) -> FiniteUniverse:
    """The threshold grid with every label +1."""
    n = points or settings.universe.threshold_points
    x = (np.arange(n) + 0.5) / n
    return FiniteUniverse(x, np.full(n, 1.0 / n), np.ones(n, dtype=np.int8), "degenerate")


def discrete_threshold_table(n: int) -> np.ndarray:
    """Every discrete threshold over indices 0..n-1, negative orientation first:
    row (s, c) labels index i as s if i ≥ c else -s, for s in (-1, +1) and c in 0..n."""
    idx = np.arange(n)
    rows = [np.where(idx >= c, s, -s) for s in (-1, 1) for c in range(n + 1)]
    return np.asarray(rows, dtype=np.int8)


def finite_class_universe(points: int | None = None) -> tuple[FiniteUniverse, np.ndarray]:
    """n indexed points with a positive-orientation threshold at n/2, plus the hypothesis table.
    The target sits in the second half of the scan order, so the ERM's scan cost shows up."""
    n = points or settings.universe.finite_points
    table = discrete_threshold_table(n)
    concept = table[(n + 1) + n // 2]
    universe = FiniteUniverse(np.arange(n), np.full(n, 1.0 / n), concept.copy(), "finite")
    return universe, table


def adversarial_points(m: int) -> tuple[np.ndarray, np.ndarray]:
    """x_i = (0, 1 - i/m⁴, 1) labelled -1 for i < m, and x_m = (√(1/m), 1, 1) labelled +1."""
    i = np.arange(1, m, dtype=float)
    X = np.zeros((m, 3))
    X[:-1, 1] = 1 - i / float(m) ** 4
    X[:-1, 2] = 1.0
    X[-1] = (math.sqrt(1 / m), 1.0, 1.0)
    y = np.full(m, -1, dtype=np.int8)
    y[-1] = 1
    return X, y


def adversarial_witness(m: int) -> np.ndarray:
    """A separating direction (1, -√(1/(2m)), 0)."""
    return np.array([1.0, -math.sqrt(1 / (2 * m)), 0.0])


def build_adversarial_universe(m: int) -> FiniteUniverse:
    """The near-degenerate separable universe that makes the perceptron slow: x_m has mass 250/m,
    the other m-1 points share the rest uniformly. The witness margin is checked on construction."""
    if m < 10:
        raise BadParams(f"m must be at least 10, not {m}.")
    if m > MAX_ADVERSARIAL_M:
        raise BadParams(f"m={m} is past {MAX_ADVERSARIAL_M}, where 1 - i/m⁴ stops being representable.")
    X, y = adversarial_points(m)
    p = 250 / m
    if p >= 1:
        raise BadParams(f"m={m} is too small for P(x_m) = 250/m to be a probability.")
    probs = np.full(m, (1 - p) / (m - 1))
    probs[-1] = p
    w = adversarial_witness(m)
    margin = float(np.min(y * (X @ w)) / np.linalg.norm(w))
    if margin < math.sqrt(1 / (64 * m)):
        raise BadParams(f"Witness margin {margin} is below √(1/(64m)) at m={m}.")
    return FiniteUniverse(X, probs, y, "perceptron")


def sample_dataset(universe: FiniteUniverse, m: int, seed: int, *keys: int) -> TrainingSequence:
    """m i.i.d. draws from the universe, labelled by its concept. The result is a view over the universe
    arrays, so its indices are the drawn universe positions. Extra keys split off independent streams (e.g. per trial)."""
    if m < 1:
        raise BadParams(f"m must be positive, not {m}.")
    rng = derive_rng(seed, 4, *keys)
    idx = rng.choice(len(universe), size=m, p=universe.probs)
    return TrainingSequence(universe.points, universe.concept, indices=idx)


@dataclass(frozen=True)
class Distribution:
    """A named universe together with the ERM realizing its concept."""

    universe: FiniteUniverse
    erm: ErmOracle
    d: int


def _threshold(m: int) -> Distribution:
    return Distribution(threshold_universe(), ThresholdERM(), 1)


def _degenerate(m: int) -> Distribution:
    return Distribution(degenerate_universe(), ThresholdERM(), 1)


def _finite(m: int) -> Distribution:
    universe, table = finite_class_universe()
    # Same signed-threshold class as the threshold distribution, just over indices
    return Distribution(universe, FiniteClassERM(table), 1)


def _perceptron(m: int) -> Distribution:
    return Distribution(build_adversarial_universe(max(m, 10)), PerceptronERM(dim=3), 3)


DISTRIBUTIONS: dict[str, Callable[[int], Distribution]] = {
    "threshold": _threshold,
    "degenerate": _degenerate,
    "finite": _finite,
    "perceptron": _perceptron,
}


def make_distribution(name: str, m: int) -> Distribution:
    """Look up a distribution by name. m is only used by distributions whose universe depends on the sample size."""
    if name not in DISTRIBUTIONS:
        raise BadParams(f"Unknown distribution '{name}'. Known: {', '.join(sorted(DISTRIBUTIONS))}")
    return DISTRIBUTIONS[name](m)
