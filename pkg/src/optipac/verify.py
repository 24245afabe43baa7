"""
Invariant suites that ship with the library, so `optipac verify` can check an installation without pytest.
Each suite is a function that raises AssertionError (or any other exception) on failure.
Suites run at small sizes; the pytest suite under tests/ covers the same ground in more depth.
"""

from __future__ import annotations
from typing import Callable
from fractions import Fraction
import itertools
import math
import numpy as np
from .analysis import exact_error, uniform_convergence_bound
from .boost import BoostConfig, RandomString, adaboost_sample, inverse_cdf_many, margin_bound_base, step_size
from .core import LabeledExample, MajorityVote, TrainingSequence, empirical_margin_loss, vote_margin
from .experiments.universes import adversarial_points, adversarial_witness, build_adversarial_universe, sample_dataset, threshold_universe
from .learners import LearnerConfig, train_optimal
from .ledger import CostLedger
from .log import log
from .oracles import FiniteClassERM, PerceptronERM, ThresholdERM, ThresholdHypothesis
from .subsample import enumerate_rows_recursive, extract_row
from .util import derive_rng, get_dupes

SUITES: dict[str, Callable[[], None]] = {}


def suite(name: str) -> Callable[[Callable[[], None]], Callable[[], None]]:
    def register(f: Callable[[], None]) -> Callable[[], None]:
        SUITES[name] = f
        return f
    return register


def _threshold_sample(m: int, seed: int) -> TrainingSequence:
    rng = derive_rng(seed, 99)
    x = rng.random(m)
    return TrainingSequence(x, np.where(x > 0.5, 1, -1))


@suite("core")
def check_core() -> None:
    # Margins of a t-voter vote lie on the (2a - t)/t grid
    for t in range(1, 7):
        for pattern in itertools.product((-1, 1), repeat=t):
            voters = [ThresholdHypothesis(-1.0 if p == 1 else 2.0, 1) for p in pattern]
            margin = vote_margin(MajorityVote(voters), LabeledExample(0.5, 1))
            a = pattern.count(1)
            assert margin == Fraction(2 * a - t, t), f"margin {margin} for pattern {pattern}"
    # The boundary θ counts as a violation
    vote = MajorityVote([ThresholdHypothesis(-1.0, 1)] * 7 + [ThresholdHypothesis(2.0, 1)])
    S = TrainingSequence([0.5], [1])
    assert empirical_margin_loss(vote, S, Fraction(3, 4)) == 1


@suite("erm")
def check_erm() -> None:
    rng = np.random.default_rng(0)
    erm = ThresholdERM()
    for _ in range(50):
        x = rng.random(int(rng.integers(1, 30)))
        cut = rng.random()
        S = TrainingSequence(x, np.where(x > cut, 1, -1))
        h = erm.train(S)
        assert np.array_equal(h.predict(S.X), S.y), "threshold ERM inconsistent on a realizable sample"
    table = np.array([[1, 1, 1, 1], [-1, -1, 1, 1], [-1, 1, 1, 1]])
    S = TrainingSequence([0, 1, 2], [-1, 1, 1])
    ledger = CostLedger()
    h = FiniteClassERM(table).train(S, ledger)
    assert h.position == 2 and ledger.arithmetic_ops == 3 * len(S)
    X, y = adversarial_points(50)
    S = TrainingSequence(X[[0, -1]], y[[0, -1]])
    run = PerceptronERM(dim=3).fit(S)
    M2 = float(np.max(np.sum(S.X ** 2, axis=1)))
    w = adversarial_witness(50)
    gamma = float(np.min(S.y * (S.X @ w)) / np.linalg.norm(w))
    assert run.updates <= math.ceil(M2 / gamma ** 2), "perceptron broke the Novikoff cap"


@suite("subsample")
def check_subsample() -> None:
    for k in (1, 2, 3):
        m = 6 ** k
        S = TrainingSequence(np.arange(m, dtype=float), np.ones(m))
        rows = [extract_row(S, w) for w in itertools.product(range(1, 6), repeat=k)]
        keys = [tuple(sorted(r.indices.tolist())) for r in rows]
        assert not get_dupes(keys), f"two selectors share a row at k={k}"
        reference = sorted(tuple(sorted(r.indices.tolist())) for r in enumerate_rows_recursive(S))
        assert sorted(keys) == reference, f"closed-form rows differ from the recursion at k={k}"
        assert all(len(r) == (m + 4) // 5 for r in rows)
        assert all(r.indices[0] == 0 for r in rows)


@suite("sampler")
def check_sampler() -> None:
    rng = np.random.default_rng(1)
    for m in (2, 7, 64, 1000):
        for _ in range(25):
            D = rng.random(m)
            D /= D.sum()
            C = np.cumsum(D)
            C[-1] = 1.0
            u = rng.random(40)
            fast = inverse_cdf_many(C, u)
            # Linear scan: the first l with u < C(l)
            slow = np.array([next(l for l in range(1, m + 1) if uu < C[l - 1]) for uu in u])
            assert np.array_equal(fast, slow), f"inverse CDF disagrees with a linear scan at m={m}"


@suite("boost")
def check_boost() -> None:
    assert abs(step_size(0.75, 0.45) - 0.5 * math.log(19 / 7)) < 1e-12
    assert margin_bound_base(0.75, 0.45) <= 0.96 + 1e-12
    erm = ThresholdERM()
    for seed in range(5):
        S = _threshold_sample(36, seed)
        cfg = BoostConfig.for_sample(36, 0.1, 1, "desk")
        r = RandomString(seed, cfg.rounds_n, cfg.sample_size_s)
        res = adaboost_sample(S, r, erm, cfg)
        if not res.fallback:
            assert res.vote.t == cfg.target_t
            assert empirical_margin_loss(res.vote, S, cfg.theta) == 0, "certified vote has a margin violation"


@suite("learner")
def check_learner() -> None:
    S = _threshold_sample(36, 3)
    cfg = LearnerConfig(delta=0.1, d=1, seed=3, profile="desk", voters_l=9)
    a, b = train_optimal(S, ThresholdERM(), cfg), train_optimal(S, ThresholdERM(), cfg)
    probe = np.linspace(0, 1, 101)
    assert np.array_equal(a.predictor.predict(probe), b.predictor.predict(probe)), "same seed gave different ensembles"
    ledger = CostLedger()
    a.predictor.predict(probe[:1], ledger)
    assert ledger.inference_calls == 9


@suite("analysis")
def check_analysis() -> None:
    for d in range(1, 21):
        assert uniform_convergence_bound(d, 550 * d, 2.0 ** -d) <= 1 / 20
    universe = threshold_universe(1000)
    assert exact_error(ThresholdERM().train(TrainingSequence([0.25, 0.75], [-1, 1])), universe) == 0


@suite("experiments")
def check_experiments() -> None:
    m = 1000
    universe = build_adversarial_universe(m)
    X = universe.points
    assert abs(math.fsum(universe.probs) - 1) < 1e-12
    assert np.allclose(X[:-1] @ X[-1], 2 - np.arange(1, m) / m ** 4)
    a, b = sample_dataset(universe, 50, 1), sample_dataset(universe, 50, 1)
    assert np.array_equal(a.indices, b.indices), "sampling is not deterministic per seed"


def run_suites(names: list[str] | None = None) -> dict[str, str | None]:
    """Run the named suites (all by default). Returns suite name -> None on success or the failure message."""
    names = names or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"Unknown suite(s): {', '.join(unknown)}. Known: {', '.join(SUITES)}")
    results: dict[str, str | None] = {}
    for name in names:
        try:
            SUITES[name]()
            results[name] = None
            log.info(f"suite={name} status=pass")
        except Exception as e:
            results[name] = f"{type(e).__name__}: {e}"
            log.smart_error(f"suite={name} status=fail")
    return results
