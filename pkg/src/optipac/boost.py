"""
Boosting by resampling against a black-box ERM, with a fixed step size.

Each round draws s indices from the current weighting D by inverse-CDF lookups on a fixed random block,
trains the ERM on the drawn multiset, and keeps the hypothesis if its weighted error is at most 1/2 - γ.
After t kept rounds the vote of the kept hypotheses is certified: every training example must have margin
above θ. If that fails (or too few rounds succeed) the run falls back to a single ERM(S), repeated t times.
"""

from __future__ import annotations
from typing import Any
from dataclasses import dataclass, field
from fractions import Fraction
import math
import numpy as np
from .core import MajorityVote, TrainingSequence, margin_violations
from .errors import BadParams, StreamExhausted
from .ledger import CostLedger
from .log import log
from .settings import settings, profile as lookup_profile
from .util import ceil_log, derive_rng

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from .Oracle import ErmOracle, Hypothesis


def step_size(theta: float, gamma: float) -> float:
    """α = ½ln((1+2γ)/(1-2γ)) - ½ln((1+θ)/(1-θ))."""
    _check_theta_gamma(theta, gamma)
    return 0.5 * math.log((1 + 2 * gamma) / (1 - 2 * gamma)) - 0.5 * math.log((1 + theta) / (1 - theta))


def margin_bound_base(theta: float, gamma: float) -> float:
    """The per-round factor e^{(θ-1)α}(½+γ) + e^{(θ+1)α}(½-γ)."""
    a = step_size(theta, gamma)
    return math.exp((theta - 1) * a) * (0.5 + gamma) + math.exp((theta + 1) * a) * (0.5 - gamma)


def margin_loss_bound(theta: float, gamma: float, t: int) -> float:
    """Bound on the empirical θ-margin loss after t accepted rounds: margin_bound_base(θ, γ)^t."""
    if t < 0:
        raise BadParams(f"t must be non-negative, not {t}.")
    return margin_bound_base(theta, gamma) ** t


def round_success_tail(n: int) -> float:
    """(83/100)^n, the bound on the chance that fewer than n/6 of n rounds succeed."""
    if n < 1:
        raise BadParams(f"n must be at least 1, not {n}.")
    return 0.83 ** n


def _check_theta_gamma(theta: float, gamma: float) -> None:
    if not 0 < theta < 2 * gamma < 1:
        raise BadParams(f"Need 0 < theta < 2*gamma < 1, got theta={theta}, gamma={gamma}.")


def rounds_for(m: int, delta: float) -> int:
    """n = 6⌈20²·ln(8m/δ)/2⌉."""
    return 6 * math.ceil(200 * math.log(8 * m / delta))


def target_for(m_row: int) -> int:
    """t = ⌈20²·ln(m)/2⌉, at least 1."""
    return max(1, math.ceil(200 * math.log(m_row)))


@dataclass(frozen=True)
class BoostConfig:
    """Constants of one boosting run. for_sample() derives them from the sample shape and a scale profile."""

    sample_size_s: int
    rounds_n: int
    target_t: int
    theta: float = 0.75
    gamma: float = 0.45
    early_stop: bool = False
    error_tolerance: float = 1e-12

    def __post_init__(self) -> None:
        _check_theta_gamma(self.theta, self.gamma)
        if min(self.sample_size_s, self.rounds_n, self.target_t) < 1:
            raise BadParams(f"s, n and t must all be positive (s={self.sample_size_s}, n={self.rounds_n}, t={self.target_t}).")
        if self.rounds_n < self.target_t:
            raise BadParams(f"rounds_n ({self.rounds_n}) must be at least target_t ({self.target_t}).")

    @classmethod
    def for_sample(cls, m: int, delta: float, d: int, profile: str = "full", m_row: int | None = None) -> BoostConfig:
        """s = 550d, n = 6⌈200 ln(8m/δ)⌉ from the full sample size m, t = ⌈200 ln m_row⌉ from the row size, each times the profile's multiplier."""
        if not 0 < delta < 1:
            raise BadParams(f"delta must lie in (0, 1), not {delta}.")
        if d < 1 or m < 1:
            raise BadParams(f"d and m must be positive (d={d}, m={m}).")
        scale = lookup_profile(profile)
        m_row = m if m_row is None else m_row
        t = max(1, math.ceil(target_for(m_row) * scale.t))
        n = max(t, math.ceil(rounds_for(m, delta) * scale.n))
        return cls(
            sample_size_s=max(1, math.ceil(settings.boost.sample_factor * d * scale.s)),
            rounds_n=n,
            target_t=t,
            theta=settings.boost.theta,
            gamma=settings.boost.gamma,
            early_stop=scale.early_stop,
            error_tolerance=settings.boost.error_tolerance,
        )

    @property
    def alpha(self) -> float:
        return step_size(self.theta, self.gamma)

    def to_dict(self) -> dict[str, Any]:
        return {"sample_size_s": self.sample_size_s, "rounds_n": self.rounds_n, "target_t": self.target_t,
                "theta": self.theta, "gamma": self.gamma, "early_stop": self.early_stop, "error_tolerance": self.error_tolerance}


@dataclass
class WeightState:
    """The weighting D over the m examples, its cumulative vector C, and the last normalizer Z."""

    D: np.ndarray
    C: np.ndarray
    Z: float = 1.0

    @classmethod
    def uniform(cls, m: int) -> WeightState:
        D = np.full(m, 1.0 / m)
        return cls(D, cls._cumulative(D))

    @staticmethod
    def _cumulative(D: np.ndarray) -> np.ndarray:
        C = np.cumsum(D)
        C[-1] = 1.0
        return C

    def reweight(self, multipliers: np.ndarray) -> WeightState:
        D = self.D * multipliers
        Z = math.fsum(D)
        D = D / Z
        return WeightState(D, self._cumulative(D), Z)


class RandomString:
    """A seeded stream of n blocks r_1..r_n, each s uniforms in [0, 1).
    Block i only depends on (seed, key, i), so any block can be regenerated on demand and the stream
    can be shared by every row without being stored."""

    def __init__(self, seed: int, n: int, s: int, key: tuple[int, ...] = (0,)) -> None:
        self.seed = int(seed)
        self.n = int(n)
        self.s = int(s)
        self.key = tuple(key)

    def block(self, i: int) -> np.ndarray:
        """Block r_i, 1-based."""
        if not 1 <= i <= self.n:
            raise StreamExhausted(f"Asked for block {i} of a random string with {self.n} blocks.")
        return derive_rng(self.seed, *self.key, i).random(self.s)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"RandomString(seed={self.seed}, n={self.n}, s={self.s})"


def inverse_cdf(C: np.ndarray, u: float) -> int:
    """The unique 1-based l with C(l-1) ≤ u < C(l), C(0) = 0, by binary search."""
    return int(inverse_cdf_many(C, np.asarray([u]))[0])


def inverse_cdf_many(C: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse_cdf."""
    idx = np.searchsorted(C, u, side="right") + 1
    return np.minimum(idx, len(C))


@dataclass
class RoundRecord:
    """What happened in one boosting round."""

    index: int
    accepted: bool
    epsilon: float
    counter: int
    Z: float | None = None
    Z_vote: float | None = None  # normalizer recorded when the hypothesis joined the vote
    partial_loss: Fraction | None = None  # θ-margin loss of the vote so far, after this round's voter joined
    hypothesis: Hypothesis | None = None


@dataclass
class BoostTrace:
    rounds: list[RoundRecord] = field(default_factory=list)
    # (α, h) for every round that reweighted D, in order
    weighted: list[tuple[float, Hypothesis]] = field(default_factory=list)

    @property
    def accepted(self) -> int:
        return sum(r.accepted for r in self.rounds)

    def normalizer_product(self) -> float:
        return math.prod(r.Z for r in self.rounds if r.accepted and r.Z is not None)


@dataclass
class BoostResult:
    vote: MajorityVote
    fallback: bool
    trace: BoostTrace
    ledger: CostLedger

    @property
    def branch(self) -> str:
        return "fallback" if self.fallback else "certified"


def adaboost_sample(S: TrainingSequence, r: RandomString, erm: ErmOracle, cfg: BoostConfig,
                    ledger: CostLedger | None = None, provenance: dict[str, Any] | None = None) -> BoostResult:
    """Boost erm on S with the fixed random string r. Returns either a certified vote of exactly t voters
    (every example has θ-margin above θ) or the fallback ERM(S) repeated t times."""
    m = len(S)
    if m < 1:
        raise BadParams("Cannot boost on an empty sequence.")
    if r.s != cfg.sample_size_s:
        raise BadParams(f"Random string blocks have {r.s} entries but s={cfg.sample_size_s}.")
    ledger = ledger if ledger is not None else CostLedger()
    provenance = provenance or {}
    X, y = S.X, S.y
    alpha = cfg.alpha
    t = cfg.target_t
    threshold = 0.5 - cfg.gamma + cfg.error_tolerance
    probes = ceil_log(m)

    state = WeightState.uniform(m)
    trace = BoostTrace()
    voters: list[Hypothesis] = []
    sums = np.zeros(m, dtype=np.int64)
    counter = 0

    for i in range(1, cfg.rounds_n + 1):
        if cfg.early_stop and counter >= t:
            break
        u = r.block(i)
        drawn = inverse_cdf_many(state.C, u)
        ledger.sampler_draws += len(u)
        ledger.arithmetic_ops += len(u) * probes
        h = erm.train(S.view(drawn - 1), ledger)
        h.provenance = {**provenance, "round": i, "sample_size": int(len(u)), "fallback": False}

        preds = h.predict(X, ledger)
        wrong = preds != y
        eps = math.fsum(state.D[wrong])
        ledger.arithmetic_ops += m

        if eps <= threshold:
            counter += 1
            record = RoundRecord(i, True, eps, counter, hypothesis=h)
            state = state.reweight(np.exp(-alpha * preds * y))
            ledger.arithmetic_ops += 3 * m
            record.Z = state.Z
            trace.weighted.append((alpha, h))
            if counter <= t:
                voters.append(h)
                sums += preds
                record.Z_vote = state.Z
                record.partial_loss = Fraction(margin_violations(sums, y, counter, cfg.theta), m)
        else:
            # α = 0 multiplies every weight by 1, so D is left exactly as it was
            record = RoundRecord(i, False, eps, counter, hypothesis=h)
        trace.rounds.append(record)

    if counter >= t:
        loss = Fraction(margin_violations(sums, y, t, cfg.theta), m)
        ledger.arithmetic_ops += m
        if loss == 0:
            log.debug(f"Certified vote m={m} t={t} rounds={len(trace.rounds)} accepted={counter}")
            return BoostResult(MajorityVote(voters), False, trace, ledger)
        log.debug(f"Vote failed certification m={m} loss={loss}; falling back to ERM(S)")
    else:
        log.debug(f"Only {counter}/{t} rounds succeeded in {len(trace.rounds)} rounds; falling back to ERM(S)")

    h = erm.train(S, ledger)
    ledger.fallback_train_calls += 1
    h.provenance = {**provenance, "round": 0, "sample_size": m, "fallback": True}
    return BoostResult(MajorityVote([h] * t), True, trace, ledger)
