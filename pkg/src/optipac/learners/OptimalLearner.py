from __future__ import annotations
from typing import Any
from dataclasses import dataclass, field
from concurrent.futures import ProcessPoolExecutor
import math
from ..Learner import Learner, TrainReport
from ..boost import BoostConfig, BoostResult, RandomString, adaboost_sample
from ..core import Ensemble, TrainingSequence
from ..errors import BadParams
from ..ledger import CostLedger
from ..log import log
from ..settings import settings, profile as lookup_profile
from ..subsample import RowSelector, depth_of, extract_row
from ..util import derive_rng

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from ..Oracle import ErmOracle, Hypothesis


def voters_count(m: int, delta: float, d: int, scale: float = 1.0) -> int:
    """l = ⌈16·200·ln(m/(δ(d+ln(1/δ))))/9⌉, times the profile's multiplier, at least 1."""
    l = math.ceil(3200 / 9 * math.log(m / (delta * (d + math.log(1 / delta)))))
    return max(1, math.ceil(l * scale))


@dataclass
class LearnerConfig:
    """Parameters of the random majority voter. Anything left as None is derived from the sample."""

    delta: float = field(default_factory=lambda: settings.learner.delta)
    d: int = 1
    seed: int = field(default_factory=lambda: settings.learner.seed)
    voters_l: int | None = None
    boost: BoostConfig | None = None
    cache_rows: bool = True
    profile: str = "full"
    jobs: int = field(default_factory=lambda: settings.learner.jobs)

    def __post_init__(self) -> None:
        if not 0 < self.delta < 1:
            raise BadParams(f"delta must lie in (0, 1), not {self.delta}.")
        if self.d < 1:
            raise BadParams(f"d must be at least 1, not {self.d}.")
        if self.voters_l is not None and self.voters_l < 1:
            raise BadParams(f"voters_l must be at least 1, not {self.voters_l}.")
        if self.jobs < 1:
            raise BadParams(f"jobs must be at least 1, not {self.jobs}.")
        lookup_profile(self.profile)

    def boost_config(self, m: int) -> BoostConfig:
        """The boosting constants for a sample of size m (rows have size (m+4)/5)."""
        return self.boost or BoostConfig.for_sample(m, self.delta, self.d, self.profile, m_row=(m + 4) // 5)

    def voters(self, m: int) -> int:
        return self.voters_l or voters_count(m, self.delta, self.d, lookup_profile(self.profile).l)


def _boost_row(S: TrainingSequence, w: tuple[int, ...], r: RandomString, erm: ErmOracle, cfg: BoostConfig) -> BoostResult:
    row = extract_row(S, RowSelector.of(w))
    return adaboost_sample(row, r, erm, cfg, CostLedger(), provenance={"row": list(w)})


class OptimalLearner(Learner):
    """The random majority voter.

    Draws l row selectors w_i uniformly from {1..5}^k, boosts the ERM on each selected row with one shared
    random string, and keeps voter z_i (uniform over 1..t) of that row's vote. Predicts with the sign of
    the sum of the l kept voters, so a prediction costs exactly l hypothesis inferences.
    Because the ERM is deterministic and the random string is shared, a row drawn twice boosts to the same
    vote, so each distinct row is boosted once."""

    cli_name = "optimal"
    shape_base = 6

    def __init__(self, cfg: LearnerConfig | None = None, name: str | None = None) -> None:
        super().__init__(name)
        self.cfg = cfg or LearnerConfig()

    def _fit(self, S: TrainingSequence, erm: ErmOracle) -> TrainReport:
        cfg = self.cfg
        m = len(S)
        k = depth_of(S)
        bcfg = cfg.boost_config(m)
        l = cfg.voters(m)
        r = RandomString(cfg.seed, bcfg.rounds_n, bcfg.sample_size_s, key=(0,))
        log.info(f"Random majority voter m={m} k={k} l={l} s={bcfg.sample_size_s} n={bcfg.rounds_n} t={bcfg.target_t}")

        rng = derive_rng(cfg.seed, 1)
        W = rng.integers(1, 6, size=(l, k))
        Z = rng.integers(1, bcfg.target_t + 1, size=l)
        ledger = CostLedger()
        ledger.sampler_draws += l * (k + 1)

        selectors = [tuple(int(v) for v in row) for row in W]
        if cfg.cache_rows:
            jobs_list = list(dict.fromkeys(selectors))
        else:
            jobs_list = selectors
        results = self._boost_rows(S, jobs_list, r, erm, bcfg)

        row_ledgers = [res.ledger for res in results]
        for sub in row_ledgers:
            ledger.merge(sub)

        by_row = dict(zip(jobs_list, results)) if cfg.cache_rows else None
        voters: list[Hypothesis] = []
        branches: list[dict[str, Any]] = []
        seen: set[tuple[int, ...]] = set()
        fallback_count = cache_hits = 0
        for i, (w, z) in enumerate(zip(selectors, Z)):
            res = by_row[w] if by_row is not None else results[i]
            cached = cfg.cache_rows and w in seen
            seen.add(w)
            cache_hits += cached
            if res.fallback:
                fallback_count += 1
                voters.append(res.vote.voters[0])
            else:
                voters.append(res.vote.voters[int(z) - 1])
            branches.append({"w": list(w), "z": int(z), "branch": res.branch, "cached": bool(cached)})

        return TrainReport(
            predictor=Ensemble(voters),
            ledger=ledger,
            m_input=m,
            m_effective=m,
            fallback_count=fallback_count,
            cache_hits=cache_hits,
            branches=branches,
            row_ledgers=row_ledgers,
            params={"delta": cfg.delta, "d": cfg.d, "seed": cfg.seed, "voters_l": l, "k": k,
                    "profile": cfg.profile, "cache_rows": cfg.cache_rows, "boost": bcfg.to_dict()},
        )

    def _boost_rows(self, S: TrainingSequence, rows: list[tuple[int, ...]], r: RandomString, erm: ErmOracle, bcfg: BoostConfig) -> list[BoostResult]:
        """Boost every listed row, in parallel when jobs > 1. Results come back in list order either way."""
        if self.cfg.jobs <= 1 or len(rows) <= 1:
            return [_boost_row(S, w, r, erm, bcfg) for w in rows]
        log.debug(f"Boosting {len(rows)} rows on {self.cfg.jobs} workers")
        with ProcessPoolExecutor(max_workers=self.cfg.jobs) as pool:
            n = len(rows)
            return list(pool.map(_boost_row, [S] * n, rows, [r] * n, [erm] * n, [bcfg] * n))

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "cache_rows": self.cfg.cache_rows, "profile": self.cfg.profile}


def train_optimal(S: TrainingSequence, erm: ErmOracle, cfg: LearnerConfig | None = None) -> TrainReport:
    return OptimalLearner(cfg).fit(S, erm)

