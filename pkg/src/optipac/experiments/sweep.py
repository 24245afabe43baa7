"""
Error-vs-m sweeps: train every learner at every m for every seed, measure exact error on the
distribution's universe, and emit one row per (learner, m, seed).
"""

from __future__ import annotations
from typing import Any
from dataclasses import dataclass, field, replace
from concurrent.futures import ProcessPoolExecutor
import copy
import math
import time
import tomlkit
from dynaconf import LazySettings, Validator
from ..analysis import exact_error
from ..errors import BadParams, OptipacError
from ..learners import BaggingLearner, HannekeLearner, LearnerConfig, OptimalLearner, PlainERMLearner
from ..log import log
from ..settings import settings, profile as lookup_profile
from ..util import duration_seconds, exact_log
from .universes import DISTRIBUTIONS, make_distribution, sample_dataset

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from ..Learner import Learner

LEARNERS = ("optimal", "hanneke", "bagging", "erm")


def build_learner(name: str, *, delta: float, d: int, seed: int, profile: str = "full", frac: float | None = None,
                  jobs: int = 1, cache_rows: bool = True) -> Learner:
    """Make a learner by its CLI name with the shared experiment parameters."""
    if name == "optimal":
        return OptimalLearner(LearnerConfig(delta=delta, d=d, seed=seed, profile=profile, jobs=jobs, cache_rows=cache_rows))
    if name == "hanneke":
        return HannekeLearner()
    if name == "bagging":
        return BaggingLearner(delta=delta, frac=frac, seed=seed)
    if name == "erm":
        return PlainERMLearner()
    raise BadParams(f"Unknown learner '{name}'. Known: {', '.join(LEARNERS)}")


def shape_compatible(learner: str, m: int) -> bool:
    """Whether m can be fed to the learner without truncation."""
    if learner == "optimal":
        k = exact_log(6, m)
        return k is not None and k >= 1
    if learner == "hanneke":
        return 1 <= m <= 3 or exact_log(4, m) is not None
    return m >= 1


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep. Per-learner ladders override the shared m ladder, since the optimal learner wants
    powers of 6 and Hanneke's wants powers of 4."""

    distribution: str = "threshold"
    m: tuple[int, ...] = (216, 1296)
    delta: float = 0.1
    seeds: tuple[int, ...] = tuple(range(5))
    learners: tuple[str, ...] = ("optimal",)
    profile: str = "desk"
    d: int | None = None
    frac: float | None = None
    output: str = "sweep"
    ladders: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        try:
            self.validate()
        except AssertionError as e:
            raise BadParams(f"Invalid sweep spec: {e}") from None

    def validate(self) -> None:
        assert self.distribution in DISTRIBUTIONS, f"unknown distribution '{self.distribution}' (known: {', '.join(sorted(DISTRIBUTIONS))})"
        assert 0 < self.delta < 1, f"delta ({self.delta}) must lie in (0, 1)"
        assert self.seeds, "at least one seed is needed"
        assert self.learners, "at least one learner is needed"
        assert self.d is None or self.d >= 1, "d must be positive"
        lookup_profile(self.profile)
        for learner in self.learners:
            assert learner in LEARNERS, f"unknown learner '{learner}' (known: {', '.join(LEARNERS)})"
            for m in self.ladder(learner):
                assert shape_compatible(learner, m), f"m={m} is not shape-compatible with learner '{learner}'"
        for learner in self.ladders:
            assert learner in self.learners, f"ladder given for learner '{learner}', which is not swept"

    def ladder(self, learner: str) -> tuple[int, ...]:
        return tuple(self.ladders.get(learner, self.m))

    def jobs(self) -> list[tuple[str, int, int]]:
        """Every (learner, m, seed) to run, in emission order."""
        return sorted((learner, m, seed) for learner in self.learners for m in self.ladder(learner) for seed in self.seeds)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"distribution": self.distribution, "m": list(self.m), "delta": self.delta, "seeds": list(self.seeds),
                               "learners": list(self.learners), "profile": self.profile, "output": self.output}
        if self.d is not None:
            out["d"] = self.d
        if self.frac is not None:
            out["frac"] = self.frac
        if self.ladders:
            out["ladders"] = {k: list(v) for k, v in self.ladders.items()}
        return out


def load_spec(path: str | None = None, overrides: dict[str, Any] | None = None) -> SweepSpec:
    """Read a sweep spec from a TOML file (if given) and lay CLI overrides on top. Unset keys keep their defaults.

    `seeds` may be a list of seeds or a count (meaning 0..count-1)."""
    values: dict[str, Any] = {}
    if path is not None:
        with open(path, "r") as f:
            values = tomlkit.load(f).unwrap()
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})

    checker = LazySettings()
    checker.update(copy.deepcopy(values))  # type: ignore
    checker.validators.register(
        Validator('distribution', 'profile', 'output', is_type_of=str,
                  messages={"operations": "'{name}' must be a string, not '{value}'."}),
        Validator('delta', gt=0, lt=1,
                  messages={"operations": "{name} ({value}) must lie strictly between 0 and 1."}),
        Validator('m', 'learners', is_type_of=list,
                  messages={"operations": "'{name}' must be a list, not '{value}'."}),
        Validator('d', is_type_of=int, gte=1,
                  messages={"operations": "{name} ({value}) must be a positive integer."}),
        Validator('frac', gte=0.02, lte=1,
                  messages={"operations": "{name} ({value}) must lie in [0.02, 1]."}),
    )  # type: ignore
    try:
        checker.validators.validate()
    except Exception as e:
        raise BadParams(f"Invalid sweep spec: {e}") from None

    unknown = set(values) - {"distribution", "m", "delta", "seeds", "learners", "profile", "d", "frac", "output", "ladders"}
    if unknown:
        raise BadParams(f"Unknown sweep spec keys: {', '.join(sorted(unknown))}")
    if "seeds" in values and isinstance(values["seeds"], int):
        values["seeds"] = range(values["seeds"])
    for key in ("m", "seeds", "learners"):
        if key in values:
            values[key] = tuple(values[key])
    if "ladders" in values:
        values["ladders"] = {k: tuple(v) for k, v in values["ladders"].items()}
    return SweepSpec(**values)


def run_trial(spec: SweepSpec, learner_name: str, m: int, seed: int) -> dict[str, Any]:
    """Train one learner on one seeded sample and measure its exact error. Errors are recorded in the row
    rather than raised, so one bad trial doesn't sink the sweep."""
    row: dict[str, Any] = {"learner": learner_name, "m": m, "delta": spec.delta, "seed": seed}
    start = time.perf_counter()
    try:
        dist = make_distribution(spec.distribution, m)
        d = spec.d or dist.d
        S = sample_dataset(dist.universe, m, seed)
        learner = build_learner(learner_name, delta=spec.delta, d=d, seed=seed, profile=spec.profile, frac=spec.frac)
        report = learner.fit(S, dist.erm)
        error = exact_error(report.predictor, dist.universe)
    except OptipacError as e:
        log.smart_error(f"Trial learner={learner_name} m={m} seed={seed} failed: {e}")
        row.update({"error": math.nan, "erm_train_calls": 0, "erm_train_examples": 0, "inference_calls": 0, "fallbacks": 0,
                    "wall_ms": 0, "failure": repr(e)})
        return row
    wall_ms = (time.perf_counter() - start) * 1000
    row.update({
        "m": report.m_effective,
        "error": error,
        "erm_train_calls": report.ledger.erm_train_calls,
        "erm_train_examples": report.ledger.erm_train_examples,
        "inference_calls": report.ledger.inference_calls,
        "fallbacks": report.fallback_count,
        "wall_ms": round(wall_ms, 3) if settings.experiments.record_timing else 0,
    })
    log.info(f"Trial learner={learner_name} m={m} seed={seed} error={error:.6g} fallbacks={report.fallback_count}")
    return row


def _run_job(args: tuple[SweepSpec, str, int, int]) -> dict[str, Any]:
    return run_trial(*args)


def run_error_sweep(spec: SweepSpec, jobs: int = 1) -> list[dict[str, Any]]:
    """Run every trial of the spec (in parallel when jobs > 1) and return the rows sorted by (learner, m, seed)."""
    work = [(spec, learner, m, seed) for learner, m, seed in spec.jobs()]
    log.info(f"Sweeping {len(work)} trials distribution={spec.distribution} profile={spec.profile} jobs={jobs}")
    start = time.perf_counter()
    if jobs <= 1:
        rows = [_run_job(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_job, work))
    elapsed = time.perf_counter() - start
    budget = duration_seconds(settings.experiments.time_budget)
    if elapsed > budget:
        log.warning(f"Sweep took {elapsed:.1f}s, over the time budget of {settings.experiments.time_budget} ({budget:.0f}s)")
    return sorted(rows, key=lambda r: (r["learner"], r["m"], r["seed"]))


def with_overrides(spec: SweepSpec, **changes: Any) -> SweepSpec:
    """A copy of spec with the non-None changes applied."""
    return replace(spec, **{k: v for k, v in changes.items() if v is not None})
