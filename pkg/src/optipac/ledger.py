from __future__ import annotations
from typing import Any
from collections import Counter
from dataclasses import dataclass, field, fields


@dataclass
class CostLedger:
    """Operation counters for one run.
    Counters only ever go up. Parallel sub-runs get their own ledgers, which are merged afterwards,
    so a composite run's ledger is always the sum of its parts."""

    erm_train_calls: int = 0
    erm_train_examples: int = 0
    inference_calls: int = 0
    sampler_draws: int = 0
    arithmetic_ops: int = 0
    # ERM calls made on a whole row because boosting gave up (also included in erm_train_calls)
    fallback_train_calls: int = 0
    # Sample size -> number of ERM calls that received exactly that many examples
    train_sizes: Counter[int] = field(default_factory=Counter)

    COUNTERS = ("erm_train_calls", "erm_train_examples", "inference_calls", "sampler_draws", "arithmetic_ops", "fallback_train_calls")

    def record_train(self, size: int) -> None:
        self.erm_train_calls += 1
        self.erm_train_examples += size
        self.train_sizes[size] += 1

    def merge(self, other: CostLedger) -> CostLedger:
        """Add another ledger's counts into this one. Returns self."""
        for name in self.COUNTERS:
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.train_sizes.update(other.train_sizes)
        return self

    def __add__(self, other: CostLedger) -> CostLedger:
        return CostLedger().merge(self).merge(other)

    @classmethod
    def total(cls, ledgers: list[CostLedger]) -> CostLedger:
        out = cls()
        for ledger in ledgers:
            out.merge(ledger)
        return out

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "train_sizes"}
        # JSON keys must be strings; sorted so descriptors are byte-stable
        out["train_sizes"] = {str(k): v for k, v in sorted(self.train_sizes.items())}
        return out

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> CostLedger:
        ledger = cls(**{k: int(d.get(k, 0)) for k in cls.COUNTERS})
        ledger.train_sizes = Counter({int(k): int(v) for k, v in d.get("train_sizes", {}).items()})
        return ledger

    def summary(self) -> str:
        """One-line key=value rendering for logs."""
        return " ".join(f"{name}={getattr(self, name)}" for name in self.COUNTERS)
