from __future__ import annotations
from typing import Any, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
import numpy as np
from .errors import BadShape
from .ledger import CostLedger

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from .Oracle import Hypothesis


# sign(0) resolves to +1 everywhere a vote is turned into a label
TIE_LABEL = 1


def sign(sums: np.ndarray) -> np.ndarray:
    """Elementwise sign with ties broken to TIE_LABEL."""
    return np.where(sums > 0, 1, np.where(sums < 0, -1, TIE_LABEL)).astype(np.int8)


@dataclass(frozen=True)
class LabeledExample:
    """A single (point, label) pair. The point is opaque here; ERMs decide what it means."""

    point: Any
    label: int

    def __post_init__(self) -> None:
        if self.label not in (-1, 1):
            raise ValueError(f"Labels must be -1 or +1, not {self.label!r}.")


class TrainingSequence:
    """An ordered multiset of labeled examples.

    Stored as a backing store (points + labels) and an index list into it. Splitting, concatenating and
    row extraction only manipulate the index list; payloads are only read when an ERM or a hypothesis
    needs them (through X and y)."""

    __slots__ = ("_points", "_labels", "_indices")

    def __init__(self, points: Any, labels: Any, indices: Any = None) -> None:
        points = np.asarray(points)
        labels = np.asarray(labels, dtype=np.int8)
        if len(points) != len(labels):
            raise BadShape(f"Got {len(points)} points but {len(labels)} labels.")
        if labels.size and not np.all(np.abs(labels) == 1):
            raise ValueError("Labels must be -1 or +1.")
        if indices is None:
            indices = np.arange(len(labels), dtype=np.int64)
        else:
            indices = np.asarray(indices, dtype=np.int64).reshape(-1)
            if indices.size and (indices.min() < 0 or indices.max() >= len(labels)):
                raise BadShape(f"View indices must lie in [0, {len(labels)}).")
        self._points = points
        self._labels = labels
        self._indices = indices

    @classmethod
    def from_examples(cls, examples: Iterable[LabeledExample]) -> TrainingSequence:
        examples = list(examples)
        return cls([e.point for e in examples], [e.label for e in examples])

    @classmethod
    def empty_like(cls, other: TrainingSequence) -> TrainingSequence:
        """An empty view over the same backing store (the empty T of the recursive splits)."""
        return cls._view(other, np.empty(0, dtype=np.int64))

    @classmethod
    def _view(cls, base: TrainingSequence, indices: np.ndarray) -> TrainingSequence:
        out = cls.__new__(cls)
        out._points = base._points
        out._labels = base._labels
        out._indices = indices
        return out

    def __len__(self) -> int:
        return len(self._indices)

    def __getitem__(self, i: int) -> LabeledExample:
        j = self._indices[i]
        return LabeledExample(self._points[j], int(self._labels[j]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def indices(self) -> np.ndarray:
        """Positions in the backing store, in sequence order (0-based)."""
        return self._indices

    @property
    def X(self) -> np.ndarray:
        return self._points[self._indices]

    @property
    def y(self) -> np.ndarray:
        return self._labels[self._indices]

    def shares_backing(self, other: TrainingSequence) -> bool:
        return self._points is other._points and self._labels is other._labels

    def view(self, positions: Sequence[int] | np.ndarray) -> TrainingSequence:
        """A sub-sequence by 0-based positions into THIS sequence (repetition allowed)."""
        positions = np.asarray(positions, dtype=np.int64).reshape(-1)
        if positions.size and (positions.min() < 0 or positions.max() >= len(self)):
            raise BadShape(f"Positions must lie in [0, {len(self)}).")
        return self._view(self, self._indices[positions])

    def slice(self, start: int, stop: int) -> TrainingSequence:
        """Contiguous 0-based half-open slice, as a view."""
        return self._view(self, self._indices[start:stop])

    def concat(self, *others: TrainingSequence) -> TrainingSequence:
        """S ⊔ T: order and multiplicity preserved. Views over the same store stay views."""
        if all(self.shares_backing(o) for o in others):
            return self._view(self, np.concatenate([self._indices, *(o._indices for o in others)]))
        parts = [self, *others]
        points = np.concatenate([p.X for p in parts])
        labels = np.concatenate([p.y for p in parts])
        return TrainingSequence(points, labels)

    def __add__(self, other: TrainingSequence) -> TrainingSequence:
        return self.concat(other)

    def __repr__(self) -> str:
        return f"TrainingSequence(len={len(self)})"


class MajorityVote:
    """The unweighted average of t voters, Σ h_i / t."""

    def __init__(self, voters: Sequence[Hypothesis]) -> None:
        if len(voters) < 1:
            raise ValueError("A majority vote needs at least one voter.")
        self.voters: tuple[Hypothesis, ...] = tuple(voters)

    @property
    def t(self) -> int:
        return len(self.voters)

    def vote_sums(self, points: Any, ledger: CostLedger | None = None) -> np.ndarray:
        """Integer Σ_i h_i(x) for every point (t inference calls per point)."""
        total = np.zeros(len(points), dtype=np.int64)
        for h in self.voters:
            total += h.predict(points, ledger)
        return total

    def predict(self, points: Any, ledger: CostLedger | None = None) -> np.ndarray:
        return sign(self.vote_sums(points, ledger))

    def __repr__(self) -> str:
        return f"MajorityVote(t={self.t})"


class Ensemble(MajorityVote):
    """The final predictor: l voters sampled from boosted majorities, combined by sign of the sum."""

    @property
    def l(self) -> int:
        return self.t

    def __repr__(self) -> str:
        return f"Ensemble(l={self.l})"


def margin_violations(sums: np.ndarray, labels: np.ndarray, t: int, theta: float | Fraction) -> int:
    """Number of examples whose margin y·sum/t is ≤ theta, decided in exact integer arithmetic."""
    theta = Fraction(theta)
    # y·sum/t ≤ p/q  ⟺  y·sum·q ≤ p·t; Python ints when q is too big for int64
    dtype = np.int64 if theta.denominator < 2**31 and t < 2**31 else object
    lhs = labels.astype(dtype) * sums.astype(dtype) * theta.denominator
    return int(np.count_nonzero(lhs <= theta.numerator * t))


def vote_margin(vote: MajorityVote, ex: LabeledExample, ledger: CostLedger | None = None) -> Fraction:
    """Margin y·(1/t)Σ h_i(x) of a vote on one example, as an exact rational in [-1, 1]."""
    points = np.asarray([ex.point])
    s = int(vote.vote_sums(points, ledger)[0])
    return Fraction(ex.label * s, vote.t)


def empirical_margin_loss(vote: MajorityVote, S: TrainingSequence, theta: float | Fraction, ledger: CostLedger | None = None) -> Fraction:
    """Fraction of S whose margin is ≤ theta (boundary counts as a violation), as an exact rational.
    Since the numerator is an integer, "< 1/|S|" is the same as "== 0"."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), not {theta}.")
    if len(S) < 1:
        raise BadShape("Cannot evaluate a margin loss on an empty sequence.")
    sums = vote.vote_sums(S.X, ledger)
    return Fraction(margin_violations(sums, S.y, vote.t, theta), len(S))


def predict_ensemble(e: Ensemble, point: Any, ledger: CostLedger | None = None) -> int:
    """sign of Σ voter_i(point) with ties going to +1. Exactly l inference calls."""
    return int(e.predict(np.asarray([point]), ledger)[0])
