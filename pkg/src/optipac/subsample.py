"""
The recursive subsampling scheme and its closed-form row lookup.

Splitting S (|S| = 6^k) into six consecutive blocks and recursing on the first one with each of the
other five appended gives 5^k rows of size (m+4)/5. Because the recursion always descends into the
leading block, the row picked by a selector w ∈ {1..5}^k can be written down directly as index ranges,
without building the other rows. Hanneke's four-way split is here too, for the baseline learner.

All ranges are 1-based closed intervals, as in [a+1, b].
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Sequence
import numpy as np
from .core import TrainingSequence
from .errors import BadShape
from .util import exact_log, largest_power_at_most

# Above this the 5^k materialized rows stop being a useful test oracle
MAX_ENUMERATION_DEPTH = 6


@dataclass(frozen=True)
class RowSelector:
    """Picks one row of the subsampling scheme: w ∈ {1..5}^k, with m = 6^k."""

    k: int
    w: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise BadShape(f"k must be at least 1, not {self.k}.")
        if len(self.w) != self.k:
            raise BadShape(f"Selector has {len(self.w)} coordinates but k={self.k}.")
        if any(not 1 <= int(wj) <= 5 for wj in self.w):
            raise BadShape(f"Selector coordinates must lie in 1..5, got {self.w}.")

    @classmethod
    def of(cls, w: Sequence[int]) -> RowSelector:
        return cls(len(w), tuple(int(wj) for wj in w))

    @property
    def m(self) -> int:
        return 6 ** self.k


@dataclass(frozen=True)
class RowRanges:
    """The prefix [1,1] followed by the k ranges of a row, each (first, last), 1-based and closed."""

    ranges: tuple[tuple[int, int], ...]

    @property
    def prefix(self) -> tuple[int, int]:
        return self.ranges[0]

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.ranges)

    def positions(self) -> np.ndarray:
        """0-based positions in row order."""
        return np.concatenate([np.arange(lo - 1, hi, dtype=np.int64) for lo, hi in self.ranges])


def row_ranges(k: int, w: RowSelector | Sequence[int]) -> RowRanges:
    """Index ranges of the row selected by w, in O(k) arithmetic.
    range_j = [6^k·w_j/6^j + 1, 6^k·(w_j+1)/6^j]."""
    sel = w if isinstance(w, RowSelector) else RowSelector.of(w)
    if sel.k != k:
        raise BadShape(f"Selector has k={sel.k} but the sequence has k={k}.")
    m = 6 ** k
    ranges = [(1, 1)]
    for j, wj in enumerate(sel.w, start=1):
        block = m // 6 ** j
        ranges.append((block * wj + 1, block * (wj + 1)))
    return RowRanges(tuple(ranges))


def depth_of(S: TrainingSequence, base: int = 6) -> int:
    """k with |S| = base^k, or BadShape."""
    k = exact_log(base, len(S))
    if k is None or k < 1:
        raise BadShape(f"|S| = {len(S)} is not a positive power of {base}.")
    return k


def extract_row(S: TrainingSequence, w: RowSelector | Sequence[int]) -> TrainingSequence:
    """The row selected by w, as a view over S (prefix, then range_1 ... range_k). O(m) at most, no copies."""
    k = depth_of(S)
    return S.view(row_ranges(k, w).positions())


def enumerate_rows_recursive(S: TrainingSequence, T: TrainingSequence | None = None) -> list[TrainingSequence]:
    """Run the recursive split literally and return every row, in recursion order.
    This is the reference the closed-form lookup is checked against, not something learners call."""
    k = depth_of(S)
    if k > MAX_ENUMERATION_DEPTH:
        raise BadShape(f"Refusing to materialize 5^{k} rows (max depth {MAX_ENUMERATION_DEPTH}).")
    if T is None:
        T = TrainingSequence.empty_like(S)
    return _split6(S, T)


def _split6(S: TrainingSequence, T: TrainingSequence) -> list[TrainingSequence]:
    if len(S) < 6:
        return [S.concat(T)]
    b = len(S) // 6
    blocks = [S.slice(i * b, (i + 1) * b) for i in range(6)]
    rows: list[TrainingSequence] = []
    for i in range(1, 6):
        rows.extend(_split6(blocks[0], blocks[i].concat(T)))
    return rows


def enumerate_rows_hanneke(S: TrainingSequence, T: TrainingSequence | None = None) -> list[TrainingSequence]:
    """Hanneke's three-way recursion: split into four quarters S_0..S_3 and recurse on S_0 with
    two of the other three appended. Stops at |S| ≤ 3 and returns S ⊔ T."""
    if len(S) > 3:
        k = exact_log(4, len(S))
        if k is None:
            raise BadShape(f"|S| = {len(S)} is not a power of 4.")
    if T is None:
        T = TrainingSequence.empty_like(S)
    return _split4(S, T)


def _split4(S: TrainingSequence, T: TrainingSequence) -> list[TrainingSequence]:
    if len(S) <= 3:
        return [S.concat(T)]
    q = len(S) // 4
    s0, s1, s2, s3 = (S.slice(i * q, (i + 1) * q) for i in range(4))
    return [*_split4(s0, s2.concat(s3, T)),
            *_split4(s0, s1.concat(s3, T)),
            *_split4(s0, s1.concat(s2, T))]


def truncate_to_power(S: TrainingSequence, base: int) -> TrainingSequence:
    """The longest prefix of S whose length is a power of base (at least base itself)."""
    m = largest_power_at_most(base, len(S))
    if m == 0:
        raise BadShape(f"Need at least {base} examples, got {len(S)}.")
    return S.slice(0, m)
