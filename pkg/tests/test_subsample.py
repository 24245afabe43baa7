from __future__ import annotations
import itertools
import numpy as np
import pytest
from hypothesis import given, strategies as st
from optipac.core import TrainingSequence
from optipac.errors import BadShape
from optipac.subsample import (RowSelector, depth_of, enumerate_rows_hanneke, enumerate_rows_recursive, extract_row, row_ranges,
                               truncate_to_power)
from optipac.util import get_dupes


def indexed(m: int) -> TrainingSequence:
    return TrainingSequence(np.arange(m, dtype=float), np.ones(m))


def row_key(row: TrainingSequence) -> tuple[int, ...]:
    return tuple(sorted(row.indices.tolist()))


class TestRowRanges:
    def test_last_selector(self):
        assert row_ranges(2, (5, 5)).ranges == ((1, 1), (31, 36), (6, 6))

    def test_first_selector(self):
        assert row_ranges(2, (1, 1)).ranges == ((1, 1), (7, 12), (2, 2))

    def test_row_contents(self):
        row = extract_row(indexed(36), (5, 5))
        # 1-based [1, 31..36, 6] as 0-based positions
        assert row.indices.tolist() == [0, 30, 31, 32, 33, 34, 35, 5]

    @given(st.integers(1, 4).flatmap(lambda k: st.lists(st.integers(1, 5), min_size=k, max_size=k)))
    def test_size_and_prefix(self, w):
        rr = row_ranges(len(w), w)
        assert rr.size == (6 ** len(w) + 4) // 5
        assert rr.prefix == (1, 1)
        assert len(set(rr.positions().tolist())) == rr.size

    def test_bad_selectors(self):
        with pytest.raises(BadShape):
            RowSelector.of([0])
        with pytest.raises(BadShape):
            RowSelector.of([6, 1])
        with pytest.raises(BadShape):
            RowSelector(2, (1,))
        with pytest.raises(BadShape):
            row_ranges(3, (1, 1))


class TestBijection:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_closed_form_matches_recursion(self, k):
        S = indexed(6 ** k)
        closed = [row_key(extract_row(S, w)) for w in itertools.product(range(1, 6), repeat=k)]
        recursive = [row_key(r) for r in enumerate_rows_recursive(S)]
        assert not get_dupes(closed)
        assert sorted(closed) == sorted(recursive)
        assert all(len(r) == (6 ** k + 4) // 5 for r in recursive)

    def test_rows_are_views(self):
        S = indexed(36)
        assert extract_row(S, (2, 3)).shares_backing(S)
        assert all(r.shares_backing(S) for r in enumerate_rows_recursive(S))

    def test_extra_tail_is_appended(self):
        S = indexed(42)
        rows = enumerate_rows_recursive(S.slice(0, 36), S.slice(36, 42))
        assert all(r.indices[-6:].tolist() == list(range(36, 42)) for r in rows)

    def test_refuses_deep_enumeration(self):
        with pytest.raises(BadShape):
            enumerate_rows_recursive(indexed(6 ** 7))


class TestShapes:
    def test_depth_of(self):
        assert depth_of(indexed(216)) == 3
        with pytest.raises(BadShape):
            depth_of(indexed(200))
        with pytest.raises(BadShape):
            depth_of(indexed(1))

    def test_truncate(self):
        S = truncate_to_power(indexed(200), 6)
        assert len(S) == 36 and S.indices.tolist() == list(range(36))

    def test_truncate_too_small(self):
        with pytest.raises(BadShape):
            truncate_to_power(indexed(5), 6)


class TestHannekeRows:
    def test_sixteen(self):
        rows = enumerate_rows_hanneke(indexed(16))
        assert len(rows) == 9
        assert all(len(r) == 11 for r in rows)

    def test_four(self):
        rows = enumerate_rows_hanneke(indexed(4))
        assert sorted(row_key(r) for r in rows) == [(0, 1, 2), (0, 1, 3), (0, 2, 3)]

    def test_base_case(self):
        rows = enumerate_rows_hanneke(indexed(3))
        assert [r.indices.tolist() for r in rows] == [[0, 1, 2]]

    def test_not_a_power_of_four(self):
        with pytest.raises(BadShape):
            enumerate_rows_hanneke(indexed(12))
