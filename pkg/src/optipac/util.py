from __future__ import annotations
from typing import Any, TypeVar
import json
import math
from fractions import Fraction
import numpy as np
from pytimeparse import parse


class ResultJSONEncoder(json.JSONEncoder):
    """Default encoder used to make sure we can write exact rationals and numpy values to JSON."""

    def default(self, o: Any) -> Any:
        if isinstance(o, Fraction):
            return {"$fraction": [o.numerator, o.denominator]}
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


class ResultJSONDecoder(json.JSONDecoder):
    """Default decoder used to make sure we can read exact rationals back from JSON."""

    def __init__(self, *args: Any, **kwargs: Any):
        def object_hook(d: dict[str, Any]) -> Any:
            if "$fraction" in d:
                return Fraction(*d["$fraction"])
            return d
        super().__init__(object_hook=object_hook, *args, **kwargs)


class Singleton:
    """Makes a class into a singleton.
    To make this work, add the following at the beginning of your __init__ (and make sure to call the super-constructor after):

    ```
    if self._initialized:
        return
    ```"""

    _instance = None
    _initialized = False

    def __new__(cls, *args: Any, **kwargs: Any):
        if not cls._instance:
            cls._instance = super(Singleton, cls).__new__(cls)
        return cls._instance

    def __init__(self, *args: Any, **kwargs: Any):
        self._initialized = True


T = TypeVar("T")


def get_dupes(L: list[T]) -> set[T]:
    """
    Given a list, get a set of all elements which appear more than once.
    """
    seen: set[T] = set()
    seen2: set[T] = set()
    for item in L:
        seen2.add(item) if item in seen else seen.add(item)
    return seen2


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Split a base seed into an independent numpy Generator for the given key path.
    The same (seed, *keys) always yields the same stream, regardless of call order or scheduling."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) % 2**64, *(int(k) for k in keys)]))


def largest_power_at_most(base: int, m: int) -> int:
    """Largest base^k <= m with k >= 1. Returns 0 if m < base."""
    if m < base:
        return 0
    p = base
    while p * base <= m:
        p *= base
    return p


def exact_log(base: int, m: int) -> int | None:
    """Return k if m == base^k exactly (k >= 0), else None."""
    if m < 1:
        return None
    k = 0
    while m % base == 0:
        m //= base
        k += 1
    return k if m == 1 else None


def ceil_log(x: float) -> int:
    """Number of binary search probes needed over x buckets."""
    return max(1, math.ceil(math.log2(max(x, 2))))


def validate_duration(duration: str, key: str = "duration", nonzero: bool = False) -> None:
    """Make sure a duration like "10 seconds" or "an hour" is valid.
    For use in validate_settings().
    You should pass in the name of the settings key you are validating so the errors are more informative."""
    assert isinstance(duration, str), f'{key} must be a string.'
    parsed_duration = parse(duration)
    assert parsed_duration is not None, f'Could not parse {key} "{duration}".'
    if nonzero:
        assert parsed_duration > 0, f'{key} must be greater than zero.'


def duration_seconds(duration: str) -> float:
    """Parse a duration string into seconds. Assumes it already passed validate_duration."""
    return float(parse(duration))
