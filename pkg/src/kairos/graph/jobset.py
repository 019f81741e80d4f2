"""
File: "src/kairos/graph/jobset.py"
Context: JobSet - dense job sets encoded as integer bitmasks.

Bit v of a JobSet is set iff job v is a member. Python ints give union,
intersection and difference in O(n/w) and hash cheaply as memo keys.
"""
from math import comb
from typing import Iterable, Iterator, TypeAlias

JobSet: TypeAlias = int

EMPTY: JobSet = 0


def from_jobs(jobs: Iterable[int]) -> JobSet:
    mask = 0
    for v in jobs:
        mask |= 1 << v
    return mask


def full(n: int) -> JobSet:
    """All jobs 0..n-1."""
    return (1 << n) - 1


def size(s: JobSet) -> int:
    return s.bit_count()


def members(s: JobSet) -> Iterator[int]:
    """Members in ascending order."""
    while s:
        low = s & -s
        yield low.bit_length() - 1
        s ^= low


def lowest(s: JobSet) -> int:
    """Smallest member; -1 for the empty set."""
    return (s & -s).bit_length() - 1


def is_subset(a: JobSet, b: JobSet) -> bool:
    return a & ~b == 0


def submasks(s: JobSet) -> Iterator[JobSet]:
    """Every subset of `s`, the full set first and the empty set last."""
    sub = s
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & s


def smallest(s: JobSet, k: int) -> JobSet:
    """The k smallest-ID members of `s` (all of them when k >= |s|)."""
    out = 0
    while s and k > 0:
        low = s & -s
        out |= low
        s ^= low
        k -= 1
    return out


def binom_le(n: int, k: int) -> int:
    """binom(n, <=k) = sum_{i=0..k} binom(n, i)."""
    return sum(comb(n, i) for i in range(0, min(n, k) + 1)) if k >= 0 else 0


def fmt(s: JobSet) -> str:
    return "{" + ",".join(str(v) for v in members(s)) + "}"
