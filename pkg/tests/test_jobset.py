from math import comb

from kairos.graph.jobset import binom_le, fmt, from_jobs, full, is_subset, lowest, members, size, smallest, submasks


def test_from_jobs_and_members():
    s = from_jobs([5, 0, 3, 3])
    assert s == 0b101001
    assert list(members(s)) == [0, 3, 5]
    assert size(s) == 3
    assert fmt(s) == "{0,3,5}"
    assert fmt(0) == "{}"


def test_full_and_lowest():
    assert full(0) == 0
    assert full(4) == 0b1111
    assert lowest(from_jobs([7, 2])) == 2
    assert lowest(0) == -1


def test_is_subset():
    assert is_subset(0, 0)
    assert is_subset(from_jobs([1]), from_jobs([1, 2]))
    assert not is_subset(from_jobs([1, 3]), from_jobs([1, 2]))


def test_submasks_visit_every_subset_once():
    s = from_jobs([1, 4, 6])
    subs = list(submasks(s))
    assert len(subs) == 8
    assert len(set(subs)) == 8
    assert subs[0] == s and subs[-1] == 0
    assert all(is_subset(x, s) for x in subs)
    assert list(submasks(0)) == [0]


def test_smallest():
    s = from_jobs([9, 2, 5, 7])
    assert smallest(s, 2) == from_jobs([2, 5])
    assert smallest(s, 10) == s
    assert smallest(s, 0) == 0


def test_binom_le():
    assert binom_le(5, 0) == 1
    assert binom_le(5, 2) == 1 + 5 + 10
    assert binom_le(4, 9) == 16
    assert binom_le(6, -1) == 0
    assert binom_le(10, 4) == sum(comb(10, i) for i in range(5))
