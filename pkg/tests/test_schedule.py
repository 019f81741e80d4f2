import random

import pytest

from kairos.errors import InfeasibleInput, NotConflictFree, PreconditionViolated
from kairos.graph.jobset import from_jobs, is_subset
from kairos.graph.poset import build_graph
from kairos.schedule import (
    Schedule, SeparatorDecomposition, check_feasible, extract_separator, find_conflict, resolve_conflicts,
    validate_proper,
)
from kairos.solvers.baselines import optimal_schedule

from conftest import chains_graph, random_arcs, random_feasible_schedule


def outstar_graph(k):
    return build_graph(k + 1, [(0, v) for v in range(1, k + 1)])


# Feasibility

def test_empty_schedule_of_nothing_is_feasible():
    g = build_graph(0, [])
    assert check_feasible(g, Schedule.empty(2))


def test_precedence_inside_one_slot_fails():
    g = build_graph(2, [(0, 1)])
    verdict = check_feasible(g, Schedule.from_lists([[0, 1]], 2))
    assert not verdict
    assert verdict.condition == "precedence"


def test_capacity_and_coverage_are_named():
    g = build_graph(3, [])
    assert check_feasible(g, Schedule.from_lists([[0, 1, 2]], 2)).condition == "capacity"
    assert check_feasible(g, Schedule.from_lists([[0, 1]], 2)).condition == "coverage"
    assert check_feasible(g, Schedule.from_lists([[0, 1], [1, 2]], 2)).condition == "coverage"


def test_feasibility_on_a_sub_job_set():
    g = build_graph(3, [(0, 1), (1, 2)])
    assert check_feasible(g, Schedule.from_lists([[1], [2]], 1), jobs=from_jobs([1, 2]))


def test_concatenation_and_lists():
    a = Schedule.from_lists([[0], [1, 2]], 2)
    b = Schedule.from_lists([[3]], 2)
    joined = a + b
    assert joined.makespan == 3
    assert joined.as_lists() == [[0], [1, 2], [3]]
    with pytest.raises(PreconditionViolated):
        a + Schedule.empty(3)


# Conflicts

def conflict_fixture():
    # a=0 precedes c=2 precedes d=3; b=1 is isolated.
    g = build_graph(4, [(0, 2), (2, 3)])
    s = Schedule.from_lists([[0], [1], [2], [3]], 2)
    return g, s


def test_single_slot_has_no_conflict():
    g = build_graph(3, [])
    assert find_conflict(g, Schedule.from_lists([[0, 1, 2]], 3)) is None


def test_conflict_is_found_at_the_earliest_slot():
    g, s = conflict_fixture()
    assert find_conflict(g, s) == (2, 1)


def test_resolve_fills_the_free_machine_and_trims():
    g, s = conflict_fixture()
    out = resolve_conflicts(g, s)
    assert out.as_lists() == [[0], [1, 2], [3]]
    assert find_conflict(g, out) is None


def test_resolve_swaps_with_the_smallest_sink_when_full():
    # 0 precedes 3 precedes 4; 1 and 2 are isolated sinks.
    g = build_graph(5, [(0, 3), (3, 4)])
    s = Schedule.from_lists([[0], [1, 2], [3], [4]], 2)
    out = resolve_conflicts(g, s)
    assert check_feasible(g, out)
    assert out.as_lists() == [[0], [2, 3], [1], [4]]


def test_resolve_keeps_conflict_free_schedules():
    g = chains_graph(3, 3)
    s = Schedule.from_lists([[0, 3, 6], [1, 4, 7], [2, 5, 8]], 3)
    assert resolve_conflicts(g, s) == s


def test_resolve_rejects_infeasible_input():
    g = build_graph(2, [(0, 1)])
    with pytest.raises(InfeasibleInput):
        resolve_conflicts(g, Schedule.from_lists([[1], [0]], 1))


def test_resolve_conflicts_property():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 10)
        m = rng.randint(1, 4)
        g = build_graph(n, random_arcs(rng, n, 0.3))
        s = random_feasible_schedule(rng, g, m)
        out = resolve_conflicts(g, s)
        assert check_feasible(g, out)
        assert out.makespan <= s.makespan
        assert find_conflict(g, out) is None
        assert resolve_conflicts(g, out) == out
        if g.sources.bit_count() <= m:
            first = out.slots[0]
            assert is_subset(g.sources & ~g.sinks, first)
            assert is_subset(first, g.sources)


# Separators

def test_outstar_separator_is_empty():
    g = outstar_graph(6)
    s = Schedule.from_lists([[0], [1, 2, 3], [4, 5, 6]], 3)
    d = extract_separator(g, s)
    assert d.ell == 0
    assert d.segment(0).jobs == g.sinks
    assert validate_proper(g, s, d)


def test_three_chains_level_schedule():
    g = chains_graph(3, 3)
    s = Schedule.from_lists([[0, 3, 6], [1, 4, 7], [2, 5, 8]], 3)
    d = extract_separator(g, s)
    assert d.indices == (0, 1)
    assert d.reassemble() == s
    assert validate_proper(g, s, d)


def test_non_sink_in_last_segment_fails_condition_c():
    g = chains_graph(3, 3)
    s = Schedule.from_lists([[0, 3, 6], [1, 4, 7], [2, 5, 8]], 3)
    verdict = validate_proper(g, s, SeparatorDecomposition(s, (0,)))
    assert not verdict
    assert verdict.condition == "C"


def test_wrong_first_slot_fails_structure():
    g = chains_graph(3, 3)
    s = Schedule.from_lists([[0, 3, 6], [1, 4, 7], [2, 5, 8]], 3)
    assert validate_proper(g, s, SeparatorDecomposition(s, (1,))).condition == "structure"


def test_extract_requires_conflict_free_input():
    g, s = conflict_fixture()
    with pytest.raises(NotConflictFree):
        extract_separator(g, s)


def test_extract_requires_few_sources():
    g = build_graph(4, [(0, 3), (1, 3), (2, 3)])
    s = Schedule.from_lists([[0, 1], [2], [3]], 2)
    with pytest.raises(PreconditionViolated):
        extract_separator(g, s)


def test_optimal_schedules_admit_a_proper_separator():
    rng = random.Random(12)
    checked = 0
    while checked < 200:
        n = rng.randint(1, 10)
        g = build_graph(n, random_arcs(rng, n, 0.3))
        m = max(rng.randint(1, 4), g.sources.bit_count())
        best = optimal_schedule(g, m)
        out = resolve_conflicts(g, best)
        assert out.makespan == best.makespan
        d = extract_separator(g, out)
        assert validate_proper(g, out, d)

        for q in range(d.ell + 1):
            prefix = Schedule(out.slots[:d.indices[q] + 1], m)
            expected = g.jobs & ~(g.succ_of(d.separator(q)) | g.sinks)
            assert prefix.jobs & ~g.sinks == expected
        checked += 1
