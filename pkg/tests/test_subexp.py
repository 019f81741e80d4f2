import random
import time
import warnings

import pytest

from kairos.errors import BadParams, InstanceTooLarge
from kairos.graph.jobset import from_jobs
from kairos.graph.poset import build_graph
from kairos.solvers.base import Instance
from kairos.solvers.baselines import optimal_schedule, solve_antichain_dp
from kairos.solvers.subexp import (
    BranchStats, MemoTable, TreeBounds, default_lambda, parse_lambda, proportional_lambda, report_tree_bounds,
    resolve_lambda, schedule_interval, solve_subexp,
)

from conftest import chains_graph, random_arcs


def test_default_lambda():
    assert default_lambda(0, 3) == 1
    assert default_lambda(9, 1) == 3
    assert default_lambda(10, 3) == 5


def test_tree_bounds():
    bounds = TreeBounds.of(6, 1, 2)
    assert bounds.red_nonleaves == 1 + 6 + 15 + 20 + 1
    assert bounds.tree_height == 4
    assert bounds.children == 1 + 6 + 15


@pytest.mark.parametrize("graph,m,expected", [
    (chains_graph(3, 3), 3, 3),
    (build_graph(7, []), 3, 3),
    (build_graph(1, []), 2, 1),
    (build_graph(6, [(0, v) for v in range(1, 6)]), 3, 3),
    (build_graph(4, [(0, 1), (1, 2), (2, 3)]), 3, 4),
])
def test_known_optima(graph, m, expected):
    result = solve_subexp(Instance(graph, m), witness=True)
    assert result.makespan == expected
    assert result.algorithm == "subexp"
    assert result.verify(Instance(graph, m))


def test_empty_instance():
    result = solve_subexp(Instance(build_graph(0, []), 2), witness=True)
    assert result.makespan == 0
    assert result.witness.makespan == 0


def test_agrees_with_exhaustive_search(rng, make_instance):
    for _ in range(60):
        inst = make_instance(rng, rng.randint(1, 9), rng.randint(1, 3), rng.uniform(0.1, 0.5))
        result = solve_subexp(inst, witness=True)
        assert result.makespan == optimal_schedule(inst.graph, inst.m).makespan
        assert result.verify(inst)


def test_proportional_lambda():
    assert proportional_lambda(0) == 1
    assert proportional_lambda(6) == 1
    assert proportional_lambda(14) == 2
    assert proportional_lambda(20) == 3
    assert proportional_lambda(100) == 15


def test_lambda_arguments():
    assert parse_lambda("4") == 4
    assert parse_lambda("proportional") == "proportional"
    assert resolve_lambda(None, 10, 3) == default_lambda(10, 3)
    assert resolve_lambda("sqrt", 10, 3) == 5
    assert resolve_lambda("proportional", 40, 3) == 6
    assert resolve_lambda(2, 40, 3) == 2
    with pytest.raises(BadParams):
        parse_lambda("fastest")
    with pytest.raises(BadParams):
        resolve_lambda("fastest", 4, 2)


def test_proportional_lambda_on_small_instances():
    inst = Instance(chains_graph(1, 5), 1)
    result = solve_subexp(inst, lam="proportional")
    assert result.makespan == 5
    assert result.counters['lambda'] == 1


def test_lambda_never_changes_the_answer(rng, make_instance):
    for _ in range(10):
        n, m = rng.randint(4, 9), rng.randint(1, 3)
        inst = make_instance(rng, n, m)
        lambdas = {1, default_lambda(n, m), proportional_lambda(n)}
        answers = {solve_subexp(inst, lam=lam).makespan for lam in lambdas}
        answers.add(solve_subexp(inst, lam="proportional").makespan)
        assert answers == {optimal_schedule(inst.graph, m).makespan}


def test_counters_stay_within_bounds(context, rng, make_instance):
    session, _, _ = context
    inst = make_instance(rng, 9, 2)
    result = solve_subexp(inst, lam=2)
    stats = session.get("subexp_stats")
    assert isinstance(stats, BranchStats)
    assert report_tree_bounds(stats)
    assert result.counters['total_calls'] == stats.total_calls
    assert result.counters['lambda'] == 2
    assert result.counters['leaf_calls'] + result.counters['nonleaf_calls'] == result.counters['total_calls']


def test_counters_reach_the_active_monitor(context, rng, make_instance):
    _, monitor, _ = context
    solve_subexp(make_instance(rng, 6, 2))
    assert monitor.get_metric("subexp_total_calls") > 0


def test_bounds_verdict_names_failures():
    stats = BranchStats(n=4, m=1, lam=1, red_nonleaves=10_000)
    verdict = report_tree_bounds(stats)
    assert not verdict
    assert verdict.failed == ('red_nonleaves',)


def test_guards():
    with pytest.raises(InstanceTooLarge):
        solve_subexp(Instance(build_graph(128, []), 2))
    with pytest.raises(BadParams):
        solve_subexp(Instance(build_graph(3, []), 2), lam=0)


def test_memo_keys_and_clear():
    g = chains_graph(2, 3)
    plus = g.with_super_source()
    s0 = 1 << g.n
    memo = MemoTable(plus, 2)
    a, b = s0, g.sinks
    assert memo.split_key(MemoTable.key(a, b)) == (a, b)
    assert memo.jobs_of(MemoTable.key(a, b)) == g.jobs

    stats = BranchStats(n=g.n, m=2, lam=1)
    assert schedule_interval(plus, 2, s0, g.sinks, memo, stats) == 3
    assert MemoTable.key(a, b) in memo
    assert len(memo) >= 1
    assert memo.witness(MemoTable.key(a, b)).makespan == 3

    calls = stats.total_calls
    assert schedule_interval(plus, 2, s0, g.sinks, memo, stats) == 3
    assert stats.total_calls == calls + 1
    assert stats.memo_hits >= 1

    memo.clear()
    assert len(memo) == 0


def test_interval_below_the_root():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    memo = MemoTable(g, 1)
    stats = BranchStats(n=g.n, m=1, lam=1)
    assert schedule_interval(g, 1, from_jobs([0]), from_jobs([3]), memo, stats) == 3
    assert schedule_interval(g, 1, from_jobs([2]), from_jobs([2]), memo, stats) == 0


@pytest.mark.slow
def test_three_long_chains_reuse_intervals():
    inst = Instance(chains_graph(3, 6), 2)
    result = solve_subexp(inst, witness=True)
    assert result.makespan == 9
    assert result.makespan == solve_antichain_dp(inst).makespan
    assert result.counters['memo_hits'] > 0
    assert result.verify(inst)


@pytest.mark.slow
def test_agreement_sweep():
    rng = random.Random(31)
    for _ in range(200):
        n = rng.randint(1, 12)
        m = rng.randint(1, 4)
        inst = Instance(build_graph(n, random_arcs(rng, n, rng.uniform(0.1, 0.6))), m)
        assert solve_subexp(inst).makespan == solve_antichain_dp(inst).makespan


@pytest.mark.slow
def test_closed_form_families():
    for length in range(1, 9):
        inst = Instance(chains_graph(3, length), 3)
        assert solve_subexp(inst).makespan == length
        assert solve_antichain_dp(inst).makespan == length
    for n in range(1, 31):
        for m in range(1, 11):
            inst = Instance(build_graph(n, []), m)
            assert solve_subexp(inst).makespan == -(-n // m)
            assert solve_antichain_dp(inst).makespan == -(-n // m)
    for k in range(1, 31):
        for m in (1, 2, 3, 5):
            inst = Instance(build_graph(k + 1, [(0, leaf) for leaf in range(1, k + 1)]), m)
            assert solve_subexp(inst).makespan == 1 + -(-k // m)
            assert solve_antichain_dp(inst).makespan == 1 + -(-k // m)


@pytest.mark.slow
def test_three_chains_on_three_machines_speed():
    inst = Instance(chains_graph(3, 6), 3)
    start = time.perf_counter()
    result = solve_subexp(inst)
    elapsed = time.perf_counter() - start
    assert result.makespan == 6
    assert result.counters['memo_hits'] > 0
    if elapsed > 60:
        warnings.warn(f"three chains of six took {elapsed:.1f}s")
