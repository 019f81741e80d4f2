import pytest

from kairos.adats.session import DefaultSession, Limits
from kairos.core.bifrost import bifrost_sync
from kairos.errors import InstanceTooLarge
from kairos.graph.poset import build_graph
from kairos.solvers.base import Instance
from kairos.solvers.baselines import solve_antichain_dp, solve_brute, twin_classes

from conftest import chains_graph


@pytest.mark.parametrize("solver", [solve_brute, solve_antichain_dp])
@pytest.mark.parametrize("graph,m,expected", [
    (build_graph(0, []), 2, 0),
    (build_graph(4, [(0, 1), (1, 2), (2, 3)]), 3, 4),
    (build_graph(9, []), 3, 3),
    (chains_graph(2, 5), 2, 5),
    (build_graph(7, [(0, v) for v in range(1, 7)]), 2, 4),
])
def test_known_optima(solver, graph, m, expected):
    inst = Instance(graph, m)
    result = solver(inst)
    assert result.makespan == expected
    assert result.witness is not None
    assert result.verify(inst)


def test_twin_classes_group_interchangeable_jobs():
    g = build_graph(6, [(0, 2), (1, 2), (0, 3), (1, 3), (2, 4), (3, 4)])
    classes = sorted(twin_classes(g))
    assert classes == [(0, 1), (2, 3), (4,), (5,)]


def test_antichain_dp_counts_classes():
    result = solve_antichain_dp(Instance(build_graph(9, []), 3))
    assert result.counters['classes'] == 1
    assert result.counters['states'] == 4


def test_brute_agrees_with_antichain_dp(rng, make_instance):
    for _ in range(80):
        inst = make_instance(rng, rng.randint(1, 10), rng.randint(1, 4), rng.uniform(0.1, 0.6))
        brute = solve_brute(inst)
        dp = solve_antichain_dp(inst)
        assert brute.makespan == dp.makespan
        assert dp.verify(inst)


def test_guards():
    with pytest.raises(InstanceTooLarge):
        solve_brute(Instance(build_graph(13, []), 2))
    with bifrost_sync(session=DefaultSession(limits=Limits(brute_max_jobs=13))):
        chain = build_graph(13, [(i, i + 1) for i in range(12)])
        assert solve_brute(Instance(chain, 2)).makespan == 13

    # Every job of a chain is its own twin class.
    with pytest.raises(InstanceTooLarge):
        solve_antichain_dp(Instance(build_graph(31, [(i, i + 1) for i in range(30)]), 2))


def test_three_chains_of_five():
    result = solve_antichain_dp(Instance(chains_graph(3, 5), 3))
    assert result.makespan == 5
