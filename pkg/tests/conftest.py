"""
File: "tests/conftest.py"
Context: Shared seeded instance factories and context fixtures.
"""
import random

from typing import Callable, List, Tuple

import pytest

from kairos.adats.monitor import DefaultMonitor
from kairos.adats.report import DefaultReport
from kairos.adats.session import DefaultSession, Limits
from kairos.core.bifrost import bifrost_sync
from kairos.graph.jobset import members
from kairos.graph.poset import PrecedenceGraph, build_graph
from kairos.schedule.model import Schedule
from kairos.solvers.base import Instance


def random_arcs(rng: random.Random, n: int, p: float) -> List[Tuple[int, int]]:
    """Arcs of a random DAG whose topological order is a random permutation of the IDs."""
    perm = list(range(n))
    rng.shuffle(perm)
    return [(perm[u], perm[v]) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def chains_graph(k: int, length: int) -> PrecedenceGraph:
    arcs = [(c * length + i, c * length + i + 1) for c in range(k) for i in range(length - 1)]
    return build_graph(k * length, arcs)


def random_feasible_schedule(rng: random.Random, g: PrecedenceGraph, m: int) -> Schedule:
    """A random list schedule: every slot takes a random nonempty set of available jobs."""
    done, slots = 0, []
    while done != g.jobs:
        avail = [v for v in members(g.jobs & ~done) if g.pred[v] & ~done == 0]
        take = rng.sample(avail, rng.randint(1, min(m, len(avail))))
        slot = sum(1 << v for v in take)
        slots.append(slot)
        done |= slot
    return Schedule(tuple(slots), m)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def make_instance() -> Callable[..., Instance]:
    """Factory: make_instance(rng, n, m, p=0.3) -> a random Instance."""
    def factory(rng: random.Random, n: int, m: int, p: float = 0.3) -> Instance:
        return Instance(build_graph(n, random_arcs(rng, n, p)), m)
    return factory


@pytest.fixture
def large_context():
    """Active context with room for the 3m-job hardness instances."""
    with bifrost_sync(
            session=DefaultSession(name="tests-large", limits=Limits(max_jobs=256)),
            monitor=DefaultMonitor(),
            report=DefaultReport(),
    ) as adats:
        yield adats


@pytest.fixture
def context():
    """A fresh active context; yields (session, monitor, report)."""
    with bifrost_sync(session=DefaultSession(name="tests"), monitor=DefaultMonitor(), report=DefaultReport()) as adats:
        yield adats
