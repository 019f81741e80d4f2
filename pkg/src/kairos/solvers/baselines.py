"""
File: "src/kairos/solvers/baselines.py"
Context: Baseline oracles - exhaustive search and the antichain (ideal) DP.
"""
import time

from collections import defaultdict
from typing import Dict, Iterator, List, Tuple

from ..adats.session import current_limits
from ..core.proxies import monitor, report
from ..decorators.sentinel import sentinel
from ..graph.jobset import JobSet, members, size, submasks
from ..graph.poset import PrecedenceGraph
from ..schedule.model import Schedule
from .base import Instance, SolveReport
from ..errors import InstanceTooLarge, InvariantViolation


def optimal_schedule(g: PrecedenceGraph, m: int, jobs: JobSet | None = None) -> Schedule:
    """
    Optimal schedule of G[jobs] by exhaustive search over finished sets.

    Every nonempty set of at most m available jobs is tried as the next slot,
    with one memo entry per finished set.

    Raises:
        InstanceTooLarge: more jobs than the brute-force limit.
    """
    target = g.jobs if jobs is None else jobs
    cap = current_limits().brute_max_jobs
    if size(target) > cap:
        raise InstanceTooLarge(f"[Brute] {size(target)} jobs exceed the brute-force limit of {cap}")

    preds = {v: g.pred[v] & target for v in members(target)}
    best: Dict[JobSet, Tuple[int, JobSet]] = {target: (0, 0)}

    def solve(done: JobSet) -> int:
        cached = best.get(done)
        if cached is not None:
            return cached[0]
        avail = 0
        for v in members(target & ~done):
            if preds[v] & ~done == 0:
                avail |= 1 << v
        value, pick = len(preds) + 1, 0
        for slot in submasks(avail):
            if slot == 0 or slot.bit_count() > m:
                continue
            cand = 1 + solve(done | slot)
            if cand < value:
                value, pick = cand, slot
        best[done] = (value, pick)
        return value

    solve(0)
    monitor.increment_metric("brute_states", len(best))

    slots: List[JobSet] = []
    done = 0
    while done != target:
        pick = best[done][1]
        slots.append(pick)
        done |= pick
    return Schedule(tuple(slots), m)


@sentinel(name="brute")
def solve_brute(inst: Instance) -> SolveReport:
    """Exact optimum and witness by exhaustive search (small instances only)."""
    start = time.perf_counter()
    schedule = optimal_schedule(inst.graph, inst.m)
    wall = time.perf_counter() - start
    report.log_solve(algorithm="brute", makespan=schedule.makespan, wall_time=wall, n=inst.n, m=inst.m)
    return SolveReport(schedule.makespan, "brute", schedule, {'states': monitor.get_metric("brute_states")}, wall)


def twin_classes(g: PrecedenceGraph) -> List[Tuple[int, ...]]:
    """Jobs grouped by identical (pred, succ) sets, each class in ascending ID order."""
    groups: Dict[Tuple[JobSet, JobSet], List[int]] = defaultdict(list)
    for v in g.topological_order():
        groups[(g.pred[v], g.succ[v])].append(v)
    return [tuple(sorted(jobs)) for jobs in groups.values()]


def _slot_choices(avail: List[Tuple[int, int]], m: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """
    Maximal slots over available classes given as (class, free jobs).

    A slot takes every available job when they fit, otherwise exactly m of them.
    """
    total = sum(free for _, free in avail)
    if total <= m:
        yield tuple(avail)
        return

    picked: List[Tuple[int, int]] = []

    def extend(pos: int, left: int, room: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
        if left == 0:
            yield tuple(picked)
            return
        if pos == len(avail) or room < left:
            return
        c, free = avail[pos]
        rest = room - free
        for take in range(min(free, left), -1, -1):
            # The remaining classes must still be able to fill the slot.
            if left - take > rest:
                break
            if take:
                picked.append((c, take))
            yield from extend(pos + 1, left - take, rest)
            if take:
                picked.pop()

    yield from extend(0, m, total)


@sentinel(name="antichain-dp")
def solve_antichain_dp(inst: Instance) -> SolveReport:
    """
    Exact optimum by breadth-first DP over ideals, one layer per timeslot.

    Ideals are stored as count vectors over twin classes; twins are
    interchangeable, so a class is always consumed in ascending ID order.
    Only maximal slots are tried: a slot is either full or takes every
    available job, which keeps an optimum.

    Raises:
        InstanceTooLarge: more twin classes than the configured limit.
    """
    g, m = inst.graph, inst.m
    start = time.perf_counter()
    if g.n == 0:
        return SolveReport(0, "antichain-dp", Schedule.empty(m), {'states': 1}, 0.0)

    classes = twin_classes(g)
    cap = current_limits().antichain_max_classes
    if len(classes) > cap:
        raise InstanceTooLarge(f"[AntichainDP] {len(classes)} twin classes exceed the limit of {cap}")

    index = {v: c for c, jobs in enumerate(classes) for v in jobs}
    sizes = tuple(len(jobs) for jobs in classes)
    pred_classes = [sorted({index[u] for u in members(g.pred[jobs[0]])}) for jobs in classes]

    initial = tuple(0 for _ in classes)
    parent: Dict[Tuple[int, ...], Tuple[Tuple[int, ...], Tuple[Tuple[int, int], ...]] | None] = {initial: None}
    frontier = [initial]
    t = 0
    while sizes not in parent:
        if not frontier:
            raise InvariantViolation("[AntichainDP] Search space exhausted before finishing all jobs")
        t += 1
        nxt: List[Tuple[int, ...]] = []
        for state in frontier:
            avail = [
                (c, sizes[c] - state[c])
                for c in range(len(classes))
                if state[c] < sizes[c] and all(state[p] == sizes[p] for p in pred_classes[c])
            ]
            for slot in _slot_choices(avail, m):
                new = list(state)
                for c, take in slot:
                    new[c] += take
                key = tuple(new)
                if key not in parent:
                    parent[key] = (state, slot)
                    nxt.append(key)
        frontier = nxt
        report.debug("Antichain DP layer done", t=t, states=len(frontier))

    slots: List[JobSet] = []
    state = sizes
    while parent[state] is not None:
        prev, slot = parent[state]
        mask = 0
        for c, take in slot:
            for v in classes[c][prev[c]:prev[c] + take]:
                mask |= 1 << v
        slots.append(mask)
        state = prev
    slots.reverse()

    wall = time.perf_counter() - start
    monitor.increment_metric("antichain_dp_states", len(parent))
    report.log_solve(algorithm="antichain-dp", makespan=t, wall_time=wall, n=g.n, m=m, classes=len(classes))
    return SolveReport(t, "antichain-dp", Schedule(tuple(slots), m), {'states': len(parent), 'classes': len(classes)}, wall)
