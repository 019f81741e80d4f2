"""
File: "src/kairos/solvers/reconstruct.py"
Context: Reconstruction DP - combine subschedule makespans into an optimum over proper separators.

DP[X, k] is the least makespan of a partial proper schedule whose last
separator slot holds the non-sinks X together with k sinks in total. Slots
Y come before X exactly when X ⊆ succ(Y), so slots are evaluated by
decreasing |succ(X)|, which puts the empty slot last. The finite entries of
every row DP[X, ·] are non-decreasing in k.

Everything works on an induced job set `jobs` of a larger graph, so callers
never rebuild graphs for sub-intervals.
"""
import math

from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Tuple

from ..core.proxies import monitor
from ..graph.jobset import JobSet, members, size, smallest, is_subset, fmt
from ..graph.poset import PrecedenceGraph, antichains, enumerate_slot_pairs
from ..schedule.model import Schedule
from ..errors import InvariantViolation, MissingSubschedule, SourceOverflow, WitnessUnavailable

INF = math.inf

SlotPair = Tuple[JobSet, JobSet]


def subschedule_jobs(g: PrecedenceGraph, jobs: JobSet, first: JobSet, second: JobSet) -> JobSet:
    """Job set of σ[first, second] = succ(first) ∖ (succ[second] ∪ sinks), inside `jobs`."""
    return g.succ_of(first) & jobs & ~(g.succ_closed(second) | g.sinks_of(jobs))


def required_pairs(g: PrecedenceGraph, m: int, jobs: JobSet | None = None) -> List[SlotPair]:
    """
    The (first, second) slot pairs `reconstruct` can consult on `jobs`.

    These are all antichain pairs over the non-sink, non-source jobs, plus
    the pairs starting at the first slot (the non-sink sources).
    """
    w = g.jobs if jobs is None else jobs
    sinks = g.sinks_of(w)
    sources = g.sources_of(w)
    first_slot = sources & ~sinks
    inner = w & ~sinks & ~sources

    pairs = list(enumerate_slot_pairs(g, inner, m))
    seen = set(pairs)
    for x in antichains(g, inner & g.succ_of(first_slot), m):
        if (first_slot, x) not in seen:
            seen.add((first_slot, x))
            pairs.append((first_slot, x))
    return pairs


class SubscheduleTable:
    """
    Optimal makespans of the subschedules σ[first, second].

    Witness schedules are optional: either given up front or produced on
    demand by `resolver(first, second)`.
    """

    __slots__ = ('_values', '_witnesses', '_resolver')

    def __init__(
            self,
            values: Dict[SlotPair, int] | None = None,
            witnesses: Dict[SlotPair, Schedule] | None = None,
            resolver: Callable[[JobSet, JobSet], Schedule] | None = None,
    ) -> None:
        self._values: Dict[SlotPair, int] = dict(values or {})
        self._witnesses: Dict[SlotPair, Schedule] = dict(witnesses or {})
        self._resolver = resolver

    @classmethod
    def fill(
            cls,
            g: PrecedenceGraph,
            m: int,
            solve: Callable[[JobSet], Schedule],
            jobs: JobSet | None = None,
    ) -> "SubscheduleTable":
        """Fill every required pair with `solve(job_set)`, an exact solver for sub-job-sets."""
        w = g.jobs if jobs is None else jobs
        table = cls()
        for first, second in required_pairs(g, m, w):
            witness = solve(subschedule_jobs(g, w, first, second))
            table.put(first, second, witness.makespan, witness)
        return table

    def put(self, first: JobSet, second: JobSet, makespan: int, witness: Schedule | None = None) -> None:
        self._values[(first, second)] = makespan
        if witness is not None:
            self._witnesses[(first, second)] = witness

    def makespan(self, first: JobSet, second: JobSet) -> int:
        try:
            return self._values[(first, second)]
        except KeyError:
            raise MissingSubschedule(first, second) from None

    def witness(self, first: JobSet, second: JobSet) -> Schedule:
        key = (first, second)
        if key in self._witnesses:
            return self._witnesses[key]
        if self._resolver is not None:
            return self._resolver(first, second)
        raise WitnessUnavailable(f"[Reconstruct] No witness for σ[{fmt(first)}, {fmt(second)}]")

    def __contains__(self, key: SlotPair) -> bool:
        return key in self._values

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self) -> Iterator[SlotPair]:
        return iter(self._values)


@dataclass(frozen=True, slots=True)
class ChainStep:
    """One separator step: σ[first, second] followed by the slot `second` plus `sinks` new sinks."""
    first: JobSet
    second: JobSet
    sinks: int


@dataclass(frozen=True, slots=True)
class ReconstructResult:
    """
    Optimal makespan plus the choice chain that achieves it.

    Attributes:
        makespan: Minimum makespan of the job set.
        start: Non-sink sources (S_0 without sinks).
        steps: Separator steps after S_0, in schedule order.
        tail: Sinks packed after the last separator slot.
        pairs_consulted: Distinct subschedule pairs the DP read.
    """
    makespan: int
    start: JobSet
    steps: Tuple[ChainStep, ...]
    tail: int
    pairs_consulted: int


def check_row_monotone(x: JobSet, row: List[float]) -> None:
    """
    Raises:
        InvariantViolation: the finite entries of DP[x, ·] decrease somewhere.
    """
    finite = [v for v in row if v != INF]
    if any(a > b for a, b in zip(finite, finite[1:])):
        raise InvariantViolation(f"[Reconstruct] DP row of slot {fmt(x)} decreases in the sink count: {row}")


def _schedulable_sinks(g: PrecedenceGraph, w: JobSet, sinks: JobSet, slot: JobSet) -> JobSet:
    blocked = g.succ_closed(slot) & w
    out = 0
    for v in members(sinks):
        if not g.pred[v] & blocked:
            out |= 1 << v
    return out


def reconstruct(g: PrecedenceGraph, m: int, subs: SubscheduleTable, jobs: JobSet | None = None) -> ReconstructResult:
    """
    Minimum makespan of G[jobs] from its subschedule table.

    Raises:
        SourceOverflow: G[jobs] has more than m sources.
        MissingSubschedule: the DP needs a pair the table lacks.
    """
    w = g.jobs if jobs is None else jobs
    if not w:
        return ReconstructResult(0, 0, (), 0, 0)

    sinks = g.sinks_of(w)
    sources = g.sources_of(w)
    if size(sources) > m:
        raise SourceOverflow(f"[Reconstruct] {size(sources)} sources exceed {m} machines")

    total_sinks = size(sinks)
    first_slot = sources & ~sinks
    first_sinks = size(sources & sinks)
    inner = w & ~sinks & ~sources

    slots = list(antichains(g, inner, m))
    if first_slot:
        slots.append(first_slot)
    succ_w = {x: g.succ_of(x) & w for x in slots}
    slots.sort(key=lambda x: -size(succ_w[x]))

    table: Dict[JobSet, List[float]] = {}
    choice: Dict[JobSet, List[Tuple[JobSet, int] | None]] = {}
    consulted = 0

    for x in slots:
        limit = size(_schedulable_sinks(g, w, sinks, x))
        row = [INF] * (total_sinks + 1)
        picks: List[Tuple[JobSet, int] | None] = [None] * (total_sinks + 1)

        if x == first_slot:
            if first_sinks <= limit:
                row[first_sinks] = 1
        else:
            width = m - size(x)
            # An empty separator slot must take at least one sink.
            low = 1 if x == 0 else 0
            top = min(limit, total_sinks)
            predecessors = [y for y in slots if y in table and is_subset(x, succ_w[y])]
            if x == 0:
                # ∅ ⊆ succ(∅): the empty slot may follow itself, read back from its own row.
                predecessors.append(x)
            for y in predecessors:
                prev = row if y == x else table[y]
                if y != x and all(v == INF for v in prev):
                    continue
                sub = subs.makespan(y, x)
                consulted += 1
                for k in range(top + 1):
                    for kp in range(low, min(width, k) + 1):
                        cand = prev[k - kp] + sub + 1
                        if cand < row[k]:
                            row[k] = cand
                            picks[k] = (y, kp)
        check_row_monotone(x, row)
        table[x] = row
        choice[x] = picks

    best, best_slot, best_tail = INF, 0, 0
    for x in slots:
        if not is_subset(succ_w[x], sinks):
            continue
        row = table[x]
        for k in range(total_sinks + 1):
            cand = row[total_sinks - k] + math.ceil(k / m)
            if cand < best:
                best, best_slot, best_tail = cand, x, k

    if best == INF:
        raise InvariantViolation(f"[Reconstruct] No proper-separator schedule found for {fmt(w)}")

    monitor.increment_metric("reconstruct_calls")
    monitor.increment_metric("reconstruct_pairs", consulted)

    steps: List[ChainStep] = []
    x, k = best_slot, total_sinks - best_tail
    while x != first_slot:
        pick = choice[x][k]
        if pick is None:
            raise InvariantViolation("[Reconstruct] Broken choice chain")
        y, kp = pick
        steps.append(ChainStep(first=y, second=x, sinks=kp))
        x, k = y, k - kp
    steps.reverse()

    return ReconstructResult(
        makespan=int(best),
        start=first_slot,
        steps=tuple(steps),
        tail=best_tail,
        pairs_consulted=consulted,
    )


def expand_witness(
        g: PrecedenceGraph,
        m: int,
        subs: SubscheduleTable,
        result: ReconstructResult,
        jobs: JobSet | None = None,
) -> Schedule:
    """
    Turn a choice chain into a schedule of exactly `result.makespan` slots.

    Each separator slot takes its non-sinks plus the smallest-ID sinks that
    are schedulable there and not used yet; the leftover sinks are packed m
    per slot in ID order.

    Raises:
        WitnessUnavailable: a subschedule witness is missing or the chain does not fit.
    """
    w = g.jobs if jobs is None else jobs
    if not w:
        return Schedule.empty(m)

    sinks = g.sinks_of(w)
    sources = g.sources_of(w)
    used = sources & sinks
    out = Schedule(((sources & ~sinks) | used,), m)

    for step in result.steps:
        out = out + subs.witness(step.first, step.second)
        pool = _schedulable_sinks(g, w, sinks, step.second) & ~used
        if size(pool) < step.sinks:
            raise WitnessUnavailable(f"[Reconstruct] Only {size(pool)} sinks fit next to {fmt(step.second)}")
        fresh = smallest(pool, step.sinks)
        used |= fresh
        out = out + Schedule((step.second | fresh,), m)

    rest = list(members(sinks & ~used))
    if len(rest) != result.tail:
        raise WitnessUnavailable(f"[Reconstruct] Expected {result.tail} trailing sinks, found {len(rest)}")
    tail = tuple(
        sum(1 << v for v in rest[i:i + m])
        for i in range(0, len(rest), m)
    )
    out = out + Schedule(tail, m)

    if out.makespan != result.makespan:
        raise WitnessUnavailable(f"[Reconstruct] Witness has {out.makespan} slots, expected {result.makespan}")
    return out
