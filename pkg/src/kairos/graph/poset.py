"""
File: "src/kairos/graph/poset.py"
Context: PrecedenceGraph - transitively closed DAG over job IDs and its set algebra.

Job IDs are dense and 0-based. Every set-valued quantity (pred, succ, sources,
sinks, interval job sets) is a JobSet bitmask.
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

import networkx as nx

from .jobset import JobSet, full, members, size, is_subset
from ..adats.session import current_limits
from ..errors import CycleDetected, InstanceTooLarge, PreconditionViolated


class PrecedenceGraph:
    """
    Immutable, transitively closed precedence relation.

    Attributes:
        n (int): Number of jobs.
        succ (tuple[JobSet]): succ[v] is the set of strict successors of v.
        pred (tuple[JobSet]): pred[v] is the set of strict predecessors of v.
        generating_arcs (int): Number of distinct arcs given at construction.
    """

    __slots__ = ('n', 'succ', 'pred', 'generating_arcs', 'sources', 'sinks', '_topo')

    def __init__(self, n: int, succ: Sequence[JobSet], pred: Sequence[JobSet], generating_arcs: int = 0) -> None:
        self.n = n
        self.succ: Tuple[JobSet, ...] = tuple(succ)
        self.pred: Tuple[JobSet, ...] = tuple(pred)
        self.generating_arcs = generating_arcs

        self.sources: JobSet = 0
        self.sinks: JobSet = 0
        for v in range(n):
            if not self.pred[v]:
                self.sources |= 1 << v
            if not self.succ[v]:
                self.sinks |= 1 << v

        # Strict predecessors always have fewer predecessors of their own.
        self._topo: Tuple[int, ...] = tuple(sorted(range(n), key=lambda v: (self.pred[v].bit_count(), v)))

    @property
    def jobs(self) -> JobSet:
        return full(self.n)

    @property
    def closure_arcs(self) -> int:
        return sum(s.bit_count() for s in self.succ)

    def topological_order(self) -> Tuple[int, ...]:
        return self._topo

    def precedes(self, u: int, v: int) -> bool:
        return bool(self.succ[u] >> v & 1)

    def succ_of(self, s: JobSet) -> JobSet:
        """succ(S): strict successors of any member of S."""
        out = 0
        for v in members(s):
            out |= self.succ[v]
        return out

    def succ_closed(self, s: JobSet) -> JobSet:
        """succ[S] = S ∪ succ(S)."""
        return s | self.succ_of(s)

    def pred_of(self, s: JobSet) -> JobSet:
        out = 0
        for v in members(s):
            out |= self.pred[v]
        return out

    def pred_closed(self, s: JobSet) -> JobSet:
        return s | self.pred_of(s)

    def sinks_of(self, w: JobSet) -> JobSet:
        """Sinks of the induced subgraph G[w]."""
        out = 0
        for v in members(w):
            if not self.succ[v] & w:
                out |= 1 << v
        return out

    def sources_of(self, w: JobSet) -> JobSet:
        """Sources of the induced subgraph G[w]."""
        out = 0
        for v in members(w):
            if not self.pred[v] & w:
                out |= 1 << v
        return out

    def height(self) -> int:
        """Number of jobs on a longest chain."""
        depth = [0] * self.n
        for v in self._topo:
            depth[v] = 1 + max((depth[u] for u in members(self.pred[v])), default=0)
        return max(depth, default=0)

    def induced(self, w: JobSet) -> Tuple["PrecedenceGraph", List[int]]:
        """
        Induced subgraph on `w`, reindexed densely.

        The induced subgraph of a closed relation is closed, so no new closure
        is computed.

        Returns:
            (graph, ids): ids[i] is the original ID of new job i.
        """
        ids = list(members(w))
        index = {v: i for i, v in enumerate(ids)}

        def remap(s: JobSet) -> JobSet:
            out = 0
            for v in members(s & w):
                out |= 1 << index[v]
            return out

        sub_succ = [remap(self.succ[v]) for v in ids]
        sub_pred = [remap(self.pred[v]) for v in ids]
        arcs = sum(s.bit_count() for s in sub_succ)
        return PrecedenceGraph(len(ids), sub_succ, sub_pred, generating_arcs=arcs), ids

    def with_super_source(self) -> "PrecedenceGraph":
        """Copy with one extra job n preceding every other job."""
        s0 = self.n
        succ = list(self.succ) + [full(self.n)]
        pred = [p | (1 << s0) for p in self.pred] + [0]
        return PrecedenceGraph(self.n + 1, succ, pred, generating_arcs=self.generating_arcs + self.n)

    def arcs(self) -> Iterator[Tuple[int, int]]:
        """Closure arcs (u, v) in lexicographic order."""
        for u in range(self.n):
            for v in members(self.succ[u]):
                yield u, v

    def __repr__(self) -> str:
        return f"<PrecedenceGraph(n={self.n}, arcs={self.closure_arcs}, sources={size(self.sources)}, sinks={size(self.sinks)})>"


@dataclass(frozen=True, slots=True)
class Interval:
    """Int<A,B>: the jobs between source slot A and sink slot B."""
    a: JobSet
    b: JobSet
    jobs: JobSet
    closed: bool


def build_graph(n: int, arcs: Iterable[Tuple[int, int]], max_jobs: int | None = None) -> PrecedenceGraph:
    """
    Build the transitive closure of a precedence relation.

    Args:
        n: Number of jobs.
        arcs: Pairs (u, v) meaning u must finish before v starts. Duplicates
            and implied arcs are accepted.
        max_jobs: Capacity override; defaults to the active session's limit.

    Raises:
        PreconditionViolated: An arc names a job outside 0..n-1.
        CycleDetected: The relation has a cycle (self-loops included).
        InstanceTooLarge: n exceeds the configured JobSet capacity.
    """
    cap = max_jobs if max_jobs is not None else current_limits().max_jobs
    if n < 0:
        raise PreconditionViolated(f"[Poset] Negative job count {n}")
    if n > cap:
        raise InstanceTooLarge(f"[Poset] {n} jobs exceed the JobSet capacity of {cap}")

    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(n))
    for u, v in arcs:
        if not (0 <= u < n and 0 <= v < n):
            raise PreconditionViolated(f"[Poset] Arc ({u}, {v}) outside job range 0..{n - 1}")
        if u == v:
            raise CycleDetected(u, [u])
        digraph.add_edge(u, v)

    try:
        order = list(nx.topological_sort(digraph))
    except nx.NetworkXUnfeasible:
        cycle = [u for u, _ in nx.find_cycle(digraph)]
        raise CycleDetected(cycle[0], cycle) from None

    succ = [0] * n
    for v in reversed(order):
        reach = 0
        for c in digraph.successors(v):
            reach |= (1 << c) | succ[c]
        succ[v] = reach

    pred = [0] * n
    for u in range(n):
        for v in members(succ[u]):
            pred[v] |= 1 << u

    return PrecedenceGraph(n, succ, pred, generating_arcs=digraph.number_of_edges())


def is_antichain(g: PrecedenceGraph, s: JobSet) -> bool:
    """True iff no two members of `s` are comparable."""
    for v in members(s):
        if g.succ[v] & s:
            return False
    return True


def interval(g: PrecedenceGraph, a: JobSet, b: JobSet, closed: bool = False) -> Interval:
    """
    Int<A,B> = G[succ(A) ∩ pred[B]]; the closed variant uses succ[A].

    Raises:
        PreconditionViolated: A or B is not an antichain, or B ⊄ succ(A).
    """
    if not is_antichain(g, a) or not is_antichain(g, b):
        raise PreconditionViolated("[Poset] Interval endpoints must be antichains")
    succ_a = g.succ_of(a)
    if not is_subset(b, succ_a):
        raise PreconditionViolated("[Poset] Interval sink slot is not contained in succ(A)")
    jobs = (a | succ_a if closed else succ_a) & g.pred_closed(b)
    return Interval(a=a, b=b, jobs=jobs, closed=closed)


def subproblem_jobs(g: PrecedenceGraph, jobs: JobSet, b: JobSet, x: JobSet, y: JobSet, closed: bool = False) -> JobSet:
    """jobs ∩ succ(X) ∖ (succ(Y) ∪ B); with `closed`, Y itself is excluded as well."""
    excluded = (g.succ_closed(y) if closed else g.succ_of(y)) | b
    return jobs & g.succ_of(x) & ~excluded


def new_sinks(
        g: PrecedenceGraph,
        jobs: JobSet,
        b: JobSet,
        x: JobSet,
        y: JobSet,
        closed: bool = False,
) -> JobSet:
    """
    Sink slot of the subproblem that starts at X and stops before Y.

    Returns sinks(G[jobs ∩ succ(X) ∖ (succ(Y) ∪ B)]). The interval
    Int<X, result> then has exactly that job set.

    Raises:
        PreconditionViolated: X or Y is not an antichain inside `jobs`, or Y ⊄ succ(X).
    """
    if not is_subset(x, jobs) or not is_subset(y, jobs):
        raise PreconditionViolated("[Poset] NewSinks slots must lie inside the job set")
    if not is_antichain(g, x) or not is_antichain(g, y):
        raise PreconditionViolated("[Poset] NewSinks slots must be antichains")
    if not is_subset(y, g.succ_of(x)):
        raise PreconditionViolated("[Poset] NewSinks requires Y ⊆ succ(X)")
    return g.sinks_of(subproblem_jobs(g, jobs, b, x, y, closed=closed))


def antichains(g: PrecedenceGraph, universe: JobSet, m: int) -> Iterator[JobSet]:
    """
    Every antichain inside `universe` with at most m members, each exactly once.

    Antichains are grown by appending jobs with larger IDs that are
    incomparable to everything chosen so far; non-antichains are never built.
    The empty set comes first.
    """
    yield 0
    if m <= 0:
        return
    comparable = [g.succ[v] | g.pred[v] for v in range(g.n)]
    # (chosen, candidates) with candidates above the largest chosen job.
    stack: List[Tuple[JobSet, JobSet]] = [(0, universe)]
    while stack:
        chosen, candidates = stack.pop()
        grown = []
        for v in members(candidates):
            nxt = chosen | (1 << v)
            grown.append(nxt)
            if nxt.bit_count() < m:
                above = candidates & ~((1 << (v + 1)) - 1)
                stack.append((nxt, above & ~comparable[v]))
        yield from grown


def enumerate_slot_pairs(g: PrecedenceGraph, jobs: JobSet, m: int) -> Iterator[Tuple[JobSet, JobSet]]:
    """Every pair of antichains X, Y ⊆ jobs with |X|, |Y| ≤ m and Y ⊆ succ(X)."""
    if m < 1:
        raise PreconditionViolated(f"[Poset] Machine count must be >= 1, got {m}")
    for x in antichains(g, jobs, m):
        for y in antichains(g, jobs & g.succ_of(x), m):
            yield x, y
