"""
File: "src/kairos/solvers/subexp.py"
Context: Memoized interval branching - schedule(A, B) over Int<A, B> with a super-source.

Every call schedules the jobs strictly after A and up to the sink slot B. It
asks for one subproblem per slot pair its reconstruction can consult, then
runs the reconstruction DP on A ∪ Jobs and drops the slot holding A.

The recursion runs on an explicit frame stack. Branching statistics follow
the call tree: non-leaf calls with |B| ≤ λ are "red" and cut the tree into
sub-trees whose heights are recorded separately.
"""
import math
import time

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from ..adats.session import current_limits
from ..core.paragon import _PARAGON
from ..core.proxies import monitor, report, session
from ..decorators.sentinel import sentinel
from ..graph.jobset import JobSet, binom_le, is_subset, members, size, fmt
from ..graph.poset import PrecedenceGraph, subproblem_jobs
from ..schedule.model import Schedule
from .base import Instance, SolveReport
from .reconstruct import ReconstructResult, SubscheduleTable, expand_witness, reconstruct, required_pairs
from ..errors import BadParams, InstanceTooLarge, InvariantViolation


def default_lambda(n: int, m: int) -> int:
    """λ = ⌊√(nm)⌋, never below 1."""
    return max(1, math.isqrt(n * m))


def proportional_lambda(n: int) -> int:
    """λ = ⌊0.15n⌋, never below 1; the setting used for large benchmark runs."""
    return max(1, (15 * n) // 100)


LAMBDA_RULES: Dict[str, Callable[[int, int], int]] = {
    'sqrt': default_lambda,
    'proportional': lambda n, m: proportional_lambda(n),
}

Lambda = int | str | None


def parse_lambda(text: str) -> int | str:
    """
    A λ argument: a positive integer or the name of a rule in LAMBDA_RULES.

    Raises:
        BadParams: neither an integer nor a known rule.
    """
    if text in LAMBDA_RULES:
        return text
    try:
        return int(text)
    except ValueError:
        raise BadParams(f"[Subexp] λ must be an integer or one of {sorted(LAMBDA_RULES)}, got {text!r}") from None


def resolve_lambda(lam: Lambda, n: int, m: int) -> int:
    """
    Concrete λ for an n-job instance on m machines.

    Raises:
        BadParams: an unknown rule name or λ < 1.
    """
    if lam is None:
        value = default_lambda(n, m)
    elif isinstance(lam, str):
        if lam not in LAMBDA_RULES:
            raise BadParams(f"[Subexp] Unknown λ rule {lam!r}")
        value = LAMBDA_RULES[lam](n, m)
    else:
        value = lam
    if value < 1:
        raise BadParams(f"[Subexp] λ must be >= 1, got {value}")
    return value


@dataclass(slots=True)
class BranchStats:
    """Counters of the branching tree."""
    n: int
    m: int
    lam: int
    total_calls: int = 0
    leaf_calls: int = 0
    nonleaf_calls: int = 0
    red_nonleaves: int = 0
    memo_hits: int = 0
    max_children: int = 0
    tree_heights: List[int] = field(default_factory=list)

    @property
    def max_tree_height(self) -> int:
        return max(self.tree_heights, default=0)

    def as_dict(self) -> Dict[str, int]:
        return {
            'total_calls': self.total_calls,
            'leaf_calls': self.leaf_calls,
            'nonleaf_calls': self.nonleaf_calls,
            'red_nonleaves': self.red_nonleaves,
            'memo_hits': self.memo_hits,
            'max_children': self.max_children,
            'max_tree_height': self.max_tree_height,
            'trees': len(self.tree_heights),
            'lambda': self.lam,
            'jobs': self.n,
        }


@dataclass(frozen=True, slots=True)
class TreeBounds:
    """Proven limits of the branching tree for (n, m, λ)."""
    red_nonleaves: int
    tree_height: int
    children: int
    tree_nodes: int

    @classmethod
    def of(cls, n: int, m: int, lam: int) -> "TreeBounds":
        red = binom_le(n, m + lam) + 1
        height = n // lam + 1
        children = binom_le(n, 2 * m)
        return cls(red_nonleaves=red, tree_height=height, children=children, tree_nodes=red * children ** height)


@dataclass(frozen=True, slots=True)
class BoundsVerdict:
    ok: bool
    failed: Tuple[str, ...]
    measured: Dict[str, int]
    bounds: TreeBounds

    def __bool__(self) -> bool:
        return self.ok


def report_tree_bounds(stats: BranchStats) -> BoundsVerdict:
    """Compare the measured branching tree against its proven bounds."""
    bounds = TreeBounds.of(stats.n, stats.m, stats.lam)
    measured = {
        'red_nonleaves': stats.red_nonleaves,
        'tree_height': stats.max_tree_height,
        'children': stats.max_children,
        'tree_nodes': stats.total_calls,
    }
    failed = tuple(name for name, value in measured.items() if value > getattr(bounds, name))
    for name, value in measured.items():
        report.log_bound_check(bound_name=name, measured=value, bound=getattr(bounds, name))
    return BoundsVerdict(ok=not failed, failed=failed, measured=measured, bounds=bounds)


@dataclass(frozen=True, slots=True)
class MemoEntry:
    makespan: int
    result: ReconstructResult


class MemoTable:
    """
    Solved intervals keyed by A ∪ B.

    B is recovered from the key as the members having a predecessor in the
    key, which is exact because B ⊆ succ(A) and A is an antichain.
    """

    __slots__ = ('g', 'm', '_entries', '_witnesses')

    def __init__(self, g: PrecedenceGraph, m: int) -> None:
        self.g = g
        self.m = m
        self._entries: Dict[JobSet, MemoEntry] = {}
        self._witnesses: Dict[JobSet, Schedule] = {}

    @staticmethod
    def key(a: JobSet, b: JobSet) -> JobSet:
        return a | b

    def split_key(self, key: JobSet) -> Tuple[JobSet, JobSet]:
        b = 0
        for v in members(key):
            if self.g.pred[v] & key:
                b |= 1 << v
        return key & ~b, b

    def jobs_of(self, key: JobSet) -> JobSet:
        a, b = self.split_key(key)
        return self.g.succ_of(a) & self.g.pred_closed(b)

    def publish(self, key: JobSet, entry: MemoEntry) -> None:
        if key in self._entries:
            raise InvariantViolation(f"[Subexp] Interval {fmt(key)} solved twice")
        self._entries[key] = entry

    def get(self, key: JobSet) -> MemoEntry | None:
        return self._entries.get(key)

    def __contains__(self, key: JobSet) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def clear(self) -> None:
        self._entries.clear()
        self._witnesses.clear()

    def witness(self, key: JobSet) -> Schedule:
        """Optimal schedule of the interval's jobs, expanded from the stored choice chains."""
        cached = self._witnesses.get(key)
        if cached is not None:
            return cached

        a, b = self.split_key(key)
        jobs = self.jobs_of(key)
        if not jobs:
            return Schedule.empty(self.m)
        w = a | jobs

        def child(first: JobSet, second: JobSet) -> Schedule:
            rest = subproblem_jobs(self.g, jobs, b, first, second, closed=True)
            if not rest:
                return Schedule.empty(self.m)
            return self.witness(self.key(first, self.g.sinks_of(rest)))

        entry = self._entries[key]
        full = expand_witness(self.g, self.m, SubscheduleTable(resolver=child), entry.result, jobs=w)
        out = Schedule(full.slots[1:], self.m)
        self._witnesses[key] = out
        return out


@dataclass(slots=True)
class _Frame:
    key: JobSet
    a: JobSet
    b: JobSet
    jobs: JobSet
    red: bool
    pairs: List[Tuple[JobSet, JobSet]]
    children: List[JobSet]
    values: Dict[JobSet, int] = field(default_factory=dict)
    idx: int = 0
    height: int = 0


def _open_frame(g: PrecedenceGraph, m: int, a: JobSet, b: JobSet, stats: BranchStats) -> _Frame:
    jobs = g.succ_of(a) & g.pred_closed(b)
    w = a | jobs
    pairs = required_pairs(g, m, w)
    children: List[JobSet] = []
    seen = set()
    for first, second in pairs:
        rest = subproblem_jobs(g, jobs, b, first, second, closed=True)
        if not is_subset(rest, jobs) or rest & b or size(rest) > size(jobs) - size(b):
            raise InvariantViolation(f"[Subexp] Subproblem {fmt(rest)} does not shrink interval {fmt(jobs)}")
        child_key = MemoTable.key(first, g.sinks_of(rest)) if rest else -1 - first
        if child_key not in seen:
            seen.add(child_key)
            children.append(child_key)
    stats.nonleaf_calls += 1
    red = size(b) <= stats.lam
    if red:
        stats.red_nonleaves += 1
    stats.max_children = max(stats.max_children, len(children))
    return _Frame(key=MemoTable.key(a, b), a=a, b=b, jobs=jobs, red=red, pairs=pairs, children=children)


def _close_frame(g: PrecedenceGraph, m: int, frame: _Frame, memo: MemoTable) -> int:
    w = frame.a | frame.jobs
    table = SubscheduleTable()
    for first, second in frame.pairs:
        rest = subproblem_jobs(g, frame.jobs, frame.b, first, second, closed=True)
        value = memo.get(MemoTable.key(first, g.sinks_of(rest))).makespan if rest else 0
        table.put(first, second, value)
    result = reconstruct(g, m, table, jobs=w)
    makespan = result.makespan - 1
    memo.publish(frame.key, MemoEntry(makespan=makespan, result=result))
    return makespan


def schedule_interval(
        g: PrecedenceGraph,
        m: int,
        a: JobSet,
        b: JobSet,
        memo: MemoTable,
        stats: BranchStats,
) -> int:
    """
    Minimum makespan of Int<A, B>, the jobs in succ(A) ∩ pred[B].

    Solved intervals are read from and published to `memo`; `stats` counts
    every call of the branching tree.
    """
    stats.total_calls += 1
    root_key = MemoTable.key(a, b)
    hit = memo.get(root_key)
    if hit is not None:
        stats.memo_hits += 1
        stats.leaf_calls += 1
        return hit.makespan
    if not g.succ_of(a) & g.pred_closed(b):
        stats.leaf_calls += 1
        return 0

    stack: List[_Frame] = [_open_frame(g, m, a, b, stats)]
    while True:
        _PARAGON.checkpoint("Subexp")
        frame = stack[-1]
        if frame.idx < len(frame.children):
            child_key = frame.children[frame.idx]
            frame.idx += 1
            stats.total_calls += 1
            if child_key < 0 or child_key in memo:
                # Base case (nothing left to schedule) or an answer from the table.
                if child_key >= 0:
                    stats.memo_hits += 1
                stats.leaf_calls += 1
                frame.height = max(frame.height, 1)
                continue
            child_a, child_b = memo.split_key(child_key)
            stack.append(_open_frame(g, m, child_a, child_b, stats))
            continue

        makespan = _close_frame(g, m, frame, memo)
        stack.pop()
        if frame.red or not stack:
            stats.tree_heights.append(frame.height)
        if not stack:
            return makespan
        parent = stack[-1]
        parent.height = max(parent.height, 0 if frame.red else 1 + frame.height)


@sentinel(name="subexp")
def solve_subexp(inst: Instance, lam: Lambda = None, witness: bool = False) -> SolveReport:
    """
    Exact makespan by memoized interval branching from a super-source.

    Args:
        inst: The instance.
        lam: λ for the branching statistics, as an integer or a rule name
            ('sqrt' or 'proportional'); defaults to ⌊√(nm)⌋. It never changes
            the answer.
        witness: Also expand an optimal schedule.

    Raises:
        InstanceTooLarge: the graph plus the super-source exceeds the JobSet capacity.
        BadParams: λ < 1 or an unknown λ rule.
    """
    g, m = inst.graph, inst.m
    limits = current_limits()
    if g.n + 1 > limits.max_jobs:
        raise InstanceTooLarge(f"[Subexp] {g.n} jobs plus the super-source exceed the capacity of {limits.max_jobs}")
    lam = resolve_lambda(lam, g.n, m)

    start = time.perf_counter()
    stats = BranchStats(n=g.n, m=m, lam=lam)
    if g.n == 0:
        return SolveReport(0, "subexp", Schedule.empty(m) if witness else None, stats.as_dict(), 0.0)

    plus = g.with_super_source()
    s0 = 1 << g.n
    memo = MemoTable(plus, m)
    makespan = schedule_interval(plus, m, s0, g.sinks, memo, stats)

    schedule = None
    if witness:
        started = monitor.start_timer("subexp_witness")
        schedule = memo.witness(MemoTable.key(s0, g.sinks))
        monitor.stop_timer("subexp_witness", started, slots=schedule.makespan)
    wall = time.perf_counter() - start

    for name, value in stats.as_dict().items():
        if name.startswith("max_") or name in ("lambda", "jobs"):
            monitor.set_max_metric(f"subexp_{name}", value)
        else:
            monitor.increment_metric(f"subexp_{name}", value)
    monitor.track("subexp_completed", duration=wall, makespan=makespan, **stats.as_dict())
    session.set("subexp_stats", stats)
    report.log_solve(algorithm="subexp", makespan=makespan, wall_time=wall, n=g.n, m=m, memo_size=len(memo))

    verdict = report_tree_bounds(stats)
    if not verdict:
        raise InvariantViolation(f"[Subexp] Branching tree exceeds its bounds: {', '.join(verdict.failed)}")

    counters = stats.as_dict()
    counters['memo_size'] = len(memo)
    return SolveReport(makespan, "subexp", schedule, counters, wall)
