"""
File: "src/kairos/schedule/separator.py"
Context: Conflicts, the Resolve-Conflicts normalization and proper separators.

A schedule with a proper separator splits into S_0 ⊕ σ_0 ⊕ S_1 ⊕ ... ⊕ S_ℓ ⊕ σ_ℓ
where every segment σ_i is determined by its two neighbouring slots. Slot
indices are 0-based throughout.
"""
from dataclasses import dataclass
from typing import List, Tuple

from .model import Schedule, Verdict, PASS, check_feasible
from ..core.proxies import monitor, report
from ..graph.jobset import JobSet, members, lowest, is_subset, fmt
from ..graph.poset import PrecedenceGraph
from ..errors import InfeasibleInput, InvariantViolation, NotConflictFree, PreconditionViolated


@dataclass(frozen=True, slots=True)
class SeparatorDecomposition:
    """
    Separator slot positions inside a schedule.

    Attributes:
        schedule: The decomposed schedule.
        indices: Slot indices i_0 = 0 < i_1 < ... < i_ℓ of S_0..S_ℓ. Empty only
            for the empty schedule.
    """
    schedule: Schedule
    indices: Tuple[int, ...]

    @property
    def ell(self) -> int:
        return len(self.indices) - 1

    def separator(self, i: int) -> JobSet:
        return self.schedule.slots[self.indices[i]]

    def segment(self, i: int) -> Schedule:
        """σ_i: the slots strictly between S_i and S_{i+1} (after S_ℓ for i = ℓ)."""
        start = self.indices[i] + 1
        stop = self.indices[i + 1] if i < self.ell else len(self.schedule.slots)
        return Schedule(self.schedule.slots[start:stop], self.schedule.m)

    def reassemble(self) -> Schedule:
        out = Schedule.empty(self.schedule.m)
        for i in range(self.ell + 1):
            out = out + Schedule((self.separator(i),), self.schedule.m) + self.segment(i)
        return out


def find_conflict(g: PrecedenceGraph, s: Schedule) -> Tuple[int, int] | None:
    """
    Smallest (slot i, then job v) such that non-sink v sits in a later slot,
    all of pred(v) is scheduled before slot i, and slot i has fewer than m
    non-sinks.

    Returns:
        (v, i) or None when the schedule is conflict-free.
    """
    before = 0
    for i, slot in enumerate(s.slots):
        if (slot & ~g.sinks).bit_count() < s.m:
            later = 0
            for t in s.slots[i + 1:]:
                later |= t
            for v in members(later & ~g.sinks):
                if is_subset(g.pred[v], before):
                    return v, i
        before |= slot
    return None


def resolve_conflicts(g: PrecedenceGraph, s: Schedule) -> Schedule:
    """
    Move non-sinks into earlier slots until no conflict is left.

    A conflicting job fills a free machine of its target slot when there is
    one, otherwise it swaps with the smallest-ID sink there. Empty slots are
    dropped at the end; the makespan never increases.

    Raises:
        InfeasibleInput: `s` is not a feasible schedule of every job.
    """
    verdict = check_feasible(g, s)
    if not verdict:
        raise InfeasibleInput(f"[Separator] Cannot resolve conflicts of an infeasible schedule: {verdict.detail}")

    slots: List[JobSet] = list(s.slots)
    limit = g.n * len(slots)
    steps = 0
    while True:
        conflict = find_conflict(g, Schedule(tuple(slots), s.m))
        if conflict is None:
            break
        if steps >= limit:
            raise InvariantViolation(f"[Separator] Resolve-Conflicts exceeded {limit} iterations")
        v, i = conflict
        j = next(k for k in range(i + 1, len(slots)) if slots[k] >> v & 1)
        bit = 1 << v
        if slots[i].bit_count() < s.m:
            slots[i] |= bit
            slots[j] &= ~bit
        else:
            z = 1 << lowest(slots[i] & g.sinks)
            slots[i] = (slots[i] & ~z) | bit
            slots[j] = (slots[j] & ~bit) | z
        steps += 1

    monitor.increment_metric("resolve_conflicts_moves", steps)
    out = Schedule(tuple(slots), s.m).without_empty_slots()
    report.debug("Conflicts resolved", moves=steps, makespan_in=s.makespan, makespan_out=out.makespan)
    return out


def extract_separator(g: PrecedenceGraph, s: Schedule) -> SeparatorDecomposition:
    """
    Read the proper separator off a conflict-free schedule.

    With t the last slot holding a non-sink, the separator is slot 0, then
    every slot before t with fewer than m non-sinks, then slot t. When t is
    slot 0 (or there is no non-sink) the separator is empty: ℓ = 0.

    Raises:
        PreconditionViolated: more than m sources.
        NotConflictFree: the schedule has a conflict.
    """
    if g.sources.bit_count() > s.m:
        raise PreconditionViolated(f"[Separator] {g.sources.bit_count()} sources exceed {s.m} machines")
    conflict = find_conflict(g, s)
    if conflict is not None:
        v, i = conflict
        raise NotConflictFree(f"[Separator] Job {v} conflicts with slot {i}")
    if not s.slots:
        return SeparatorDecomposition(s, ())

    last = max((i for i, slot in enumerate(s.slots) if slot & ~g.sinks), default=0)
    indices = [0]
    for i in range(1, last):
        if (s.slots[i] & ~g.sinks).bit_count() < s.m:
            indices.append(i)
    if last > 0:
        indices.append(last)
    return SeparatorDecomposition(s, tuple(indices))


def validate_proper(g: PrecedenceGraph, s: Schedule, d: SeparatorDecomposition) -> Verdict:
    """
    Check that `d` is a proper separator of `s`.

    Conditions, in order: structure (indices and reassembly), source
    (S_0 holds exactly the non-sink sources), A (σ_i = succ(S_i) ∖
    (succ[S_{i+1}] ∪ sinks) for i < ℓ), B (S_j ⊆ succ(S_i) ∪ sinks for i < j)
    and C (σ_ℓ holds sinks only).
    """
    if not s.slots:
        return PASS if not d.indices else Verdict(False, "structure", "separator on an empty schedule")

    if not d.indices or d.indices[0] != 0:
        return Verdict(False, "structure", "S_0 must be the first slot")
    if any(a >= b for a, b in zip(d.indices, d.indices[1:])) or d.indices[-1] >= len(s.slots):
        return Verdict(False, "structure", f"bad separator indices {d.indices}")
    if d.reassemble().slots != s.slots:
        return Verdict(False, "structure", "segments do not reassemble the schedule")

    sinks = g.sinks
    s0 = d.separator(0)
    if not is_subset(s0, g.sources) or (s0 & ~sinks) != (g.sources & ~sinks):
        return Verdict(False, "source", f"S_0 = {fmt(s0)} but sources are {fmt(g.sources)}")

    for i in range(d.ell):
        expected = g.succ_of(d.separator(i)) & ~(g.succ_closed(d.separator(i + 1)) | sinks)
        got = d.segment(i).jobs
        if got != expected:
            return Verdict(False, "A", f"σ_{i} = {fmt(got)}, expected {fmt(expected)}")

    for i in range(d.ell + 1):
        allowed = g.succ_of(d.separator(i)) | sinks
        for j in range(i + 1, d.ell + 1):
            if not is_subset(d.separator(j), allowed):
                return Verdict(False, "B", f"S_{j} not inside succ(S_{i}) ∪ sinks")

    tail = d.segment(d.ell).jobs
    if not is_subset(tail, sinks):
        return Verdict(False, "C", f"non-sinks {fmt(tail & ~sinks)} in the last segment")

    return PASS
