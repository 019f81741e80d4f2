"""
File: "src/kairos/schedule/model.py"
Context: Schedule - ordered timeslots of unit jobs, plus the feasibility check.
"""
from dataclasses import dataclass
from typing import Iterable, Tuple

from ..graph.jobset import JobSet, from_jobs, members, fmt
from ..graph.poset import PrecedenceGraph
from ..errors import PreconditionViolated


@dataclass(frozen=True, slots=True)
class Verdict:
    """Pass/fail answer that names the first failed condition."""
    ok: bool
    condition: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(ok=True)


@dataclass(frozen=True, slots=True)
class Schedule:
    """
    Timeslots T_1..T_M on m machines. The makespan is the slot count.

    `a + b` concatenates two schedules on the same machine count.
    """
    slots: Tuple[JobSet, ...]
    m: int

    @classmethod
    def from_lists(cls, slots: Iterable[Iterable[int]], m: int) -> "Schedule":
        return cls(tuple(from_jobs(slot) for slot in slots), m)

    @classmethod
    def empty(cls, m: int) -> "Schedule":
        return cls((), m)

    @property
    def makespan(self) -> int:
        return len(self.slots)

    @property
    def jobs(self) -> JobSet:
        """V(σ): every scheduled job."""
        out = 0
        for slot in self.slots:
            out |= slot
        return out

    def as_lists(self) -> list[list[int]]:
        return [list(members(slot)) for slot in self.slots]

    def without_empty_slots(self) -> "Schedule":
        return Schedule(tuple(slot for slot in self.slots if slot), self.m)

    def __add__(self, other: "Schedule") -> "Schedule":
        if not isinstance(other, Schedule):
            return NotImplemented
        if other.m != self.m:
            raise PreconditionViolated(f"[Schedule] Cannot concatenate schedules for {self.m} and {other.m} machines")
        return Schedule(self.slots + other.slots, self.m)

    def __len__(self) -> int:
        return len(self.slots)

    def __str__(self) -> str:
        return " | ".join(fmt(slot) for slot in self.slots) or "<empty>"


def check_feasible(g: PrecedenceGraph, s: Schedule, jobs: JobSet | None = None) -> Verdict:
    """
    Check that `s` is a feasible schedule of exactly `jobs` (default: every job).

    Conditions are checked in the order coverage, capacity, precedence, and the
    verdict names the first one that fails. Predecessors outside the
    scheduled set are ignored, so sub-job-sets can be checked too.
    """
    target = g.jobs if jobs is None else jobs

    seen = 0
    for i, slot in enumerate(s.slots):
        if slot & seen:
            return Verdict(False, "coverage", f"jobs {fmt(slot & seen)} scheduled twice (slot {i + 1})")
        seen |= slot
    if seen != target:
        missing, extra = target & ~seen, seen & ~target
        return Verdict(False, "coverage", f"missing {fmt(missing)}, unexpected {fmt(extra)}")

    for i, slot in enumerate(s.slots):
        if slot.bit_count() > s.m:
            return Verdict(False, "capacity", f"slot {i + 1} holds {slot.bit_count()} jobs on {s.m} machines")

    done = 0
    for i, slot in enumerate(s.slots):
        for v in members(slot):
            late = g.pred[v] & seen & ~done
            if late:
                return Verdict(False, "precedence", f"job {v} in slot {i + 1} before its predecessors {fmt(late)}")
        done |= slot

    return PASS
