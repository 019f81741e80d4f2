"""
File: "src/kairos/solvers/base.py"
Context: Instance and SolveReport shared by every solver.
"""
from dataclasses import dataclass, field
from typing import Any, Dict

from ..graph.poset import PrecedenceGraph
from ..schedule.model import Schedule, Verdict, check_feasible
from ..errors import BadParams


@dataclass(frozen=True, slots=True)
class Instance:
    """A precedence graph to be scheduled on m identical machines."""
    graph: PrecedenceGraph
    m: int
    target: int | None = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise BadParams(f"[Instance] Machine count must be >= 1, got {self.m}")

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(slots=True)
class SolveReport:
    """
    Outcome of one solver run.

    Attributes:
        makespan: Optimal makespan.
        algorithm: Tag of the solver that produced the answer.
        witness: Optional optimal schedule.
        counters: Monitor metrics at the end of the run.
        wall_time: Seconds spent in the solver.
    """
    makespan: int
    algorithm: str
    witness: Schedule | None = None
    counters: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    def verify(self, inst: Instance) -> Verdict:
        """Check the witness (when present) against the instance and the makespan."""
        if self.witness is None:
            return Verdict(True)
        verdict = check_feasible(inst.graph, self.witness)
        if not verdict:
            return verdict
        if self.witness.makespan != self.makespan:
            return Verdict(False, "makespan", f"witness has {self.witness.makespan} slots, reported {self.makespan}")
        return verdict
