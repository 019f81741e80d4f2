"""
File: "src/kairos/errors.py"
Context: Exception hierarchy shared by every kairos component.

Messages carry the raising component in brackets, e.g. "[Poset] cycle through job 3".
"""


class KairosError(Exception):
    """Base class for all kairos errors."""


class CycleDetected(KairosError):
    """The precedence relation contains a cycle (self-loops included)."""

    def __init__(self, job: int, cycle: list[int] | None = None) -> None:
        self.job = job
        self.cycle = cycle or [job]
        super().__init__(f"[Poset] Precedence relation is cyclic through job {job}: {self.cycle}")


class PreconditionViolated(KairosError):
    """An operation was called outside its documented domain."""


class InfeasibleInput(KairosError):
    """A schedule handed to a normalization procedure is not feasible."""


class NotConflictFree(KairosError):
    """Separator extraction requires a conflict-free schedule."""


class MissingSubschedule(KairosError):
    """The reconstruction DP consulted a (first, second) slot pair absent from the table."""

    def __init__(self, first: int, second: int) -> None:
        self.first = first
        self.second = second
        super().__init__(f"[Reconstruct] No subschedule for slot pair ({first:#x}, {second:#x})")


class SourceOverflow(KairosError):
    """The reconstruction DP requires at most m sources."""


class WitnessUnavailable(KairosError):
    """A witness schedule was requested but cannot be produced."""


class InstanceTooLarge(KairosError):
    """A configured size guard was exceeded."""


class UniverseMismatch(KairosError):
    """Subset functions over different universes were combined."""


class NegativeLayer(KairosError):
    """DκS parameters put a placeholder layer below zero jobs."""


class BadParams(KairosError):
    """Generator or solver parameters are outside their valid range."""


class ParseError(KairosError):
    """A text file could not be parsed."""

    def __init__(self, message: str, line_no: int | None = None) -> None:
        self.line_no = line_no
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"[Formats] {message}{where}")


class InvariantViolation(KairosError):
    """A proven runtime property failed; this is always an implementation bug."""


class Cancelled(KairosError):
    """The run was cancelled through its context, e.g. a losing racer."""
