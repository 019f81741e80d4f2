"""
File: "src/kairos/core/paragon.py"
Context: Paragon - Context-local run state for solver calls.

A run context bundles the three Adats with a cancel flag. Long-running
solver loops call `checkpoint` so that a run can be stopped from another
thread (race mode stops the losing racer this way).
"""
import contextvars
import threading

from dataclasses import dataclass, field
from typing import Any

from ..errors import Cancelled


@dataclass(frozen=True, slots=True)
class RunContext:
    """The Adats of one solver run plus its cancel flag."""
    session: Any
    monitor: Any
    report: Any
    cancel: threading.Event = field(default_factory=threading.Event)

    @property
    def cancelled(self) -> bool:
        return self.cancel.is_set()


class Paragon:
    """Context-local storage manager for the active RunContext."""
    def __init__(self):
        self._context: contextvars.ContextVar[RunContext | None] = (
            contextvars.ContextVar("kairos_context", default=None)
        )

    def set_context(
            self,
            session: Any,
            monitor: Any,
            report: Any,
            cancel: threading.Event | None = None,
    ) -> contextvars.Token:
        """
        Activate a run context for the current execution context.

        Args:
            session (Any): Session object (Adat) holding limits and run state.
            monitor (Any): Monitor object (Adat) holding counters and events.
            report (Any): Report object (Adat) used for structured logging.
            cancel (Event | None): Cancel flag. Defaults to the enclosing
                run's flag, or a fresh one at top level.

        Returns:
            Token: A Token object used to restore the previous context.
        """
        if cancel is None:
            outer = self._context.get()
            cancel = outer.cancel if outer is not None else threading.Event()
        return self._context.set(RunContext(session=session, monitor=monitor, report=report, cancel=cancel))

    def get_context(self) -> RunContext:
        """
        Raises:
            RuntimeError: If context is not active.
        """
        context = self._context.get()
        if context is None:
            raise RuntimeError(
                "[Paragon] Context not active. Use the sentinel decorator "
                "or manually activate the context with the bifrost context manager."
            )
        return context

    def has_context(self) -> bool:
        return self._context.get() is not None

    def checkpoint(self, where: str) -> None:
        """
        Raise if the active run was cancelled; a no-op outside any context.

        Raises:
            Cancelled: the run's cancel flag is set.
        """
        context = self._context.get()
        if context is not None and context.cancel.is_set():
            raise Cancelled(f"[{where}] Run cancelled")

    @staticmethod
    def copy_current_context() -> contextvars.Context:
        """Copy the entire current execution context for propagation into worker threads."""
        return contextvars.copy_context()

    def reset_context(self, token: contextvars.Token) -> None:
        """Reset current context object to its previous state using token."""
        self._context.reset(token)


_PARAGON = Paragon()
