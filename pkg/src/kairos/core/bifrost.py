"""
File: "src/kairos/core/bifrost.py"
Context: Bifrost - Context manager for clean setup and teardown of context objects.

Trivia: In Norse Mythology, 'Bifrost' is the bridge that connects Midgard with Asgard.
"""
import threading

from contextlib import contextmanager
from typing import Any, Iterator, Tuple

from .paragon import _PARAGON


def _fill_defaults(session: Any, monitor: Any, report: Any) -> Tuple[Any, Any, Any]:
    # Local imports: the Adats import the core package themselves.
    from ..adats.session import DefaultSession
    from ..adats.monitor import DefaultMonitor
    from ..adats.report import DefaultReport

    return (
        session if session is not None else DefaultSession(),
        monitor if monitor is not None else DefaultMonitor(),
        report if report is not None else DefaultReport(),
    )


@contextmanager
def bifrost_sync(
        session: Any = None,
        monitor: Any = None,
        report: Any = None,
        cancel: threading.Event | None = None,
) -> Iterator[Tuple[Any, Any, Any]]:
    """
    Activate a context for the enclosed block. Missing Adats are created with defaults.

    Without `cancel` the block shares the cancel flag of the enclosing run.
    """
    adats = _fill_defaults(session, monitor, report)
    token = _PARAGON.set_context(session=adats[0], monitor=adats[1], report=adats[2], cancel=cancel)
    try:
        yield adats
    finally:
        _PARAGON.reset_context(token=token)
