"""
Context proxies for seamless access to the current run's Adats.

Outside an active context the proxies resolve to detached fallbacks, so that
library helpers (e.g. `reconstruct`) can be called directly: counters recorded
there are simply discarded.
"""
from typing import Any, Callable, Dict

from .paragon import _PARAGON


class _ContextProxy:
    """Proxy that delegates to the current context object of one kind."""
    def __init__(self, key: str, fallback: Callable[[], Any]):
        self._key = key
        self._fallback = fallback
        self._detached: Any = None

    def _get_current_context(self) -> Any:
        if _PARAGON.has_context():
            return getattr(_PARAGON.get_context(), self._key)
        if self._detached is None:
            self._detached = self._fallback()
        return self._detached

    def __getattr__(self, name: str) -> Any:
        return getattr(self._get_current_context(), name)

    def __setattr__(self, name: str, value: Any) -> None:
        if name.startswith('_'):
            super().__setattr__(name, value)
        else:
            setattr(self._get_current_context(), name, value)

    def __str__(self) -> str:
        return str(self._get_current_context())

    def __repr__(self) -> str:
        return repr(self._get_current_context())

    def __bool__(self) -> bool:
        return True


def _detached_session() -> Any:
    from ..adats.session import DefaultSession
    return DefaultSession(name="detached")


def _detached_monitor() -> Any:
    from ..adats.monitor import DefaultMonitor
    return DefaultMonitor(max_buffer_size=0)


def _detached_report() -> Any:
    from ..adats.report import DefaultReport
    return DefaultReport()


session = _ContextProxy('session', _detached_session)
monitor = _ContextProxy('monitor', _detached_monitor)
report = _ContextProxy('report', _detached_report)


def snapshot() -> Dict[str, Any]:
    """Counters of the active monitor (empty outside a context)."""
    if not _PARAGON.has_context():
        return {}
    return _PARAGON.get_context().monitor.get_metrics()
