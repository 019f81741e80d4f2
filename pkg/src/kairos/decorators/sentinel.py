"""
File: "src/kairos/decorators/sentinel.py"
Context: Context wrapper decorator for kairos solver entry points.
"""
import time

from typing import Any, Callable, Tuple
from functools import wraps

from ..core.bifrost import bifrost_sync
from ..core.paragon import _PARAGON
from ..adats.session import DefaultSession
from ..adats.monitor import DefaultMonitor
from ..adats.report import DefaultReport
from ..errors import Cancelled


def sentinel(
        session: Any | None = None,
        monitor: Any | None = None,
        report: Any | None = None,
        name: str | None = None,
) -> Callable:
    """
    Decorator that runs the wrapped solver inside an execution context.

    If a context is already active the call joins it, so nested solvers share
    one session, one set of counters and one report. Otherwise the given Adats
    are used, and any Adat not given is created fresh for every call.

    Args:
        session: Fixed session object for top-level calls.
        monitor: Fixed monitor object for top-level calls.
        report: Fixed report object for top-level calls.
        name: Session name for freshly created sessions. Defaults to the function name.
    """
    def decorator(func: Callable) -> Callable:
        session_name = name or func.__name__

        def _adats() -> Tuple[Any, Any, Any]:
            return (
                session if session is not None else DefaultSession(name=session_name),
                monitor if monitor is not None else DefaultMonitor(),
                report if report is not None else DefaultReport(),
            )

        @wraps(func)
        def sync_wrapper(*args: Any, **kwargs: Any) -> Any:
            if _PARAGON.has_context():
                return _run(func, _PARAGON.get_context().report, args, kwargs)

            adats = _adats()
            with bifrost_sync(*adats):
                return _run(func, adats[2], args, kwargs)

        sync_wrapper._session = session
        sync_wrapper._monitor = monitor
        sync_wrapper._report = report

        return sync_wrapper

    return decorator


def _run(func: Callable, report_obj: Any, args: tuple, kwargs: dict) -> Any:
    report_obj.debug(
        f"Starting {func.__name__!r}",
        function_name=func.__name__,
        args_count=len(args),
        kwargs_keys=list(kwargs.keys()),
    )
    try:
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        duration = time.perf_counter() - start_time

        report_obj.debug(
            f"Completed {func.__name__!r}",
            function_name=func.__name__,
            duration=duration,
            success=True,
        )
        return result

    except Cancelled:
        report_obj.debug(f"Cancelled {func.__name__!r}", function_name=func.__name__)
        raise
    except Exception as e:
        report_obj.error(
            f"Exception in {func.__name__!r}: {str(e)}",
            function_name=func.__name__,
            exception_type=type(e).__name__,
            success=False,
        )
        raise
