"""
File: "src/kairos/adats/report.py"
Context: Report Adat - structured leveled logging for solver runs.
"""
import sys
import json

from typing import Any
from datetime import datetime


class DefaultReport:
    """Adat-3: Structured logging. Lines look like `[ts] LEVEL: message | {json}`."""

    LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40, "CRITICAL": 50}

    def __init__(self, output_stream: Any = None, log_level: str = "WARNING") -> None:
        if log_level.upper() not in self.LEVELS:
            raise ValueError(f"[Report] Unknown log level {log_level!r}")
        # stdout carries CLI results, so diagnostics default to stderr.
        self._stream = output_stream or sys.stderr
        self._log_level = log_level.upper()

    def _should_log(self, level: str) -> bool:
        return self.LEVELS.get(level, 20) >= self.LEVELS[self._log_level]

    @staticmethod
    def _format_message(message: str, level: str, **kwargs: Any) -> str:
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S.%f")[:-3]
        base_msg = f"[{timestamp}] {level}: {message}"

        if kwargs:
            metadata_str = json.dumps(kwargs, default=str, separators=(",", ":"))
            base_msg += f" | {metadata_str}"

        return base_msg

    def log(self, message: str, level: str = "INFO", **kwargs: Any) -> None:
        """Log a message with optional structured metadata."""
        if self._should_log(level):
            formatted_message = self._format_message(message, level, **kwargs)
            self._stream.write(formatted_message + "\n")
            self._stream.flush()

    def debug(self, message: str, **kwargs: Any) -> None:
        self.log(message=message, level="DEBUG", **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self.log(message=message, level="INFO", **kwargs)

    def warn(self, message: str, **kwargs: Any) -> None:
        self.log(message=message, level="WARNING", **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self.log(message=message, level="ERROR", **kwargs)

    def log_solve(
            self,
            algorithm: str,
            makespan: int,
            wall_time: float,
            n: int,
            m: int,
            **kwargs: Any
    ) -> None:
        """Specialized logging for a finished solve."""
        self.info(
            message=f"Solve completed: makespan {makespan}",
            algorithm=algorithm,
            makespan=makespan,
            wall_time=wall_time,
            n=n,
            m=m,
            **kwargs,
        )

    def log_bound_check(
            self,
            bound_name: str,
            measured: float,
            bound: float,
            **kwargs: Any
    ) -> None:
        """Specialized logging for an instrumented bound; failures log at ERROR."""
        status = "PASS" if measured <= bound else "FAIL"
        self.log(
            message=f"Bound check: {bound_name} = {measured} (bound {bound})",
            level="DEBUG" if status == "PASS" else "ERROR",
            bound_name=bound_name,
            measured=measured,
            bound=bound,
            status=status,
            **kwargs,
        )

    def __str__(self) -> str:
        return f"<DefaultReport(level={self._log_level}, stream={self._stream})>"

    def __repr__(self) -> str:
        return self.__str__()
