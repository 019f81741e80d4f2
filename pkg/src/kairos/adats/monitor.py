"""
File: "src/kairos/adats/monitor.py"
Context: Monitor Adat - solver counters, phase timers and an event trace.
"""
import time

from collections import deque
from typing import Any, Deque, Dict

from ..aspects.events import EventRecord, serialize_event


class DefaultMonitor:
    """Adat-2: Counters for solver instrumentation plus a bounded event buffer."""

    __slots__ = (
        '_start_time', '_event_count', '_max_buffer_size',
        '_events_metadata', '_metrics', '_dropped',
    )

    def __init__(self, max_buffer_size: int = 10000):
        self._start_time = time.perf_counter()
        self._event_count = 0
        self._max_buffer_size = max_buffer_size
        self._dropped = 0

        self._events_metadata: Deque[EventRecord] = deque()
        self._metrics: Dict[str, float] = {}

    def track(self, event: str, duration: float | None = None, **metadata: Any) -> None:
        """Record an event; events beyond the buffer size are counted and dropped."""
        if self._event_count >= self._max_buffer_size:
            self._dropped += 1
            return

        elapsed = time.perf_counter() - self._start_time
        event_record = EventRecord(etype=event, timestamp=elapsed, metadata={})

        if duration is not None:
            event_record.metadata['duration'] = duration

        event_record.update_metadata(metadata)

        self._events_metadata.append(event_record)
        self._event_count += 1

    def start_timer(self, event: str) -> float:
        """Start a timer for a solver phase."""
        self.track(event=f"{event}_started")
        return time.perf_counter()

    def stop_timer(self, event: str, start_time: float, **metadata: Any) -> float:
        """Stop a timer and track the duration of the phase."""
        duration: float = time.perf_counter() - start_time
        self.track(event=f"{event}_completed", duration=duration, **metadata)
        return duration

    def increment_metric(self, name: str, value: float = 1.0) -> None:
        """Increment a metric counter."""
        self._metrics[name] = self._metrics.get(name, 0.0) + value

    def set_max_metric(self, name: str, value: float) -> None:
        """Keep the largest value seen for a metric (e.g. a tree height)."""
        if value > self._metrics.get(name, float('-inf')):
            self._metrics[name] = value

    def get_metric(self, name: str, default: float = 0.0) -> float:
        return self._metrics.get(name, default)

    def get_metrics(self) -> Dict[str, Any]:
        return self._metrics.copy()

    def get_summary(self) -> Dict[str, Any]:
        """Get monitoring summary for reporting."""
        return {
            'total_events': self._event_count,
            'dropped_events': self._dropped,
            'total_metrics': len(self._metrics),
            'events_by_type': self._count_events_by_type(),
            'metrics': self._metrics.copy(),
            'buffer_usage': self._event_count / self._max_buffer_size if self._max_buffer_size else 0.0,
        }

    def serialize_events(self) -> bytes:
        """Serialize the event trace to bytes using MessagePack."""
        return serialize_event({
            'events': [event._asdict() for event in self._events_metadata],
            'metrics': self._metrics.copy(),
            'event_count': self._event_count,
            'dropped': self._dropped,
        })

    def _count_events_by_type(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for event in self._events_metadata:
            counts[event.etype] = counts.get(event.etype, 0) + 1
        return counts

    def __str__(self) -> str:
        return f"<DefaultMonitor(events={self._event_count}, metrics={len(self._metrics)})>"

    def __repr__(self) -> str:
        return self.__str__()
