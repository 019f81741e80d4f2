"""
File: "src/kairos/adats/session.py"
Context: Session Adat - run state and size-guard configuration.

Trivia: 'Adat' is the Arabic word for 'tool'. The plural is 'Adawat', but for simplicity I choose 'Adats')
"""
import uuid

from dataclasses import dataclass
from typing import Any, Dict, List
from datetime import datetime

from ..core.paragon import _PARAGON


@dataclass(frozen=True, slots=True)
class Limits:
    """
    Size guards applied by graph construction and the solvers.

    Attributes:
        max_jobs (int): JobSet capacity; graphs with more jobs are rejected.
        brute_max_jobs (int): Largest job set the exhaustive solver accepts.
        antichain_max_classes (int): Largest number of twin classes for the antichain DP.
        convolution_max_width (int): Largest non-sink universe for subset convolution.
        dks_oracle_max_vertices (int): Largest DκS graph the brute-force density oracle accepts.
    """
    max_jobs: int = 128
    brute_max_jobs: int = 12
    antichain_max_classes: int = 30
    convolution_max_width: int = 24
    dks_oracle_max_vertices: int = 16


class DefaultSession:
    """Adat-1: Session holding the run configuration and free-form run state."""

    __slots__ = ('name', 'session_id', 'limits', '_state', '_created_at', '_tags')

    def __init__(
            self,
            session_id: str | None = None,
            name: str | None = None,
            limits: Limits | None = None,
    ) -> None:
        self.name = name or "default-session"
        self.session_id = session_id or str(uuid.uuid4())
        self.limits = limits or Limits()

        self._state: Dict[str, Any] = {}
        self._created_at = datetime.now()
        self._tags: List[str] = []

    def get(self, key: str, default: Any = None) -> Any:
        return self._state.get(key, default)

    def set(self, key: str, value: Any) -> None:
        self._state[key] = value

    def add_tag(self, tag: str) -> None:
        """Add metadata tags to the session."""
        if tag not in self._tags:
            self._tags.append(tag)

    def get_tags(self) -> List[str]:
        """Return list of metadata tags."""
        return self._tags

    def get_state_snapshot(self) -> Dict[str, Any]:
        """Get complete session state snapshot for debugging."""
        return {
            'session_id': self.session_id,
            'session_name': self.name,
            'created_at': self._created_at.isoformat(),
            'tags': self._tags,
            'limits': {
                'max_jobs': self.limits.max_jobs,
                'brute_max_jobs': self.limits.brute_max_jobs,
                'antichain_max_classes': self.limits.antichain_max_classes,
                'convolution_max_width': self.limits.convolution_max_width,
                'dks_oracle_max_vertices': self.limits.dks_oracle_max_vertices,
            },
            'state': dict(self._state),
        }

    def __str__(self) -> str:
        return f"<DefaultSession(name={self.name!r}, tags={self.get_tags()!r})>"

    def __repr__(self) -> str:
        return self.__str__()


def current_limits() -> Limits:
    """Limits of the active session, or the defaults outside any context."""
    if not _PARAGON.has_context():
        return Limits()
    return _PARAGON.get_context().session.limits
