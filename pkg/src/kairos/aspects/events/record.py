from typing import Any, Dict, NamedTuple


class EventRecord(NamedTuple):
    """A record of something that happened during a solver run.

    Attributes:
        etype (str): The type of event (e.g., 'dispatch', 'solve_completed').
        timestamp (float): Seconds elapsed since the monitor was created.
        metadata (dict): Additional details about the event.
    """
    etype: str
    timestamp: float
    metadata: Dict[str, Any]

    def update_metadata(self, metadata: Dict[str, Any]) -> None:
        self.metadata.update(metadata)
