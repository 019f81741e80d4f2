from .jobset import JobSet
from .poset import (
    PrecedenceGraph,
    Interval,
    build_graph,
    is_antichain,
    interval,
    new_sinks,
    antichains,
    enumerate_slot_pairs,
)

__all__ = [
    'JobSet',
    'PrecedenceGraph', 'Interval',
    'build_graph', 'is_antichain', 'interval', 'new_sinks',
    'antichains', 'enumerate_slot_pairs',
]
