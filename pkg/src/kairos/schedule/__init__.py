from .model import Schedule, Verdict, check_feasible
from .separator import (
    SeparatorDecomposition,
    find_conflict,
    resolve_conflicts,
    extract_separator,
    validate_proper,
)

__all__ = [
    'Schedule', 'Verdict', 'check_feasible',
    'SeparatorDecomposition', 'find_conflict', 'resolve_conflicts',
    'extract_separator', 'validate_proper',
]
