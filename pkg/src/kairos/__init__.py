"""
File: "src/kairos/__init__.py"
Context: Kairos - exact makespan for unit jobs with precedence constraints on m identical machines.
"""
from .decorators.sentinel import sentinel

from .core.proxies import session, monitor, report
from .core.bifrost import bifrost_sync

from .adats.session import DefaultSession, Limits
from .adats.monitor import DefaultMonitor
from .adats.report import DefaultReport

from .graph import PrecedenceGraph, build_graph
from .schedule import Schedule, check_feasible
from .solvers import (
    Instance, SolveReport,
    solve_brute, solve_antichain_dp, solve_subexp, solve_subset_conv,
    solve_combined, solve_race, peel_sinks,
)

__version__ = '0.1.0'
__all__ = [
    'sentinel', 'bifrost_sync',
    'session', 'monitor', 'report',
    'DefaultSession', 'DefaultMonitor', 'DefaultReport', 'Limits',
    'PrecedenceGraph', 'build_graph', 'Schedule', 'check_feasible',
    'Instance', 'SolveReport',
    'solve_brute', 'solve_antichain_dp', 'solve_subexp', 'solve_subset_conv',
    'solve_combined', 'solve_race', 'peel_sinks',
]
