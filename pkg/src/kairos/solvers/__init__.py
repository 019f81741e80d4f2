from .base import Instance, SolveReport
from .baselines import optimal_schedule, solve_brute, solve_antichain_dp
from .reconstruct import SubscheduleTable, reconstruct, expand_witness, required_pairs
from .subexp import solve_subexp, report_tree_bounds, default_lambda
from .convolution import SubsetFunction, or_subset_convolve, solve_subset_conv
from .portfolio import ALPHA, peel_sinks, solve_combined, solve_race

SOLVERS = {
    'brute': solve_brute,
    'antichain-dp': solve_antichain_dp,
    'subexp': solve_subexp,
    'subsetconv': solve_subset_conv,
    'auto': solve_combined,
}

__all__ = [
    'Instance', 'SolveReport',
    'optimal_schedule', 'solve_brute', 'solve_antichain_dp',
    'SubscheduleTable', 'reconstruct', 'expand_witness', 'required_pairs',
    'solve_subexp', 'report_tree_bounds', 'default_lambda',
    'SubsetFunction', 'or_subset_convolve', 'solve_subset_conv',
    'ALPHA', 'peel_sinks', 'solve_combined', 'solve_race',
    'SOLVERS',
]
