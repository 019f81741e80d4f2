"""
File: "src/kairos/solvers/portfolio.py"
Context: Sink peeling, the combined solver and race mode.
"""
import threading
import time

from concurrent.futures import FIRST_COMPLETED, Future, ThreadPoolExecutor, wait
from typing import Callable, Dict, List, NamedTuple

from ..adats.monitor import DefaultMonitor
from ..adats.session import current_limits
from ..core.bifrost import bifrost_sync
from ..core.paragon import _PARAGON
from ..core.proxies import monitor, report, session
from ..decorators.sentinel import sentinel
from ..graph.jobset import JobSet, size
from ..schedule.model import Schedule
from .base import Instance, SolveReport
from .convolution import solve_subset_conv
from .subexp import Lambda, solve_subexp
from ..errors import InvariantViolation, KairosError

# α = 1 - log2(1.9969), rounded up. Subset convolution wins once m ≥ α·n.
ALPHA = 0.002238


class Peeling(NamedTuple):
    """
    Residual instance after sink peeling.

    Attributes:
        residual: What is left once more than m sinks remain (possibly nothing).
        rounds: Number of peeled sink rounds r; makespan = residual makespan + r.
        ids: ids[i] is the original job of residual job i.
        layers: Peeled sink sets in original IDs, in peeling order.
    """
    residual: Instance
    rounds: int
    ids: List[int]
    layers: List[JobSet]

    def lift(self, witness: Schedule) -> Schedule:
        """Map a residual schedule back to original IDs and append the peeled rounds."""
        slots = []
        for slot in witness.slots:
            mapped = 0
            for i, v in enumerate(self.ids):
                if slot >> i & 1:
                    mapped |= 1 << v
            slots.append(mapped)
        slots.extend(reversed(self.layers))
        return Schedule(tuple(slots), witness.m)


def peel_sinks(inst: Instance) -> Peeling:
    """
    Remove all sinks while there are at most m of them.

    Each peeled round fills one final timeslot, so the optimum drops by
    exactly one per round.
    """
    g, m = inst.graph, inst.m
    w = g.jobs
    layers: List[JobSet] = []
    while w:
        sinks = g.sinks_of(w)
        if size(sinks) > m:
            break
        layers.append(sinks)
        w &= ~sinks
    residual, ids = g.induced(w)
    report.debug("Sinks peeled", rounds=len(layers), residual_jobs=residual.n)
    return Peeling(Instance(residual, m, inst.target), len(layers), ids, layers)


def choose_branch(n: int, m: int, sinks: int) -> str:
    """Dispatch rule on the residual instance: 'subsetconv' or 'subexp'."""
    width = n - sinks
    if sinks >= m and m >= ALPHA * n and width <= current_limits().convolution_max_width:
        return "subsetconv"
    return "subexp"


@sentinel(name="combined")
def solve_combined(inst: Instance, lam: Lambda = None, witness: bool = False) -> SolveReport:
    """
    Exact makespan: peel sinks, then subset convolution or interval branching.

    Args:
        inst: The instance.
        lam: λ (integer or rule name) handed to the branching solver when it is chosen.
        witness: Also produce an optimal schedule.
    """
    start = time.perf_counter()
    peeling = peel_sinks(inst)
    residual = peeling.residual
    if residual.n == 0:
        schedule = peeling.lift(Schedule.empty(inst.m)) if witness else None
        session.set("dispatch", "peeled")
        session.add_tag("dispatch:peeled")
        return SolveReport(peeling.rounds, "auto:peeled", schedule, {'peeled_rounds': peeling.rounds},
                           time.perf_counter() - start)

    branch = choose_branch(residual.n, residual.m, size(residual.graph.sinks))
    session.set("dispatch", branch)
    session.add_tag(f"dispatch:{branch}")
    monitor.track("dispatch", branch=branch, n=residual.n, m=residual.m, peeled_rounds=peeling.rounds)
    report.debug("Dispatching residual instance", branch=branch, n=residual.n, m=residual.m)

    if branch == "subsetconv":
        sub = solve_subset_conv(residual, witness=witness)
    else:
        sub = solve_subexp(residual, lam=lam, witness=witness)

    makespan = sub.makespan + peeling.rounds
    schedule = peeling.lift(sub.witness) if sub.witness is not None else None
    counters = dict(sub.counters)
    counters['peeled_rounds'] = peeling.rounds
    wall = time.perf_counter() - start
    report.log_solve(algorithm=f"auto:{branch}", makespan=makespan, wall_time=wall, n=inst.n, m=inst.m)
    return SolveReport(makespan, f"auto:{branch}", schedule, counters, wall)


def _racer(
        solver: Callable[..., SolveReport],
        inst: Instance,
        cancel: threading.Event,
        **kwargs,
) -> Callable[[], SolveReport]:
    # Each racer counts into its own monitor and stops on its own flag; session and report are shared.
    def run() -> SolveReport:
        ctx = _PARAGON.get_context()
        with bifrost_sync(session=ctx.session, monitor=DefaultMonitor(), report=ctx.report, cancel=cancel):
            return solver(inst, **kwargs)
    return run


@sentinel(name="race")
def solve_race(inst: Instance, verify: bool = False, lam: Lambda = None, witness: bool = False) -> SolveReport:
    """
    Run interval branching and subset convolution in two threads; the first answer wins.

    Without `verify` the losing racer is cancelled and joined before
    returning. With `verify`, wait for both and require equal makespans. A
    racer that fails a size guard simply drops out.

    Raises:
        InvariantViolation: both racers finished with different makespans.
        KairosError: every racer failed; the first failure is re-raised.
    """
    flags = {'subexp': threading.Event(), 'subsetconv': threading.Event()}
    racers = {
        'subexp': _racer(solve_subexp, inst, flags['subexp'], lam=lam, witness=witness),
        'subsetconv': _racer(solve_subset_conv, inst, flags['subsetconv'], witness=witness),
    }
    pool = ThreadPoolExecutor(max_workers=len(racers), thread_name_prefix="kairos-race")
    futures: Dict[Future, str] = {}
    for name, run in racers.items():
        ctx = _PARAGON.copy_current_context()
        futures[pool.submit(ctx.run, run)] = name

    results: Dict[str, SolveReport] = {}
    failures: List[KairosError] = []
    pending = set(futures)
    try:
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for future in done:
                try:
                    results[futures[future]] = future.result()
                except KairosError as e:
                    report.warn("Racer dropped out", racer=futures[future], error=str(e))
                    failures.append(e)
            if results and not verify:
                break
    finally:
        for name in (futures[f] for f in pending):
            flags[name].set()
        pool.shutdown(wait=True, cancel_futures=True)

    if not results:
        raise failures[0]

    if verify and len({r.makespan for r in results.values()}) > 1:
        raise InvariantViolation(
            f"[Portfolio] Racers disagree: {', '.join(f'{k}={v.makespan}' for k, v in results.items())}"
        )

    winner = next(iter(results.values()))
    session.add_tag(f"race:{winner.algorithm}")
    monitor.track("race_finished", winner=winner.algorithm, finished=len(results), cancelled=len(pending))
    return winner
