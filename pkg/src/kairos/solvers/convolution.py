"""
File: "src/kairos/solvers/convolution.py"
Context: Fast subset convolution and the layered DP over sets of finished non-sinks.

Truth tables are indexed by local masks over a universe U: bit b of a local
mask stands for the b-th smallest job of U. Boolean convolution is computed
by counting: ranked zeta transform, rank-wise product, Möbius inversion,
then a nonzero test. Counts live in unsigned numpy integers whose width is
chosen so the true counts fit; wrap-around in between is harmless because
the inversion is exact modulo 2^width.

The solver tracks f_{i,t}(X): the non-sinks X (closed under predecessors)
together with i sinks can finish within t slots.
"""
import time

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..adats.session import current_limits
from ..core.paragon import _PARAGON
from ..core.proxies import monitor, report
from ..decorators.sentinel import sentinel
from ..graph.jobset import JobSet, members, size, smallest
from ..graph.poset import PrecedenceGraph
from ..schedule.model import Schedule
from .base import Instance, SolveReport
from ..errors import InstanceTooLarge, InvariantViolation, UniverseMismatch, WitnessUnavailable


@dataclass(frozen=True, slots=True)
class SubsetFunction:
    """A boolean function on all subsets of `universe`, as a truth table of length 2^|universe|."""
    universe: JobSet
    table: np.ndarray

    def __post_init__(self) -> None:
        expected = 1 << size(self.universe)
        if self.table.shape != (expected,):
            raise UniverseMismatch(f"[Convolution] Table of shape {self.table.shape}, expected ({expected},)")

    @property
    def width(self) -> int:
        return size(self.universe)

    def local(self, s: JobSet) -> int:
        """Local mask of a job set contained in the universe."""
        out = 0
        for b, v in enumerate(members(self.universe)):
            if s >> v & 1:
                out |= 1 << b
        return out

    def __call__(self, s: JobSet) -> bool:
        return bool(self.table[self.local(s)])


class _ConvolutionKernel:
    """Ranked transforms over a fixed width, with the popcount index precomputed."""

    def __init__(self, width: int, max_count: int) -> None:
        self.width = width
        self.count = 1 << width
        self.dtype = np.uint32 if max_count < 2 ** 32 else np.uint64
        idx = np.arange(self.count, dtype=np.int64)
        self.popcount = np.zeros(self.count, dtype=np.int64)
        for b in range(width):
            self.popcount += (idx >> b) & 1
        self._columns = np.arange(self.count)

    def _transform(self, ranked: np.ndarray, inverse: bool) -> np.ndarray:
        rows = ranked.shape[0]
        for b in range(self.width):
            view = ranked.reshape(rows, -1, 2, 1 << b)
            if inverse:
                view[:, :, 1, :] -= view[:, :, 0, :]
            else:
                view[:, :, 1, :] += view[:, :, 0, :]
        return ranked

    def zeta(self, table: np.ndarray, max_rank: int | None = None) -> np.ndarray:
        """Ranked zeta transform: out[r, S] = #{Z ⊆ S : |Z| = r, table[Z]}."""
        top = self.width if max_rank is None else min(max_rank, self.width)
        ranked = np.zeros((top + 1, self.count), dtype=self.dtype)
        keep = table.astype(bool) & (self.popcount <= top)
        ranked[self.popcount[keep], self._columns[keep]] = 1
        return self._transform(ranked, inverse=False)

    def product(self, left: np.ndarray, right: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        """Accumulate the rank-wise product of two transformed tables into `out`."""
        if out is None:
            out = np.zeros((self.width + 1, self.count), dtype=self.dtype)
        for r2 in range(right.shape[0]):
            for r1 in range(min(left.shape[0], self.width + 1 - r2)):
                out[r1 + r2] += left[r1] * right[r2]
        return out

    def finish(self, ranked: np.ndarray, top: int | None = None) -> np.ndarray:
        """
        Möbius inversion, then read each subset at its own rank.

        Rows above `top` are known to be zero and are skipped; subsets of
        higher rank read as false.
        """
        top = self.width if top is None else min(top, self.width)
        inverted = self._transform(ranked[:top + 1], inverse=True)
        keep = self.popcount <= top
        out = np.zeros(self.count, dtype=bool)
        out[keep] = inverted[self.popcount[keep], self._columns[keep]] != 0
        return out


def or_subset_convolve(f: SubsetFunction, g: SubsetFunction) -> SubsetFunction:
    """
    (f ⊛ g)(S) = OR over Z ⊆ S of f(Z) AND g(S ∖ Z).

    Raises:
        UniverseMismatch: the functions are defined over different universes.
    """
    if f.universe != g.universe:
        raise UniverseMismatch("[Convolution] Cannot convolve functions over different universes")
    kernel = _ConvolutionKernel(f.width, 1 << f.width)
    ranked = kernel.product(kernel.zeta(f.table), kernel.zeta(g.table))
    return SubsetFunction(f.universe, kernel.finish(ranked))


@dataclass(frozen=True, slots=True)
class _Tables:
    jobs: Tuple[int, ...]
    closed: np.ndarray
    antichain: np.ndarray
    sink_count: np.ndarray


def _build_tables(g: PrecedenceGraph, kernel: _ConvolutionKernel) -> _Tables:
    universe = g.jobs & ~g.sinks
    jobs = tuple(members(universe))
    position = {v: b for b, v in enumerate(jobs)}

    def local(s: JobSet) -> int:
        return sum(1 << position[v] for v in members(s & universe))

    idx = np.arange(kernel.count, dtype=np.int64)
    closed = np.ones(kernel.count, dtype=bool)
    antichain = np.ones(kernel.count, dtype=bool)
    for b, v in enumerate(jobs):
        has = ((idx >> b) & 1).astype(bool)
        preds = local(g.pred[v])
        comparable = local(g.pred[v] | g.succ[v])
        closed &= ~has | ((idx & preds) == preds)
        antichain &= ~has | ((idx & comparable) == 0)

    # Sinks with equal predecessor sets share one comparison.
    groups: Dict[int, int] = {}
    for v in members(g.sinks):
        key = local(g.pred[v])
        groups[key] = groups.get(key, 0) + 1
    sink_count = np.zeros(kernel.count, dtype=np.int64)
    for preds, count in groups.items():
        sink_count += count * ((idx & preds) == preds)

    return _Tables(jobs=jobs, closed=closed, antichain=antichain, sink_count=sink_count)


@dataclass(frozen=True, slots=True)
class _Transformed:
    mask: np.ndarray
    ranked: np.ndarray | None
    top: int


def _transform_states(kernel: _ConvolutionKernel, mask: np.ndarray) -> _Transformed:
    """Ranked zeta of a state table, truncated at its highest occupied rank."""
    if not mask.any():
        return _Transformed(mask, None, -1)
    top = int(kernel.popcount[mask].max())
    return _Transformed(mask, kernel.zeta(mask, max_rank=top), top)


def _backtrack(
        g: PrecedenceGraph,
        m: int,
        history: List[List[np.ndarray]],
        tables: _Tables,
        kernel: _ConvolutionKernel,
) -> Schedule:
    total = size(g.sinks)
    x = kernel.count - 1
    i = total
    picks: List[Tuple[int, int]] = []
    for t in range(len(history) - 1, 0, -1):
        found = None
        sub = x
        while found is None:
            rest = x & ~sub
            if tables.antichain[sub]:
                for j in range(0, min(m - kernel.popcount[sub], i) + 1):
                    if history[t - 1][i - j][rest] and tables.sink_count[rest] >= i:
                        found = (sub, j)
                        break
            if sub == 0:
                break
            sub = (sub - 1) & x
        if found is None:
            raise WitnessUnavailable(f"[Convolution] No predecessor state at slot {t}")
        picks.append(found)
        x &= ~found[0]
        i -= found[1]
    picks.reverse()

    def to_jobs(mask: int) -> JobSet:
        return sum(1 << tables.jobs[b] for b in range(kernel.width) if mask >> b & 1)

    slots: List[JobSet] = []
    done, used = 0, 0
    for local_slot, j in picks:
        ready = 0
        for v in members(g.sinks & ~used):
            if not g.pred[v] & ~done:
                ready |= 1 << v
        fresh = smallest(ready, j)
        if size(fresh) < j:
            raise WitnessUnavailable("[Convolution] Not enough ready sinks while rebuilding the schedule")
        used |= fresh
        slot = to_jobs(local_slot)
        done |= slot
        slots.append(slot | fresh)
    return Schedule(tuple(slots), m)


class LayeredStates:
    """
    The tables f_{i,t} for i = 0..|sinks|, advanced one timeslot at a time.

    `layer[i]` is a boolean table over local masks of the non-sinks; after
    `advance()` has run t times it holds f_{i,t}.
    """

    def __init__(self, g: PrecedenceGraph, m: int) -> None:
        self.g = g
        self.m = m
        self.total = size(g.sinks)
        width = g.n - self.total
        self.kernel = _ConvolutionKernel(width, (m + 1) << width)
        self.tables = _build_tables(g, self.kernel)
        self._sinks_ok = [self.tables.sink_count >= i for i in range(self.total + 1)]
        self._slot_sets = [
            self.kernel.zeta(self.tables.antichain & (self.kernel.popcount <= m - j), max_rank=m - j)
            for j in range(m + 1)
        ]
        self._empty = np.zeros(self.kernel.count, dtype=bool)
        self.layer: List[np.ndarray] = [self._empty.copy() for _ in range(self.total + 1)]
        self.layer[0][0] = True
        self.t = 0
        self.convolutions = 0
        self.transforms = 0

    @property
    def finished(self) -> bool:
        """All non-sinks and all sinks fit within the current t slots."""
        return bool(self.layer[self.total][self.kernel.count - 1])

    def advance(self) -> List[np.ndarray]:
        """
        Compute f_{·,t+1} from f_{·,t}.

        Raises:
            InvariantViolation: a state reachable within t slots is lost at t + 1.
            Cancelled: the active run was cancelled.
        """
        kernel, m = self.kernel, self.m
        nxt: List[np.ndarray] = []
        # k -> transform of layer[k] filtered for the current i, valid while the filter keeps it unchanged
        reusable: Dict[int, _Transformed] = {}
        for i in range(self.total + 1):
            _PARAGON.checkpoint("Convolution")
            acc, acc_top = None, -1
            carried: Dict[int, _Transformed] = {}
            for j in range(0, min(m, i) + 1):
                k = i - j
                entry = reusable.get(k)
                if entry is None:
                    entry = _transform_states(kernel, self.layer[k] & self._sinks_ok[i])
                    self.transforms += entry.ranked is not None
                if i < self.total and not np.any(entry.mask & ~self._sinks_ok[i + 1]):
                    carried[k] = entry
                if entry.ranked is None:
                    continue
                acc = kernel.product(entry.ranked, self._slot_sets[j], out=acc)
                acc_top = max(acc_top, entry.top + m - j)
                self.convolutions += 1
            reusable = carried
            nxt.append(self._empty.copy() if acc is None else self.tables.closed & kernel.finish(acc, top=acc_top))

        self.t += 1
        for prev, cur in zip(self.layer, nxt):
            if np.any(prev & ~cur):
                raise InvariantViolation(f"[Convolution] Reachable states shrank at slot {self.t}")
        self.layer = nxt
        return nxt


@sentinel(name="subsetconv")
def solve_subset_conv(inst: Instance, witness: bool = False) -> SolveReport:
    """
    Exact makespan in O*(2^(n - |sinks|)) by layered subset convolution.

    Raises:
        InstanceTooLarge: more non-sinks than the configured table width.
    """
    g, m = inst.graph, inst.m
    start = time.perf_counter()
    if g.n == 0:
        return SolveReport(0, "subsetconv", Schedule.empty(m) if witness else None, {}, 0.0)

    width = g.n - size(g.sinks)
    cap = current_limits().convolution_max_width
    if width > cap:
        raise InstanceTooLarge(f"[Convolution] {width} non-sinks exceed the table width cap of {cap}")

    started = monitor.start_timer("subsetconv_tables")
    states = LayeredStates(g, m)
    monitor.stop_timer("subsetconv_tables", started, width=width)
    history = [states.layer] if witness else []

    makespan = None
    while states.t < g.n:
        layer = states.advance()
        if witness:
            history.append(layer)
        report.debug("Convolution layer done", t=states.t, reachable=int(sum(int(f.sum()) for f in layer)))
        if states.finished:
            makespan = states.t
            break

    if makespan is None:
        raise InvariantViolation("[Convolution] No schedule found within n slots")

    schedule = _backtrack(g, m, history, states.tables, states.kernel) if witness else None
    wall = time.perf_counter() - start
    monitor.increment_metric("subsetconv_convolutions", states.convolutions)
    monitor.increment_metric("subsetconv_transforms", states.transforms)
    monitor.track("subsetconv_completed", duration=wall, makespan=makespan, width=width)
    report.log_solve(algorithm="subsetconv", makespan=makespan, wall_time=wall, n=g.n, m=m, width=width)
    counters = {'convolutions': states.convolutions, 'transforms': states.transforms, 'width': width}
    return SolveReport(makespan, "subsetconv", schedule, counters, wall)
