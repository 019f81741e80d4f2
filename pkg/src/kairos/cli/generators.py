"""
File: "src/kairos/cli/generators.py"
Context: Instance families for tests and benchmarks. Randomized families are seeded.
"""
import random

from typing import Callable, Dict, List, Tuple

import networkx as nx

from ..reductions.dks import DksInstance, reduce_dks
from .formats import Arc, InstanceFile
from ..errors import BadParams


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise BadParams(f"[Generators] {message}")


def chain(length: int, m: int = 1) -> InstanceFile:
    _require(length >= 0, f"chain length must be >= 0, got {length}")
    return chains(1, length, m)


def chains(k: int, length: int, m: int = 3) -> InstanceFile:
    """k disjoint chains of `length` jobs each; chain i holds jobs i*length .. (i+1)*length - 1."""
    _require(k >= 0 and length >= 0, f"chains needs k, L >= 0, got k={k}, L={length}")
    arcs = [(c * length + i, c * length + i + 1) for c in range(k) for i in range(length - 1)]
    return InstanceFile.of(k * length, m, arcs)


def outstar(k: int, m: int = 3) -> InstanceFile:
    """Job 0 precedes the k leaves 1..k."""
    _require(k >= 0, f"outstar needs k >= 0, got {k}")
    return InstanceFile.of(k + 1, m, [(0, v) for v in range(1, k + 1)])


def antichain(n: int, m: int = 3) -> InstanceFile:
    _require(n >= 0, f"antichain needs n >= 0, got {n}")
    return InstanceFile.of(n, m, [])


def random_dag(n: int, p: float, m: int = 3, seed: int = 0) -> InstanceFile:
    """Each arc (u, v) with u < v is present independently with probability p."""
    _require(n >= 0, f"random needs n >= 0, got {n}")
    _require(0.0 <= p <= 1.0, f"arc probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    arcs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return InstanceFile.of(n, m, arcs)


def grid(rows: int, cols: int, m: int = 3) -> InstanceFile:
    """The r×c grid oriented down and right; cell (i, j) is job i*cols + j."""
    _require(rows >= 0 and cols >= 0, f"grid needs r, c >= 0, got r={rows}, c={cols}")
    g = nx.grid_2d_graph(rows, cols)
    arcs: List[Arc] = []
    for a, b in g.edges():
        u, v = sorted((a, b))
        arcs.append((u[0] * cols + u[1], v[0] * cols + v[1]))
    return InstanceFile.of(rows * cols, m, arcs)


def dks(d: DksInstance) -> InstanceFile:
    """Reduced instance of a DκS input; the machine count comes from the reduction."""
    reduction = reduce_dks(d)
    return InstanceFile.of(3 * reduction.m, reduction.m, reduction.arcs)


# name -> (builder, positional parameter parsers)
FAMILIES: Dict[str, Tuple[Callable[..., InstanceFile], Tuple[Callable[[str], object], ...]]] = {
    'chain': (chain, (int,)),
    'chains': (chains, (int, int)),
    'outstar': (outstar, (int,)),
    'antichain': (antichain, (int,)),
    'random': (random_dag, (int, float)),
    'grid': (grid, (int, int)),
}


def generate(family: str, params: List[str], m: int, seed: int = 0) -> InstanceFile:
    """
    Build a family member from textual parameters.

    Raises:
        BadParams: unknown family, wrong parameter count or unparsable values.
    """
    if family not in FAMILIES:
        raise BadParams(f"[Generators] Unknown family {family!r}; choose from {', '.join(sorted(FAMILIES))}")
    builder, parsers = FAMILIES[family]
    if len(params) != len(parsers):
        raise BadParams(f"[Generators] {family} takes {len(parsers)} parameters, got {len(params)}")
    try:
        values = [parse(raw) for parse, raw in zip(parsers, params)]
    except ValueError:
        raise BadParams(f"[Generators] Cannot parse parameters {params} for {family}") from None
    _require(m >= 1, f"machine count must be >= 1, got {m}")
    if family == 'random':
        return builder(*values, m=m, seed=seed)
    return builder(*values, m=m)
