"""
File: "src/kairos/reductions/dks.py"
Context: Hard scheduling instances from Densest κ-Subgraph.

Vertex jobs precede the jobs of their incident edges. Three placeholder
layers L1 ≺ L2 ≺ L3 fill every timeslot of a makespan-3 schedule exactly, so
the instance has makespan 3 iff some κ vertices induce at least ℓ edges.
"""
import random

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Tuple

import networkx as nx

from ..adats.session import current_limits
from ..graph.poset import build_graph
from ..solvers.base import Instance
from ..errors import BadParams, InstanceTooLarge, InvariantViolation, NegativeLayer, PreconditionViolated


@dataclass(frozen=True, slots=True)
class DksInstance:
    """
    Undirected graph on vertices 0..N-1 plus the question "den_κ ≥ ℓ?".

    Raises:
        PreconditionViolated: loops, repeated edges, out-of-range vertices or isolated vertices.
    """
    vertices: int
    edges: Tuple[Tuple[int, int], ...]
    kappa: int
    ell: int
    graph: nx.Graph = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertices))
        for u, v in self.edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise PreconditionViolated(f"[DkS] Edge ({u}, {v}) outside vertex range 0..{self.vertices - 1}")
            if u == v:
                raise PreconditionViolated(f"[DkS] Loop at vertex {u}")
            if g.has_edge(u, v):
                raise PreconditionViolated(f"[DkS] Repeated edge ({u}, {v})")
            g.add_edge(u, v)
        isolated = sorted(nx.isolates(g))
        if isolated:
            raise PreconditionViolated(f"[DkS] Isolated vertices are not allowed: {isolated}")
        if not 0 <= self.kappa <= self.vertices:
            raise PreconditionViolated(f"[DkS] κ={self.kappa} outside 0..{self.vertices}")
        object.__setattr__(self, 'graph', g)

    @property
    def max_degree(self) -> int:
        return max((d for _, d in self.graph.degree()), default=0)


@dataclass(frozen=True, slots=True)
class Reduction:
    """The scheduling instance together with its layer arithmetic."""
    instance: Instance
    m: int
    delta: int
    vertex_jobs: Tuple[int, ...]
    edge_jobs: Tuple[int, ...]
    layers: Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]
    arcs: Tuple[Tuple[int, int], ...]

    @property
    def layer_sizes(self) -> Tuple[int, int, int]:
        return len(self.layers[0]), len(self.layers[1]), len(self.layers[2])


def reduce_dks(d: DksInstance) -> Reduction:
    """
    Build the makespan-3 instance for (G, κ, ℓ) with Δ the actual maximum degree.

    Jobs are numbered vertices first, then edges in input order, then L1, L2, L3.

    Raises:
        NegativeLayer: a placeholder layer would have a negative size.
        InstanceTooLarge: 3m exceeds the JobSet capacity.
    """
    n_vertices, n_edges = d.vertices, len(d.edges)
    delta = d.max_degree
    m = 2 * delta * n_vertices + 1
    sizes = (m - d.kappa, m + d.kappa - d.ell - n_vertices, m + d.ell - n_edges)
    for name, value in zip(("L1", "L2", "L3"), sizes):
        if value < 0:
            raise NegativeLayer(f"[DkS] Layer {name} would have {value} jobs (m={m}, κ={d.kappa}, ℓ={d.ell})")

    vertex_jobs = tuple(range(n_vertices))
    edge_jobs = tuple(range(n_vertices, n_vertices + n_edges))
    arcs: List[Tuple[int, int]] = []
    for job, (u, v) in zip(edge_jobs, d.edges):
        arcs.append((u, job))
        arcs.append((v, job))

    layers: List[Tuple[int, ...]] = []
    start = n_vertices + n_edges
    for count in sizes:
        layers.append(tuple(range(start, start + count)))
        start += count
    for upper, lower in ((layers[0], layers[1]), (layers[1], layers[2])):
        arcs.extend((u, v) for u in upper for v in lower)

    n = start
    if n != 3 * m:
        raise InvariantViolation(f"[DkS] Built {n} jobs, expected 3m = {3 * m}")

    graph = build_graph(n, arcs)
    return Reduction(
        instance=Instance(graph, m, target=3),
        m=m,
        delta=delta,
        vertex_jobs=vertex_jobs,
        edge_jobs=edge_jobs,
        layers=(layers[0], layers[1], layers[2]),
        arcs=tuple(arcs),
    )


def den_kappa_oracle(d: DksInstance) -> int:
    """
    den_κ(G): the most edges induced by κ vertices, by trying every κ-subset.

    Raises:
        InstanceTooLarge: more vertices than the oracle limit.
    """
    cap = current_limits().dks_oracle_max_vertices
    if d.vertices > cap:
        raise InstanceTooLarge(f"[DkS] {d.vertices} vertices exceed the oracle limit of {cap}")
    incident: Dict[int, int] = {v: 0 for v in range(d.vertices)}
    for u, v in d.edges:
        incident[u] |= 1 << v
        incident[v] |= 1 << u
    best = 0
    for chosen in combinations(range(d.vertices), d.kappa):
        mask = sum(1 << v for v in chosen)
        # Every induced edge is seen from both endpoints.
        count = sum((incident[v] & mask).bit_count() for v in chosen) // 2
        best = max(best, count)
    return best


def random_dks_instance(seed: int, vertices: int, max_degree: int, kappa: int | None = None, ell: int | None = None) -> DksInstance:
    """
    Reproducible random DκS instance with degrees in 1..max_degree.

    κ defaults to a random value in 1..N and ℓ to a random value in 0..C(κ, 2),
    capped so that every placeholder layer of the reduction is non-empty.

    Raises:
        BadParams: no graph without isolated vertices fits the parameters.
    """
    if vertices < 2 or max_degree < 1:
        raise BadParams(f"[DkS] Need at least 2 vertices and Δ >= 1, got N={vertices}, Δ={max_degree}")
    if max_degree == 1 and vertices % 2:
        raise BadParams(f"[DkS] Δ=1 without isolated vertices needs an even N, got N={vertices}")
    rng = random.Random(seed)
    g = nx.empty_graph(vertices)

    # Cover every vertex with a random matching; an odd vertex out joins the first pair.
    order = list(range(vertices))
    rng.shuffle(order)
    for i in range(0, vertices - 1, 2):
        g.add_edge(order[i], order[i + 1])
    if vertices % 2:
        g.add_edge(order[-1], order[0])

    candidates = list(combinations(range(vertices), 2))
    rng.shuffle(candidates)
    for u, v in candidates:
        if not g.has_edge(u, v) and g.degree(u) < max_degree and g.degree(v) < max_degree and rng.random() < 0.5:
            g.add_edge(u, v)

    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in g.edges()))
    kappa = rng.randint(1, vertices) if kappa is None else kappa
    if ell is None:
        m = 2 * max(d for _, d in g.degree()) * vertices + 1
        ell = rng.randint(0, min(kappa * (kappa - 1) // 2, m + kappa - vertices - 1))
    return DksInstance(vertices=vertices, edges=edges, kappa=kappa, ell=ell)
