"""
Per-matrix spectral quantities: maximum cycle mean, critical graph,
strongly connected components, cyclicity and ultimate rank.

Vertices are 0-based indices into the matrix.  All arithmetic is exact:
cycle means are Fractions, and the critical graph is found on integer
weights scaled by the denominator of rho.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from tropical_core import BOTTOM, DimensionError, Rational, TropicalMatrix, norm_inf, ratio

Edge = Tuple[int, int, int]


@dataclass(frozen=True)
class MatrixGraph:
    """G(A): one edge (i, j, A_ij) per finite entry."""
    vertex_count: int
    edges: Tuple[Edge, ...]


@dataclass(frozen=True)
class CriticalGraph:
    """Union of the cycles attaining rho, split into strongly connected components.

    components pairs each vertex set with its cyclicity (gcd of cycle lengths).
    """
    vertex_count: int
    rho: Rational
    edges: Tuple[Edge, ...]
    components: Tuple[Tuple[FrozenSet[int], int], ...]

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset().union(*(c for c, _ in self.components))

    @property
    def cyclicity(self) -> int:
        """lcm of the component cyclicities (1 for an empty graph)."""
        out = 1
        for _, c in self.components:
            out = out * c // math.gcd(out, c)
        return out


# ── graphs ────────────────────────────────────────────────────

def graph_of(m: TropicalMatrix) -> MatrixGraph:
    if not m.is_square:
        raise DimensionError(f"graph_of needs a square matrix, got {m.rows}x{m.cols}")
    edges = tuple((i, j, w) for i, row in enumerate(m.entries)
                  for j, w in enumerate(row) if w is not BOTTOM)
    return MatrixGraph(m.rows, edges)


def _best_edges(edges: Iterable[Edge]) -> Dict[Tuple[int, int], int]:
    """Collapse parallel edges, keeping the heaviest."""
    best = {}
    for u, v, w in edges:
        key = (u, v)
        if key not in best or w > best[key]:
            best[key] = w
    return best


def _digraph(vertex_count: int, weights: Dict[Tuple[int, int], int]) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(vertex_count))
    g.add_weighted_edges_from((u, v, w) for (u, v), w in weights.items())
    return g


def _nontrivial_components(g: nx.DiGraph) -> List[List[int]]:
    """SCCs that carry at least one cycle, each sorted, in order of smallest vertex."""
    comps = []
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or g.has_edge(next(iter(comp)), next(iter(comp))):
            comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


# ── maximum cycle mean ────────────────────────────────────────

def _karp(comp: Sequence[int], weights: Dict[Tuple[int, int], int]) -> Fraction:
    """Karp's maximum cycle mean on one strongly connected component."""
    n = len(comp)
    local = {v: i for i, v in enumerate(comp)}
    inner = [(local[u], local[v], w) for (u, v), w in weights.items()
             if u in local and v in local]

    # walk[k][v] = heaviest walk of exactly k edges from comp[0] to v
    walk = [[BOTTOM] * n for _ in range(n + 1)]
    walk[0][0] = 0
    for k in range(1, n + 1):
        prev, cur = walk[k - 1], walk[k]
        for u, v, w in inner:
            if prev[u] is BOTTOM:
                continue
            s = prev[u] + w
            if cur[v] is BOTTOM or s > cur[v]:
                cur[v] = s

    best = None
    for v in range(n):
        if walk[n][v] is BOTTOM:
            continue
        worst = None
        for k in range(n):
            if walk[k][v] is BOTTOM:
                continue
            mean = Fraction(walk[n][v] - walk[k][v], n - k)
            if worst is None or mean < worst:
                worst = mean
        if worst is not None and (best is None or worst > best):
            best = worst
    return best


def max_cycle_mean(vertex_count: int, edges: Iterable[Edge]) -> Rational:
    """Maximum mean weight over the cycles of a weighted digraph, BOTTOM if acyclic.

    Karp's algorithm is run on each strongly connected component separately so
    that unreachable pairs never leak -inf into the minimisation.
    """
    weights = _best_edges(edges)
    g = _digraph(vertex_count, weights)
    best = BOTTOM
    for comp in _nontrivial_components(g):
        mean = _karp(comp, weights)
        if best is BOTTOM or mean > best:
            best = mean
    return best


def spectral_radius(m: TropicalMatrix) -> Rational:
    """rho(M): the maximum cycle mean of G(M)."""
    graph = graph_of(m)
    return max_cycle_mean(graph.vertex_count, graph.edges)


# ── critical graph ────────────────────────────────────────────

def _component_cyclicity(comp: Iterable[int], edges: Sequence[Tuple[int, int]]) -> int:
    """gcd over edges of depth(u) + 1 - depth(v) for a BFS depth labelling."""
    comp = set(comp)
    g = nx.DiGraph()
    g.add_nodes_from(comp)
    g.add_edges_from((u, v) for u, v in edges if u in comp and v in comp)
    depth = nx.single_source_shortest_path_length(g, min(comp))
    period = 0
    for u, v in g.edges:
        period = math.gcd(period, abs(depth[u] + 1 - depth[v]))
    return period


def critical_graph_of_edges(vertex_count: int, edges: Iterable[Edge]) -> CriticalGraph:
    """Critical graph of an arbitrary weighted digraph (parallel edges collapsed)."""
    weights = _best_edges(edges)
    rho = max_cycle_mean(vertex_count, ((u, v, w) for (u, v), w in weights.items()))
    if rho is BOTTOM:
        return CriticalGraph(vertex_count, BOTTOM, (), ())

    # scale by the denominator so that critical cycles have weight exactly 0
    p, q = rho.numerator, rho.denominator
    scaled = {e: q * w - p for e, w in weights.items()}

    # longest-path potentials; no positive cycle exists after scaling
    g = nx.DiGraph()
    g.add_nodes_from(range(vertex_count))
    g.add_weighted_edges_from((u, v, -w) for (u, v), w in scaled.items())
    g.add_weighted_edges_from(("source", v, 0) for v in range(vertex_count))
    dist = nx.single_source_bellman_ford_path_length(g, "source")
    potential = [-dist[v] for v in range(vertex_count)]

    tight = {e: weights[e] for e, w in scaled.items() if potential[e[0]] + w == potential[e[1]]}
    comps = _nontrivial_components(_digraph(vertex_count, tight))
    member = {v: idx for idx, comp in enumerate(comps) for v in comp}
    crit_edges = tuple(sorted((u, v, w) for (u, v), w in tight.items()
                              if u in member and member[u] == member.get(v)))
    pairs = [(u, v) for u, v, _ in crit_edges]
    components = tuple((frozenset(comp), _component_cyclicity(comp, pairs)) for comp in comps)
    return CriticalGraph(vertex_count, rho, crit_edges, components)


def critical_graph(m: TropicalMatrix) -> CriticalGraph:
    graph = graph_of(m)
    return critical_graph_of_edges(graph.vertex_count, graph.edges)


def ultimate_rank_matrix(m: TropicalMatrix) -> int:
    """Sum of the cyclicities of the critical components; 0 iff M is nilpotent."""
    return sum(c for _, c in critical_graph(m).components)


def growth_sequence(m: TropicalMatrix, n: int) -> List[Tuple[int, Rational]]:
    """[(k, ||M^k|| / k)] for k = 1..n; tends to rho(M)."""
    out = []
    current = None
    for k in range(1, n + 1):
        current = m if current is None else current @ m
        out.append((k, ratio(norm_inf(current), k)))
    return out


def is_nilpotent(m: TropicalMatrix) -> bool:
    return spectral_radius(m) is BOTTOM


__all__ = ["MatrixGraph", "CriticalGraph", "graph_of", "max_cycle_mean", "spectral_radius",
           "critical_graph", "critical_graph_of_edges", "ultimate_rank_matrix",
           "growth_sequence", "is_nilpotent"]
