"""
Joint spectral radius and ultimate rank of finitely generated semigroups.

Finite-entry families are handled exactly.  In a product of such matrices
every entry is within 2b of the first entry of its row and of its column, so
after subtracting entry (1,1) there are at most (4b+1)^(d^2-1) matrices and
the normalized orbit vectors of the zero vector live in {-2b..2b}^(d-1):

  - normalized_closure enumerates the projective semigroup (urk),
  - closure_graph follows the orbit of the zero vector; its minimum mean
    cycle is rho(Gamma).

Families with -inf entries only get anytime answers: upper bounds that
decrease with the search length, and certificates of negativity.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

import config
from spectral import critical_graph_of_edges, max_cycle_mean, spectral_radius, ultimate_rank_matrix
from tropical_core import (BOTTOM, BudgetExceeded, DimensionError, Rational, TropicalError,
                           TropicalMatrix, is_finite, max_abs_entry, norm_inf, normalize, ratio,
                           scalar_offset, tmax, tmul, vec_mat)

logger = logging.getLogger(__name__)

GeneratorWord = Tuple[int, ...]


class FiniteEntriesRequired(TropicalError):
    pass


class ClosureNotFinite(BudgetExceeded):
    """The closure budget ran out on a family with -inf entries.

    Attributes:
        partial: the NormalizedSemigroup built so far
    """

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class MatrixFamily:
    """A finite set Gamma of square matrices of one dimension."""
    generators: Tuple[TropicalMatrix, ...]

    def __post_init__(self):
        if not self.generators:
            raise TropicalError("a family needs at least one generator")
        d = self.generators[0].rows
        for i, g in enumerate(self.generators):
            if g.rows != d or g.cols != d:
                raise DimensionError(f"generator {i} is {g.rows}x{g.cols}, expected {d}x{d}")

    @classmethod
    def of(cls, matrices) -> "MatrixFamily":
        return cls(tuple(matrices))

    @property
    def dim(self) -> int:
        return self.generators[0].rows

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @cached_property
    def finite_entries(self) -> bool:
        return all(is_finite(g) for g in self.generators)

    @cached_property
    def entry_bound(self) -> int:
        """b = max |finite entry|."""
        return max(max_abs_entry(g) for g in self.generators)

    def offset(self, k: int) -> "MatrixFamily":
        """k ⊙ Gamma."""
        return MatrixFamily(tuple(scalar_offset(k, g) for g in self.generators))

    def product(self, word: Sequence[int]) -> TropicalMatrix:
        if not word:
            raise TropicalError("products need at least one generator")
        m = self.generators[word[0]]
        for i in word[1:]:
            m = tmul(m, self.generators[i])
        return m


@dataclass(frozen=True)
class ClosureGraph:
    """Projective orbit of the zero row vector.

    states hold normalized vectors (first coordinate 0); an edge
    (s, g, t, c) means states[s] . Gamma[g] = c ⊙ states[t].
    """
    states: Tuple[Tuple[int, ...], ...]
    start: int
    edges: Tuple[Tuple[int, int, int, int], ...]


@dataclass(frozen=True)
class NormalizedSemigroup:
    """Lambda = {-M_11 ⊙ M : M in <Gamma>}, each element with a shortest witness word."""
    elements: Dict[TropicalMatrix, GeneratorWord]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m):
        return m in self.elements


def _require_finite(family: MatrixFamily, what: str, fallback: str) -> None:
    if not family.finite_entries:
        raise FiniteEntriesRequired(f"exact {what} requires finite entries; use {fallback}")


# ── closures ──────────────────────────────────────────────────

def normalized_closure(family: MatrixFamily,
                       max_elements: int = config.DEFAULT_MAX_ELEMENTS) -> NormalizedSemigroup:
    """Breadth-first closure under right multiplication, normalized projectively.

    Terminates on its own for finite-entry families; otherwise max_elements is
    the only guard and running out raises ClosureNotFinite.
    """
    elements: Dict[TropicalMatrix, GeneratorWord] = {}
    queue = deque()
    for i, g in enumerate(family.generators):
        _, n = normalize(g)
        if n not in elements:
            elements[n] = (i,)
            queue.append(n)

    while queue:
        m = queue.popleft()
        word = elements[m]
        for i, g in enumerate(family.generators):
            _, n = normalize(tmul(m, g))
            if n in elements:
                continue
            elements[n] = word + (i,)
            queue.append(n)
            if len(elements) > max_elements:
                partial = NormalizedSemigroup(elements)
                if family.finite_entries:
                    raise BudgetExceeded(f"closure exceeded {max_elements} elements")
                raise ClosureNotFinite(
                    f"closure not guaranteed finite: exceeded {max_elements} elements", partial)

    logger.info("CLOSURE: %d normalized elements", len(elements))
    return NormalizedSemigroup(elements)


def _normalize_vector(v):
    c = v[0]
    return c, tuple(x - c for x in v)


def closure_graph(family: MatrixFamily,
                  max_elements: int = config.DEFAULT_MAX_ELEMENTS) -> ClosureGraph:
    """Projective orbit of the zero vector under the generators."""
    _require_finite(family, "JSR", "an upper bound or a certificate")
    start = (0,) * family.dim
    index = {start: 0}
    states = [start]
    edges = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for g_index, g in enumerate(family.generators):
            c, nxt = _normalize_vector(vec_mat(states[s], g))
            t = index.get(nxt)
            if t is None:
                t = index[nxt] = len(states)
                states.append(nxt)
                queue.append(t)
                if len(states) > max_elements:
                    raise BudgetExceeded(f"orbit exceeded {max_elements} states")
            edges.append((s, g_index, t, c))
    logger.info("ORBIT: %d states, %d edges", len(states), len(edges))
    return ClosureGraph(tuple(states), 0, tuple(edges))


def closure_matrix(graph: ClosureGraph) -> TropicalMatrix:
    """The orbit graph as one max-plus matrix with negated offsets.

    rho(Gamma) = -rho(closure_matrix): the growth rate of a deterministic
    automaton is the spectral radius of a single matrix over its states.
    """
    n = len(graph.states)
    rows = [[BOTTOM] * n for _ in range(n)]
    for s, _, t, c in graph.edges:
        if rows[s][t] is BOTTOM or -c > rows[s][t]:
            rows[s][t] = -c
    return TropicalMatrix.from_rows(rows)


# ── exact values ──────────────────────────────────────────────

def jsr_exact_finite(family: MatrixFamily,
                     max_elements: int = config.DEFAULT_MAX_ELEMENTS) -> Rational:
    """rho(Gamma) as the minimum mean cycle of the orbit graph."""
    graph = closure_graph(family, max_elements)
    return -max_cycle_mean(len(graph.states), ((s, t, -c) for s, _, t, c in graph.edges))


def jsr_witness_finite(family: MatrixFamily,
                       max_elements: int = config.DEFAULT_MAX_ELEMENTS
                       ) -> Tuple[GeneratorWord, Rational]:
    """A periodic product W with rho(W) / |W| = rho(Gamma).

    Any cycle of the critical graph of the negated orbit graph is a minimum
    mean cycle; its generator labels give the product.
    """
    graph = closure_graph(family, max_elements)
    label = {}
    for s, g_index, t, c in graph.edges:
        if (s, t) not in label or c < label[(s, t)][1]:
            label[(s, t)] = (g_index, c)
    crit = critical_graph_of_edges(len(graph.states), ((s, t, -c) for s, _, t, c in graph.edges))
    comp, _ = crit.components[0]
    g = nx.DiGraph()
    g.add_edges_from((u, v) for u, v, _ in crit.edges if u in comp and v in comp)
    cycle = nx.find_cycle(g, source=min(comp))
    word = tuple(label[(u, v)][0] for u, v in cycle)
    return word, -crit.rho


def urk_exact_finite(family: MatrixFamily,
                     max_elements: int = config.DEFAULT_MAX_ELEMENTS) -> int:
    """min urk over the normalized closure; urk is invariant under k ⊙."""
    _require_finite(family, "urk", "an upper bound")
    closure = normalized_closure(family, max_elements)
    return min(ultimate_rank_matrix(m) for m in closure)


def jsr_offset_reduce(family: MatrixFamily) -> Tuple[int, MatrixFamily]:
    """(k, (-k) ⊙ Gamma) with k the greatest finite entry, so every entry becomes <= 0."""
    k = tmax(norm_inf(g) for g in family.generators)
    if k is BOTTOM:
        raise TropicalError("every entry is -inf; the joint spectral radius is -inf")
    return k, family.offset(-k)


# ── anytime bounds ────────────────────────────────────────────

def _level_products(family: MatrixFamily, max_len: int, max_elements: int, projective: bool):
    """Yield (length, entries) for each length up to max_len.

    entries maps a matrix key to (offset, word, matrix).  With projective=True
    products are stored normalized and only the smallest offset per key
    survives, which dominates every extension of the others.  Otherwise keys
    are exact products and the first word in lexicographic order is kept.
    """
    level = {}
    for i, g in enumerate(family.generators):
        _store(level, g, (i,), 0, projective)
    length = 1
    while True:
        yield length, level
        if length == max_len:
            return
        nxt = {}
        for offset, word, m in level.values():
            for i, g in enumerate(family.generators):
                _store(nxt, tmul(m, g), word + (i,), offset, projective)
                if len(nxt) > max_elements:
                    raise BudgetExceeded(f"more than {max_elements} products of length {length + 1}")
        level = nxt
        length += 1


def _store(level, m, word, offset, projective):
    if projective:
        c, m = normalize(m)
        offset = offset + c
    key = m
    if key not in level or offset < level[key][0]:
        level[key] = (offset, word, m)


def jsr_upper_bound_witness(family: MatrixFamily, max_len: int = config.DEFAULT_MAX_LEN,
                            max_elements: int = config.DEFAULT_MAX_ELEMENTS
                            ) -> Tuple[Rational, Optional[GeneratorWord]]:
    """Smallest min(||W||, rho(W)) / |W| over products with |W| <= max_len, and its W."""
    best, best_word = None, None
    for length, level in _level_products(family, max_len, max_elements, projective=True):
        for offset, word, m in level.values():
            norm_term = ratio(offset + norm_inf(m), length)
            rho = spectral_radius(m)
            rho_term = BOTTOM if rho is BOTTOM else (offset + rho) / length
            term = min(norm_term, rho_term)
            if best is None or term < best:
                best, best_word = term, word
            if best is BOTTOM:
                logger.info("BOUND: nilpotent product %s", best_word)
                return BOTTOM, best_word
    logger.info("BOUND: %s at length <= %d", best, max_len)
    return best, best_word


def jsr_upper_bound(family: MatrixFamily, max_len: int = config.DEFAULT_MAX_LEN,
                    max_elements: int = config.DEFAULT_MAX_ELEMENTS) -> Rational:
    """Anytime upper bound on rho(Gamma); nonincreasing in max_len."""
    return jsr_upper_bound_witness(family, max_len, max_elements)[0]


def _diagonal_max(m: TropicalMatrix):
    return tmax(m.entries[i][i] for i in range(m.rows))


def certify_jsr_negative(family: MatrixFamily, max_len: int = config.DEFAULT_MAX_LEN,
                         max_elements: int = config.DEFAULT_MAX_ELEMENTS
                         ) -> Optional[Tuple[GeneratorWord, Rational]]:
    """Shortest product W with rho(W) / |W| < 0, proving rho(Gamma) < 0.

    No certificate of rho(Gamma) >= 0 exists in general; None only means the
    search up to max_len found nothing.
    """
    for length, level in _level_products(family, max_len, max_elements, projective=False):
        for _, word, m in level.values():
            diag = _diagonal_max(m)
            if diag is not BOTTOM and diag >= 0:
                continue
            rho = spectral_radius(m)
            if rho is BOTTOM or rho < 0:
                value = rho / length
                logger.info("CERTIFICATE: word %s, rho/len = %s", word, value)
                return word, value
    return None


def urk_upper_bound(family: MatrixFamily, max_len: int = config.DEFAULT_MAX_LEN,
                    max_elements: int = config.DEFAULT_MAX_ELEMENTS) -> int:
    """min urk over products of length <= max_len: an upper bound on urk(Gamma)."""
    best = None
    seen = set()
    for _, level in _level_products(family, max_len, max_elements, projective=True):
        for _, _, m in level.values():
            if m in seen:
                continue
            seen.add(m)
            r = ultimate_rank_matrix(m)
            if best is None or r < best:
                best = r
            if best == 0:
                return 0
    return best


def spread_violations(m: TropicalMatrix, b: int) -> List[Tuple[int, int]]:
    """Entries of a finite product breaking the spread bounds for entry bound b.

    Each entry is within 2b of the first entry of its row and of its column,
    hence within 4b of entry (1,1).  A single generator also stays within 2b
    of (1,1) but products do not: [[-1,-1],[1,1]] . [[-1,1],[-1,1]] has
    entries -2 and 2 on the diagonal.
    """
    rows = m.entries
    if any(v is BOTTOM for row in rows for v in row):
        return [(i, j) for i, row in enumerate(rows) for j, _ in enumerate(row)]
    return [(i, j) for i, row in enumerate(rows) for j, v in enumerate(row)
            if abs(v - row[0]) > 2 * b or abs(v - rows[0][j]) > 2 * b
            or abs(v - rows[0][0]) > 4 * b]
