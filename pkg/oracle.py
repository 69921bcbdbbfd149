"""
Brute-force reference implementations.

Everything here enumerates from scratch (no memoisation, no pruning, no
projective tricks) so the production searches in spectral / semigroup_jsr /
automata can be cross-checked against something that does not share their
shortcuts.  Also home of the seeded random generators used by the tests and
the `oracle` CLI namespace.
"""

import itertools
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

import config
from automata import MaxPlusAutomaton, Word
from semigroup_jsr import MatrixFamily
from spectral import ultimate_rank_matrix
from tropical_core import (BOTTOM, BudgetExceeded, DimensionError, Rational, TropicalMatrix,
                           TropicalValue, norm_inf, normalize, ratio, tmax, tmul)

logger = logging.getLogger(__name__)


def _check_budget(count: int, budget: int, what: str) -> None:
    if count > budget:
        raise BudgetExceeded(f"{what}: {count} candidates exceed the budget of {budget}")


def _product_count(generators: int, max_len: int) -> int:
    return sum(generators ** k for k in range(1, max_len + 1))


def _products(family: MatrixFamily, length: int):
    """(word, product) for every word of exactly `length` generators."""
    for word in itertools.product(range(len(family)), repeat=length):
        m = family.generators[word[0]]
        for i in word[1:]:
            m = tmul(m, family.generators[i])
        yield word, m


# ── spectral radius ───────────────────────────────────────────

def brute_rho(m: TropicalMatrix) -> Rational:
    """Maximum mean over the elementary cycles of G(M)."""
    if not m.is_square:
        raise DimensionError(f"brute_rho needs a square matrix, got {m.rows}x{m.cols}")
    if m.rows > config.BRUTE_RHO_MAX_DIM:
        raise BudgetExceeded(f"brute_rho enumerates cycles only up to d = {config.BRUTE_RHO_MAX_DIM}")
    g = nx.DiGraph()
    g.add_nodes_from(range(m.rows))
    g.add_edges_from((i, j) for i in range(m.rows) for j in range(m.rows)
                     if m.entries[i][j] is not BOTTOM)
    best = BOTTOM
    for cycle in nx.simple_cycles(g):
        total = sum(m.entries[u][cycle[(k + 1) % len(cycle)]] for k, u in enumerate(cycle))
        mean = Fraction(total, len(cycle))
        if best is BOTTOM or mean > best:
            best = mean
    return best


# ── joint spectral radius ─────────────────────────────────────

def brute_jsr_trunc(family: MatrixFamily, max_len: int,
                    budget: int = config.BRUTE_BUDGET
                    ) -> Tuple[Rational, List[Tuple[int, Rational, Rational]]]:
    """(upper, per_length) over every product of length <= max_len.

    per_length holds (length, min ||W|| / length, min rho(W) / length); both
    are upper bounds on rho(Gamma) and upper is the smallest of them.
    """
    _check_budget(_product_count(len(family), max_len), budget, "brute_jsr_trunc")
    per_length = []
    upper = None
    for length in range(1, max_len + 1):
        norm_min = rho_min = None
        for _, m in _products(family, length):
            n = ratio(norm_inf(m), length)
            r = brute_rho(m) / length
            norm_min = n if norm_min is None else min(norm_min, n)
            rho_min = r if rho_min is None else min(rho_min, r)
        per_length.append((length, norm_min, rho_min))
        for v in (norm_min, rho_min):
            if upper is None or v < upper:
                upper = v
    return upper, per_length


def brute_urk_set(family: MatrixFamily, max_len: int, budget: int = config.BRUTE_BUDGET) -> int:
    """min urk over every product of length <= max_len."""
    _check_budget(_product_count(len(family), max_len), budget, "brute_urk_set")
    return min(ultimate_rank_matrix(m)
               for length in range(1, max_len + 1)
               for _, m in _products(family, length))


def brute_closure(family: MatrixFamily, max_len: int,
                  budget: int = config.BRUTE_BUDGET) -> Set[TropicalMatrix]:
    """Normalized products of length <= max_len."""
    _check_budget(_product_count(len(family), max_len), budget, "brute_closure")
    return {normalize(m)[1]
            for length in range(1, max_len + 1)
            for _, m in _products(family, length)}


# ── automata ──────────────────────────────────────────────────

def _value(a: MaxPlusAutomaton, word: Word) -> TropicalValue:
    """I . mu(w) . F as explicit matrix products."""
    row = TropicalMatrix.from_rows([a.initial])
    for s in word:
        row = tmul(row, a.mu[s])
    return tmax(x for x, f in zip(row.entries[0], a.final) if f is not BOTTOM)


def brute_min_word(a: MaxPlusAutomaton, max_len: int, bottom_negative: bool = False,
                   budget: int = config.BRUTE_BUDGET) -> Tuple[Word, TropicalValue]:
    """Minimiser of f_A over nonempty words of length <= max_len.

    Ties go to the shortest, then lexicographically first, word.  -inf ranks
    below every integer when bottom_negative is set and above all of them
    otherwise, matching find_negative_word's notion of a negative value.
    """
    _check_budget(_product_count(len(a.alphabet), max_len), budget, "brute_min_word")

    def rank(v):
        if v is BOTTOM:
            return (0, 0) if bottom_negative else (2, 0)
        return (1, v)

    best: Optional[Tuple[Word, TropicalValue]] = None
    for length in range(1, max_len + 1):
        for word in itertools.product(a.alphabet, repeat=length):
            v = _value(a, word)
            if best is None or rank(v) < rank(best[1]):
                best = (word, v)
    return best


# ── random corpora ────────────────────────────────────────────

def make_rng(seed: int = config.DEFAULT_SEED) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_matrix(rng: np.random.Generator, d: int, low: int, high: int,
                  bottom_prob: float = 0.0) -> TropicalMatrix:
    """d x d matrix with entries uniform in [low, high], each -inf with probability bottom_prob."""
    values = rng.integers(low, high + 1, size=(d, d))
    holes = rng.random((d, d)) < bottom_prob
    return TropicalMatrix.from_rows([[BOTTOM if holes[i, j] else int(values[i, j]) for j in range(d)]
                                     for i in range(d)])


def random_family(rng: np.random.Generator, d: int, size: int, b: int,
                  bottom_prob: float = 0.0) -> MatrixFamily:
    return MatrixFamily(tuple(random_matrix(rng, d, -b, b, bottom_prob) for _ in range(size)))


def random_automaton(rng: np.random.Generator, alphabet: Sequence[str], d: int, low: int, high: int,
                     bottom_prob: float = 0.5) -> MaxPlusAutomaton:
    """Random weights; state 0 is always initial and the last state always final."""
    mu = {s: random_matrix(rng, d, low, high, bottom_prob) for s in alphabet}
    initial = tuple(0 if i == 0 or rng.random() < 0.5 else BOTTOM for i in range(d))
    final = tuple(0 if i == d - 1 or rng.random() < 0.5 else BOTTOM for i in range(d))
    return MaxPlusAutomaton(tuple(alphabet), mu, initial, final)


def random_word(rng: np.random.Generator, alphabet: Sequence[str], length: int) -> Word:
    return tuple(alphabet[int(i)] for i in rng.integers(0, len(alphabet), size=length))
