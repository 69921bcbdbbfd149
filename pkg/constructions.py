"""
Matrix and automaton constructions used by the reductions:

  star_extend  -- all-initial-final automaton with one extra state and letter
  hat / tilde  -- liftings that turn a sign question on rho into one on urk
  nfa_to_gamma -- NFA universality as a 3-matrix joint spectral radius
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Sequence, Tuple

import config
from automata import MaxPlusAutomaton, gamma_of
from semigroup_jsr import MatrixFamily
from tropical_core import BOTTOM, DimensionError, TropicalError, TropicalMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton over a 2-letter alphabet.

    Args:
        states: number of states, numbered 0..states-1
        transitions: (p, symbol, q) triples
        initial: initial states
        final: final states
    """
    states: int
    transitions: FrozenSet[Tuple[int, str, int]]
    initial: FrozenSet[int]
    final: FrozenSet[int]
    alphabet: Tuple[str, ...] = field(default=config.NFA_ALPHABET)

    def __post_init__(self):
        if self.states < 1:
            raise TropicalError("an NFA needs at least one state")
        for p, s, q in self.transitions:
            if not (0 <= p < self.states and 0 <= q < self.states):
                raise TropicalError(f"transition ({p}, {s}, {q}) leaves the state range")
            if s not in self.alphabet:
                raise TropicalError(f"transition symbol {s!r} is not in {list(self.alphabet)}")
        for q in self.initial | self.final:
            if not 0 <= q < self.states:
                raise TropicalError(f"state {q} is out of range")

    def successors(self, subset: FrozenSet[int], symbol: str) -> FrozenSet[int]:
        return frozenset(q for p, s, q in self.transitions if s == symbol and p in subset)

    def accepts(self, word: Sequence[str]) -> bool:
        current = frozenset(self.initial)
        for s in word:
            current = self.successors(current, s)
        return bool(current & self.final)

    def shortest_rejected(self) -> Optional[Tuple[str, ...]]:
        """A shortest nonempty rejected word, by breadth-first subset construction."""
        start = frozenset(self.initial)
        seen = set()
        queue = deque()
        for s in self.alphabet:
            subset = self.successors(start, s)
            if subset not in seen:
                seen.add(subset)
                queue.append((subset, (s,)))
        while queue:
            subset, word = queue.popleft()
            if not subset & self.final:
                return word
            for s in self.alphabet:
                nxt = self.successors(subset, s)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, word + (s,)))
        return None

    def accepts_all_nonempty(self) -> bool:
        return self.shortest_rejected() is None


# ── automata ──────────────────────────────────────────────────

def automaton_from_nfa(nfa: Nfa) -> MaxPlusAutomaton:
    """The NFA with every transition weighted 0."""
    n = nfa.states
    mu = {}
    for symbol in nfa.alphabet:
        rows = [[BOTTOM] * n for _ in range(n)]
        for p, s, q in nfa.transitions:
            if s == symbol:
                rows[p][q] = 0
        mu[symbol] = TropicalMatrix.from_rows(rows)
    initial = tuple(0 if q in nfa.initial else BOTTOM for q in range(n))
    final = tuple(0 if q in nfa.final else BOTTOM for q in range(n))
    return MaxPlusAutomaton(tuple(nfa.alphabet), mu, initial, final)


def star_extend(a: MaxPlusAutomaton, star: str = config.STAR_SYMBOL) -> MaxPlusAutomaton:
    """Add a state q and a letter star; every state becomes initial and final.

    Star transitions, all of weight 0: final -> initial, final -> q, q -> q,
    q -> initial.  No other letter touches q.
    """
    if star in a.alphabet:
        raise TropicalError(f"symbol {star!r} is already in the alphabet")
    d = a.dim
    q = d
    mu = {}
    for s in a.alphabet:
        rows = [list(row) + [BOTTOM] for row in a.mu[s].entries]
        rows.append([BOTTOM] * (d + 1))
        mu[s] = TropicalMatrix.from_rows(rows)

    initials = [i for i in range(d) if a.initial[i] is not BOTTOM]
    finals = [f for f in range(d) if a.final[f] is not BOTTOM]
    rows = [[BOTTOM] * (d + 1) for _ in range(d + 1)]
    for f in finals + [q]:
        for i in initials + [q]:
            rows[f][i] = 0
    mu[star] = TropicalMatrix.from_rows(rows)
    return MaxPlusAutomaton(tuple(a.alphabet) + (star,), mu, (0,) * (d + 1), (0,) * (d + 1))


# ── liftings ──────────────────────────────────────────────────

def hat(m: TropicalMatrix) -> TropicalMatrix:
    """diag(M, M, [0]) of size 2d+1."""
    if not m.is_square:
        raise DimensionError(f"hat needs a square matrix, got {m.rows}x{m.cols}")
    d = m.rows
    rows = [[BOTTOM] * (2 * d + 1) for _ in range(2 * d + 1)]
    for i in range(d):
        for j in range(d):
            rows[i][j] = m.entries[i][j]
            rows[d + i][d + j] = m.entries[i][j]
    rows[2 * d][2 * d] = 0
    return TropicalMatrix.from_rows(rows)


def tilde(m: TropicalMatrix) -> TropicalMatrix:
    """M bordered by a row and column of -1 with a 0 corner; M must be over {0, -1}."""
    if not m.is_square:
        raise DimensionError(f"tilde needs a square matrix, got {m.rows}x{m.cols}")
    if any(v is BOTTOM or v not in (0, -1) for v in m.values()):
        raise TropicalError("tilde needs entries in {0, -1}")
    rows = [list(row) + [-1] for row in m.entries]
    rows.append([-1] * m.rows + [0])
    return TropicalMatrix.from_rows(rows)


def hat_family(family: MatrixFamily) -> MatrixFamily:
    return MatrixFamily(tuple(hat(g) for g in family.generators))


def tilde_family(family: MatrixFamily) -> MatrixFamily:
    return MatrixFamily(tuple(tilde(g) for g in family.generators))


# ── NFA universality reduction ────────────────────────────────

def nfa_to_gamma(nfa: Nfa, replace_bottom_by_minus_one: bool = False) -> MatrixFamily:
    """Three matrices whose joint spectral radius is 0 iff the NFA accepts every nonempty word.

    Otherwise the radius is -inf, or strictly negative once -inf entries are
    replaced by -1.
    """
    if len(nfa.alphabet) != 2:
        raise TropicalError(f"the reduction needs a 2-letter alphabet, got {list(nfa.alphabet)}")
    extended = star_extend(automaton_from_nfa(nfa))
    gamma = gamma_of(extended)
    if replace_bottom_by_minus_one:
        gamma = [TropicalMatrix.from_rows([[-1 if v is BOTTOM else v for v in row]
                                           for row in g.entries]) for g in gamma]
    logger.info("NFA-GAMMA: %d matrices of dimension %d", len(gamma), gamma[0].rows)
    return MatrixFamily(tuple(gamma))


def nfa_to_urk_family(nfa: Nfa) -> MatrixFamily:
    """tilde lifting of the {0, -1} family: urk >= 2 iff the NFA is universal."""
    return tilde_family(nfa_to_gamma(nfa, replace_bottom_by_minus_one=True))
