"""
Max-plus automata as linear presentations (I, mu, F).

f_A(w) = I . mu(w_1) ... mu(w_n) . F, evaluated by propagating a row vector
left to right.  Bounded searches enumerate words in length-lexicographic
order over the automaton's declared alphabet, so results are deterministic.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from tropical_core import (BOTTOM, DimensionError, TropicalError, TropicalMatrix, TropicalValue,
                           norm_inf, tmax, tmul)

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
Vector = Tuple[TropicalValue, ...]


class UnknownSymbolError(TropicalError):
    pass


class EmptyWordError(TropicalError):
    pass


class AlphabetMismatch(TropicalError):
    pass


@dataclass(frozen=True)
class MaxPlusAutomaton:
    """Linear presentation of a max-plus automaton.

    Args:
        alphabet: ordered, distinct symbols; the order drives every enumeration
        mu: one d x d matrix per symbol
        initial: length-d vector over {0, BOTTOM}
        final: length-d vector over {0, BOTTOM}
    """
    alphabet: Tuple[str, ...]
    mu: Mapping[str, TropicalMatrix]
    initial: Vector
    final: Vector

    def __post_init__(self):
        if not self.alphabet:
            raise TropicalError("an automaton needs a nonempty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise TropicalError(f"alphabet symbols must be distinct: {list(self.alphabet)}")
        if set(self.mu) != set(self.alphabet):
            raise TropicalError("mu must map exactly the alphabet symbols")
        d = len(self.initial)
        for symbol, m in self.mu.items():
            if m.rows != d or m.cols != d:
                raise DimensionError(f"mu({symbol}) is {m.rows}x{m.cols}, expected {d}x{d}")
        if len(self.final) != d:
            raise DimensionError(f"final vector has length {len(self.final)}, expected {d}")
        for name, vec in (("initial", self.initial), ("final", self.final)):
            if any(v is not BOTTOM and v != 0 for v in vec):
                raise TropicalError(f"{name} vector entries must be 0 or -inf")

    @classmethod
    def from_gamma(cls, gamma: Sequence[TropicalMatrix],
                   alphabet: Optional[Sequence[str]] = None) -> "MaxPlusAutomaton":
        """All-initial-final automaton whose letters are the given matrices."""
        if not gamma:
            raise TropicalError("a family needs at least one matrix")
        if alphabet is None:
            alphabet = [f"g{i}" for i in range(len(gamma))]
        d = gamma[0].rows
        return cls(tuple(alphabet), dict(zip(alphabet, gamma)), (0,) * d, (0,) * d)

    @property
    def dim(self) -> int:
        return len(self.initial)

    @cached_property
    def _sparse(self) -> Dict[str, List[List[Tuple[int, int]]]]:
        return {s: [[(j, w) for j, w in enumerate(row) if w is not BOTTOM] for row in m.entries]
                for s, m in self.mu.items()}

    # ── propagation ───────────────────────────────────────────

    def step(self, v: Vector, symbol: str) -> Vector:
        """v . mu(symbol)."""
        rows = self._sparse.get(symbol)
        if rows is None:
            raise UnknownSymbolError(f"symbol {symbol!r} is not in the alphabet {list(self.alphabet)}")
        acc = [BOTTOM] * self.dim
        for k, x in enumerate(v):
            if x is BOTTOM:
                continue
            for j, w in rows[k]:
                s = x + w
                if acc[j] is BOTTOM or s > acc[j]:
                    acc[j] = s
        return tuple(acc)

    def output(self, v: Vector) -> TropicalValue:
        """v . F."""
        return tmax(x for x, f in zip(v, self.final) if f is not BOTTOM)

    def check_word(self, w: Sequence[str]) -> Word:
        w = tuple(w)
        if not w:
            raise EmptyWordError("words must be nonempty")
        for s in w:
            if s not in self.mu:
                raise UnknownSymbolError(f"symbol {s!r} is not in the alphabet {list(self.alphabet)}")
        return w


# ── words ─────────────────────────────────────────────────────

def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    """Split a word given on the command line.

    Whitespace-separated text is split on whitespace; otherwise the text is
    tokenised greedily by the longest matching symbol.
    """
    text = text.strip()
    if any(ch.isspace() for ch in text):
        return tuple(text.split())
    symbols = sorted(alphabet, key=len, reverse=True)
    out = []
    pos = 0
    while pos < len(text):
        for s in symbols:
            if text.startswith(s, pos):
                out.append(s)
                pos += len(s)
                break
        else:
            raise UnknownSymbolError(f"cannot read a symbol at {text[pos:]!r}")
    return tuple(out)


def word_str(w: Sequence[str]) -> str:
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return " ".join(w)


def words_of_length(alphabet: Sequence[str], length: int) -> Iterator[Word]:
    """All words of exactly `length` symbols in lexicographic order."""
    if length == 0:
        yield ()
        return
    for prefix in words_of_length(alphabet, length - 1):
        for s in alphabet:
            yield prefix + (s,)


def iter_values(a: MaxPlusAutomaton, max_len: int) -> Iterator[Tuple[Word, TropicalValue]]:
    """(w, f_A(w)) for every nonempty word up to max_len, length-lexicographic.

    Prefix vectors are shared through a depth-first walk per length.
    """
    def walk(prefix, v, remaining):
        if remaining == 0:
            yield prefix, a.output(v)
            return
        for s in a.alphabet:
            yield from walk(prefix + (s,), a.step(v, s), remaining - 1)

    for length in range(1, max_len + 1):
        yield from walk((), a.initial, length)


# ── operations ────────────────────────────────────────────────

def evaluate(a: MaxPlusAutomaton, w: Sequence[str]) -> TropicalValue:
    v = a.initial
    for s in a.check_word(w):
        v = a.step(v, s)
    return a.output(v)


def mu_of_word(a: MaxPlusAutomaton, w: Sequence[str]) -> TropicalMatrix:
    w = a.check_word(w)
    m = a.mu[w[0]]
    for s in w[1:]:
        m = tmul(m, a.mu[s])
    return m


def gamma_of(a: MaxPlusAutomaton) -> List[TropicalMatrix]:
    return [a.mu[s] for s in a.alphabet]


def is_all_initial_final(a: MaxPlusAutomaton) -> bool:
    return all(v == 0 for v in a.initial) and all(v == 0 for v in a.final)


def is_negative(value: TropicalValue, bottom_negative: bool = False) -> bool:
    if value is BOTTOM:
        return bottom_negative
    return value < 0


def find_negative_word(a: MaxPlusAutomaton, max_len: int,
                       bottom_negative: bool = False) -> Optional[Tuple[Word, TropicalValue]]:
    """Shortest, then lexicographically first, word with f_A(w) < 0.

    A None result only says no witness exists up to max_len.
    """
    for w, value in iter_values(a, max_len):
        if is_negative(value, bottom_negative):
            logger.info("NEGATIVE: %s -> %s", word_str(w), value)
            return w, value
    return None


def compare_bounded(a: MaxPlusAutomaton, b: MaxPlusAutomaton,
                    max_len: int) -> Optional[Tuple[Word, TropicalValue, TropicalValue]]:
    """First word (length-lexicographic) with f_A(w) > f_B(w), if any up to max_len."""
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetMismatch(f"alphabets differ: {list(a.alphabet)} vs {list(b.alphabet)}")

    def walk(prefix, va, vb, remaining):
        if remaining == 0:
            yield prefix, a.output(va), b.output(vb)
            return
        for s in a.alphabet:
            yield from walk(prefix + (s,), a.step(va, s), b.step(vb, s), remaining - 1)

    for length in range(1, max_len + 1):
        for w, fa, fb in walk((), a.initial, b.initial, length):
            if fa > fb:
                return w, fa, fb
    return None


def norm_of_word(a: MaxPlusAutomaton, w: Sequence[str]) -> TropicalValue:
    """||mu(w)||; equals f_A(w) when every state is initial and final."""
    return norm_inf(mu_of_word(a, w))


def weights(a: MaxPlusAutomaton) -> set:
    """The finite transition weights of the automaton."""
    return {v for m in a.mu.values() for v in m.values() if v is not BOTTOM}
