"""
Tropical core: exact arithmetic in Z_max = (Z ∪ {-inf}, max, +).

Values are plain Python ints (arbitrary precision) or the BOTTOM singleton.
BOTTOM orders below every integer and absorbs addition, so `max` and `+`
work on mixed values without special cases at call sites.  Matrices are
immutable and hashable; every operation here is a pure function.
"""

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union


class TropicalError(ValueError):
    """Root of every domain error raised by this package."""


class DimensionError(TropicalError):
    pass


class BudgetExceeded(TropicalError):
    """A search hit its element/length budget before finishing."""


@functools.total_ordering
class Bottom:
    """The tropical zero, -inf.  Use the module-level BOTTOM instance."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __reduce__(self):
        return (Bottom, ())

    def __hash__(self):
        return hash("tropical-bottom")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __truediv__(self, other):
        return self


BOTTOM = Bottom()

TropicalValue = Union[int, Bottom]
Rational = Union[Fraction, Bottom]


# ── scalar helpers ────────────────────────────────────────────

def tadd(x: TropicalValue, y: TropicalValue) -> TropicalValue:
    """Tropical product of two scalars (integer addition, BOTTOM absorbing)."""
    if x is BOTTOM or y is BOTTOM:
        return BOTTOM
    return x + y


def tmax(values: Iterable[TropicalValue]) -> TropicalValue:
    """Tropical sum of any number of scalars; BOTTOM for an empty input."""
    best = BOTTOM
    for v in values:
        if v is not BOTTOM and (best is BOTTOM or v > best):
            best = v
    return best


def ratio(x: TropicalValue, n: int) -> Rational:
    """x / n as an exact rational, BOTTOM staying BOTTOM."""
    if x is BOTTOM:
        return BOTTOM
    return Fraction(x, n)


def rational_str(x) -> str:
    """`num/den`, a bare integer when den is 1, `-inf` for BOTTOM."""
    if x is BOTTOM:
        return "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ── matrices ──────────────────────────────────────────────────

@dataclass(frozen=True)
class TropicalMatrix:
    """Rectangular matrix over Z_max.

    Args:
        rows: number of rows (>= 1)
        cols: number of columns (>= 1)
        entries: tuple of row tuples, each holding ints or BOTTOM
    """
    rows: int
    cols: int
    entries: Tuple[Tuple[TropicalValue, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError(f"entries do not form a {self.rows}x{self.cols} array")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[TropicalValue]]) -> "TropicalMatrix":
        entries = tuple(tuple(BOTTOM if v is None else v for v in row) for row in rows)
        if not entries:
            raise DimensionError("a matrix needs at least one row")
        return cls(len(entries), len(entries[0]), entries)

    @classmethod
    def filled(cls, rows: int, cols: int, value: TropicalValue = BOTTOM) -> "TropicalMatrix":
        return cls(rows, cols, tuple((value,) * cols for _ in range(rows)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def __matmul__(self, other):
        return tmul(self, other)

    def __iter__(self):
        return iter(self.entries)

    def values(self):
        for row in self.entries:
            yield from row

    def to_rows(self):
        return [list(row) for row in self.entries]

    def __str__(self):
        return "\n".join(" ".join(repr(v) if v is BOTTOM else str(v) for v in row)
                         for row in self.entries)


def _require_square(m: TropicalMatrix, what: str) -> None:
    if not m.is_square:
        raise DimensionError(f"{what} needs a square matrix, got {m.rows}x{m.cols}")


def tmul(a: TropicalMatrix, b: TropicalMatrix) -> TropicalMatrix:
    """(AB)_ij = max_k (A_ik + B_kj)."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    # sparse rows of B: products are dominated by BOTTOM entries in practice
    b_rows = [[(j, y) for j, y in enumerate(row) if y is not BOTTOM] for row in b.entries]
    out = []
    for row in a.entries:
        acc = [BOTTOM] * b.cols
        for k, x in enumerate(row):
            if x is BOTTOM:
                continue
            for j, y in b_rows[k]:
                s = x + y
                cur = acc[j]
                if cur is BOTTOM or s > cur:
                    acc[j] = s
        out.append(tuple(acc))
    return TropicalMatrix(a.rows, b.cols, tuple(out))


def vec_mat(v: Sequence[TropicalValue], m: TropicalMatrix) -> Tuple[TropicalValue, ...]:
    """Row vector times matrix."""
    if len(v) != m.rows:
        raise DimensionError(f"vector of length {len(v)} against {m.rows}x{m.cols} matrix")
    acc = [BOTTOM] * m.cols
    for k, x in enumerate(v):
        if x is BOTTOM:
            continue
        for j, y in enumerate(m.entries[k]):
            if y is BOTTOM:
                continue
            s = x + y
            cur = acc[j]
            if cur is BOTTOM or s > cur:
                acc[j] = s
    return tuple(acc)


def identity(d: int) -> TropicalMatrix:
    if d < 1:
        raise DimensionError(f"identity needs d >= 1, got {d}")
    return TropicalMatrix(d, d, tuple(tuple(0 if i == j else BOTTOM for j in range(d))
                                      for i in range(d)))


def norm_inf(m: TropicalMatrix) -> TropicalValue:
    """Largest entry (not a norm)."""
    return tmax(m.values())


def scalar_offset(k: int, m: TropicalMatrix) -> TropicalMatrix:
    """k ⊙ M: add k to every finite entry."""
    if k == 0:
        return m
    return TropicalMatrix(m.rows, m.cols, tuple(tuple(BOTTOM if v is BOTTOM else v + k for v in row)
                                                for row in m.entries))


def power(m: TropicalMatrix, k: int) -> TropicalMatrix:
    """M^k by binary exponentiation."""
    _require_square(m, "power")
    if k < 1:
        raise TropicalError(f"power needs k >= 1, got {k}")
    result = None
    base = m
    while k:
        if k & 1:
            result = base if result is None else tmul(result, base)
        k >>= 1
        if k:
            base = tmul(base, base)
    return result


def is_finite(m: TropicalMatrix) -> bool:
    return all(v is not BOTTOM for v in m.values())


def max_abs_entry(m: TropicalMatrix) -> int:
    """Largest |finite entry|, 0 for an all-BOTTOM matrix."""
    return max((abs(v) for v in m.values() if v is not BOTTOM), default=0)


def normalize(m: TropicalMatrix) -> Tuple[TropicalValue, TropicalMatrix]:
    """Split M into (c, (-c) ⊙ M) with c the first finite entry in row-major order.

    For finite matrices the anchor is entry (1,1).  An all-BOTTOM matrix is
    returned unchanged with c = BOTTOM.
    """
    for v in m.values():
        if v is not BOTTOM:
            return v, scalar_offset(-v, m)
    return BOTTOM, m
