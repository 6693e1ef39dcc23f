"""Linear algebra over F2 with vectors packed into Python ints.

Bit ``j`` of a vector is its ``j``-th coordinate.  Matrices are lists of
row vectors.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple


def parity(x: int) -> int:
    return x.bit_count() & 1


def dot(x: int, y: int) -> int:
    return (x & y).bit_count() & 1


def bits(x: int) -> List[int]:
    """Indices of the set bits of ``x`` in increasing order."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def to_bitstring(x: int, n: int) -> str:
    """Coordinate string, coordinate 0 first."""
    return "".join("1" if (x >> j) & 1 else "0" for j in range(n))


def from_bitstring(s: str) -> int:
    return sum(1 << j for j, ch in enumerate(s) if ch == "1")


class EchelonBasis:
    """Incrementally maintained reduced basis of a subspace.

    Each stored row has a distinct pivot (its lowest set bit) and no other
    row has that bit set, so ``reduce`` is a single pass.
    """

    def __init__(self, vectors: Iterable[int] = ()):
        self.rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: int) -> int:
        for p, row in self.rows.items():
            if (v >> p) & 1:
                v ^= row
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; return False when it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = (v & -v).bit_length() - 1
        for q, row in self.rows.items():
            if (row >> p) & 1:
                self.rows[q] = row ^ v
        self.rows[p] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def basis(self) -> List[int]:
        return [self.rows[p] for p in sorted(self.rows)]

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)


def rank(rows: Sequence[int]) -> int:
    return len(EchelonBasis(rows))


def in_span(v: int, rows: Sequence[int]) -> bool:
    return EchelonBasis(rows).contains(v)


def rref(rows: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Reduced rows (ordered by pivot) and their pivot columns."""
    eb = EchelonBasis(rows)
    return eb.basis(), eb.pivots


def nullspace(rows: Sequence[int], ncols: int) -> List[int]:
    """Basis of ``{x : row . x = 0 for every row}``."""
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = 1 << free
        for row, p in zip(reduced, pivots):
            if (row >> free) & 1:
                x |= 1 << p
        out.append(x)
    return out


def solve(rows: Sequence[int], rhs: Sequence[int]) -> Optional[int]:
    """Some ``x`` with ``dot(rows[i], x) == rhs[i]`` for all i, or None."""
    # Track the right-hand side in a bit above every column in use.
    width = max((r.bit_length() for r in rows), default=0)
    flag = 1 << width
    eb = EchelonBasis()
    for r, b in zip(rows, rhs):
        v = r | (flag if b & 1 else 0)
        v = eb.reduce(v)
        if v == flag:
            return None
        if v:
            eb.add(v)
    x = 0
    for p, row in eb.rows.items():
        if row & flag:
            x |= 1 << p
    return x


def span_elements(basis: Sequence[int]) -> List[int]:
    """All 2^len(basis) elements of a span (small inputs only)."""
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out
