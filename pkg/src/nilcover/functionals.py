"""Choosing linear functionals on F2^n that hit many targets.

Two selection problems: make ``f(v) = 1`` for at least half of a list of
nonzero vectors, and make ``f`` nonzero on both halves of at least 3/7 of a
list of splittings ``V + W = F2^n``.  Small dimensions are scanned
exhaustively; larger ones are sampled with a seeded generator, falling back
to the method of conditional expectations if sampling is unlucky.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import f2

DEFAULT_EXHAUSTIVE_CAP = 12


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchResult:
    functional: int
    count: int
    threshold: int
    mode: str

    @property
    def ok(self) -> bool:
        return self.count >= self.threshold


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def zeta(a: int, n: int) -> Fraction:
    """Fraction of nonzero functionals on F2^n nonzero on both summands of
    a splitting with summand dimensions ``a`` and ``n - a``."""
    if n < 3 or not 1 <= a <= n - 1:
        raise SearchError(f"zeta({a}, {n}) is outside 1 <= a <= n-1, n >= 3")
    return Fraction((2**a - 1) * (2 ** (n - a) - 1), 2**n - 1)


# ------------------------------------------------------------- half of the vectors


def hit_count(f: int, vectors: Sequence[int]) -> int:
    return sum(f2.dot(f, v) for v in vectors)


def _check_vectors(vectors: Sequence[int]) -> None:
    if any(v == 0 for v in vectors):
        raise SearchError("zero vector among the targets")


def expectation_audit_half(vectors: Sequence[int], dim: int, cap: int = 24) -> Fraction:
    """Exact average hit count over all 2^dim functionals."""
    if dim > cap:
        raise SearchError(f"dimension {dim} is above the audit cap {cap}")
    if not vectors:
        return Fraction(0)
    total = sum(hit_count(f, vectors) for f in range(1 << dim))
    return Fraction(total, 1 << dim)


def _half_by_conditioning(vectors: Sequence[int], dim: int) -> int:
    # A vector still touching a free coordinate is hit with probability 1/2.
    f = 0
    for j in range(dim):
        free = ((1 << dim) - 1) >> (j + 1) << (j + 1)
        best = None
        for bit in (0, 1):
            g = f | (bit << j)
            score = Fraction(0)
            for v in vectors:
                score += Fraction(1, 2) if v & free else f2.dot(g, v)
            if best is None or score > best[0]:
                best = (score, g)
        f = best[1]
    return f


def find_half_functional(
    vectors: Sequence[int],
    dim: int,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    rng: Optional[random.Random] = None,
) -> SearchResult:
    _check_vectors(vectors)
    m = len(vectors)
    need = ceil_div(m, 2)
    if dim <= cap:
        best_f, best_c = 0, -1
        for f in range(1 << dim):
            c = hit_count(f, vectors)
            if c > best_c:
                best_f, best_c = f, c
        res = SearchResult(best_f, best_c, need, "exhaustive")
    else:
        rng = rng or random.Random(0)
        res = None
        for _ in range(64 * dim):
            f = rng.getrandbits(dim)
            c = hit_count(f, vectors)
            if c >= need:
                res = SearchResult(f, c, need, "random")
                break
        if res is None:
            f = _half_by_conditioning(vectors, dim)
            res = SearchResult(f, hit_count(f, vectors), need, "conditional")
    if not res.ok:
        raise SearchError("no functional hits half of the vectors")
    return res


# ------------------------------------------------------------- splittings


@dataclass(frozen=True)
class SplittingFamily:
    n: int
    pairs: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]

    def __post_init__(self):
        if self.n < 3:
            raise SearchError("splittings need ambient dimension at least 3")
        for V, W in self.pairs:
            rv, rw = f2.rank(V), f2.rank(W)
            if rv == 0 or rw == 0:
                raise SearchError("degenerate splitting with a zero summand")
            if rv + rw != self.n or f2.rank(list(V) + list(W)) != self.n:
                raise SearchError("summands do not form a direct sum decomposition")

    def __len__(self) -> int:
        return len(self.pairs)


def splits(f: int, V: Sequence[int], W: Sequence[int]) -> bool:
    return any(f2.dot(f, v) for v in V) and any(f2.dot(f, w) for w in W)


def split_count(f: int, fam: SplittingFamily) -> int:
    return sum(1 for V, W in fam.pairs if splits(f, V, W))


def splitting_probability(V: Sequence[int], W: Sequence[int], n: int) -> Fraction:
    """Exact fraction of nonzero functionals that are nonzero on V and on W."""
    good = sum(1 for f in range(1, 1 << n) if splits(f, V, W))
    return Fraction(good, (1 << n) - 1)


def _prob_vanish(basis: Sequence[int], fixed: int, free_mask: int) -> Fraction:
    rows = [v & free_mask for v in basis]
    rhs = [f2.dot(fixed, v) for v in basis]
    if f2.solve(rows, rhs) is None:
        return Fraction(0)
    return Fraction(1, 1 << f2.rank(rows))


def _split_by_conditioning(fam: SplittingFamily) -> int:
    n = fam.n
    f = 0
    full = (1 << n) - 1
    for j in range(n):
        free = full >> (j + 1) << (j + 1)
        best = None
        for bit in (0, 1):
            g = f | (bit << j)
            nfree = n - j - 1
            p_zero = Fraction(1, 1 << nfree) if g == 0 else Fraction(0)
            if p_zero == 1:
                continue
            score = Fraction(0)
            for V, W in fam.pairs:
                pv = _prob_vanish(V, g, free)
                pw = _prob_vanish(W, g, free)
                score += 1 - pv - pw + p_zero
            score /= 1 - p_zero
            if best is None or score > best[0]:
                best = (score, g)
        f = best[1]
    return f


def find_splitting_functional(
    fam: SplittingFamily,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    rng: Optional[random.Random] = None,
) -> SearchResult:
    m = len(fam)
    need = ceil_div(3 * m, 7)
    n = fam.n
    if n <= cap:
        best_f, best_c = 1, -1
        for f in range(1, 1 << n):
            c = split_count(f, fam)
            if c > best_c:
                best_f, best_c = f, c
        res = SearchResult(best_f, best_c, need, "exhaustive")
    else:
        rng = rng or random.Random(0)
        res = None
        for _ in range(64 * n):
            f = rng.getrandbits(n)
            if f == 0:
                continue
            c = split_count(f, fam)
            if c >= need:
                res = SearchResult(f, c, need, "random")
                break
        if res is None:
            f = _split_by_conditioning(fam)
            res = SearchResult(f, split_count(f, fam), need, "conditional")
    if not res.ok:
        raise SearchError("no functional splits 3/7 of the family")
    return res


def random_splitting(n: int, rng: random.Random) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """A random direct sum decomposition F2^n = V + W, both nonzero."""
    while True:
        basis = [rng.getrandbits(n) for _ in range(n)]
        if f2.rank(basis) == n:
            break
    a = rng.randint(1, n - 1)
    return tuple(basis[:a]), tuple(basis[a:])


def random_nonzero_vectors(n: int, m: int, rng: random.Random) -> List[int]:
    out = []
    while len(out) < m:
        v = rng.getrandbits(n)
        if v:
            out.append(v)
    return out
