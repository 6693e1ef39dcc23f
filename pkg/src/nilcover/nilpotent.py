"""Magnus expansions of free-group words and small permutation 2-groups."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

DEFAULT_GROUP_CAP = 1 << 16

Word = Tuple[int, ...]  # letters +-(i+1) for generator i


class TrivialWordError(ValueError):
    pass


class GroupCapError(ValueError):
    pass


# ---------------------------------------------------------------- words


def reduce_word(word: Iterable[int]) -> Word:
    out: List[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return reduce_word(inverse(u) + inverse(v) + tuple(u) + tuple(v))


def parse_word(text: str) -> Word:
    """Letters a, b, c, ... with upper case for inverses, or x1, x2^-1 tokens."""
    text = text.strip()
    if not text or text in {"1", "e"}:
        return ()
    if re.fullmatch(r"[A-Za-z]+", text.replace(" ", "")):
        out = []
        for ch in text.replace(" ", ""):
            i = ord(ch.lower()) - ord("a") + 1
            out.append(i if ch.islower() else -i)
        return tuple(out)
    out = []
    for tok in re.findall(r"x(\d+)(\^-1)?", text):
        i = int(tok[0])
        out.append(-i if tok[1] else i)
    return tuple(out)


def format_word(word: Sequence[int]) -> str:
    return "".join(chr(ord("a") + abs(x) - 1) if x > 0 else chr(ord("A") + abs(x) - 1) for x in word) or "1"


# ---------------------------------------------------------------- Magnus


@dataclass(frozen=True)
class TruncatedSeries:
    """Noncommuting power series in X_1..X_r, truncated above ``depth``."""

    rank: int
    depth: int
    terms: Tuple[Tuple[Word, int], ...]

    @classmethod
    def from_dict(cls, rank: int, depth: int, d: Dict[Word, int]) -> "TruncatedSeries":
        return cls(rank, depth, tuple(sorted((w, c) for w, c in d.items() if c and len(w) <= depth)))

    def as_dict(self) -> Dict[Word, int]:
        return dict(self.terms)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return TruncatedSeries.from_dict(self.rank, self.depth, _mul(self.as_dict(), other.as_dict(), self.depth))

    def lowest_degree(self) -> Optional[int]:
        degs = [len(w) for w, c in self.terms if w and c]
        return min(degs) if degs else None

    def digest(self) -> str:
        parts = []
        for w, c in sorted(self.terms, key=lambda t: (len(t[0]), t[0])):
            mono = "".join(f"X{i}" for i in w) or "1"
            parts.append(f"{c:+d}*{mono}")
        return " ".join(parts)


def _mul(a: Dict[Word, int], b: Dict[Word, int], depth: int) -> Dict[Word, int]:
    out: Dict[Word, int] = {}
    for wa, ca in a.items():
        room = depth - len(wa)
        for wb, cb in b.items():
            if len(wb) <= room:
                w = wa + wb
                out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


def _letter_series(x: int, depth: int) -> Dict[Word, int]:
    i = abs(x)
    if x > 0:
        return {(): 1, (i,): 1} if depth >= 1 else {(): 1}
    return {(i,) * n: (-1) ** n for n in range(depth + 1)}


def magnus(word: Sequence[int], rank: int, depth: int) -> TruncatedSeries:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if any(abs(x) > rank or x == 0 for x in word):
        raise ValueError("word uses a letter outside the rank")
    acc: Dict[Word, int] = {(): 1}
    for x in reduce_word(word):
        acc = _mul(acc, _letter_series(x, depth), depth)
    return TruncatedSeries.from_dict(rank, depth, acc)


@dataclass(frozen=True)
class LcsDepth:
    value: int
    exact: bool

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"


def lcs_degree(word: Sequence[int], rank: int, depth: int) -> LcsDepth:
    """Largest d with the word in the d-th lower central term, up to ``depth``."""
    w = reduce_word(word)
    if not w:
        raise TrivialWordError("the trivial word lies in every term of the series")
    low = magnus(w, rank, depth).lowest_degree()
    if low is None:
        return LcsDepth(depth + 1, False)
    return LcsDepth(low, True)


def left_normed(letters: Sequence[Word]) -> Word:
    """[[[x1, x2], x3], ...]."""
    acc = tuple(letters[0])
    for x in letters[1:]:
        acc = commutator(acc, x)
    return acc


# ---------------------------------------------------------------- permutation groups

Perm = Tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """Apply p first, then q."""
    return tuple(q[i] for i in p)


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_commutator(g: Perm, h: Perm) -> Perm:
    return compose(compose(compose(perm_inverse(g), perm_inverse(h)), g), h)


def _closure(gens: Sequence[Perm], degree: int, cap: int) -> FrozenSet[Perm]:
    ident = tuple(range(degree))
    seen = {ident}
    dq = deque([ident])
    while dq:
        x = dq.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupCapError(f"group order exceeds the cap {cap}")
                dq.append(y)
    return frozenset(seen)


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: Tuple[Perm, ...]
    elements: FrozenSet[Perm]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.degree))

    def is_trivial(self) -> bool:
        return len(self.elements) == 1


def group_closure(gens: Sequence[Perm], degree: Optional[int] = None, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    gens = tuple(tuple(g) for g in gens)
    if degree is None:
        degree = len(gens[0])
    ident = tuple(range(degree))
    useful = tuple(g for g in gens if g != ident)
    return PermGroup(degree, useful, _closure(useful, degree, cap))


def normal_closure(g: PermGroup, subset: Iterable[Perm], cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    ident = g.identity
    gens = [x for x in dict.fromkeys(subset) if x != ident]
    elems = _closure(gens, g.degree, cap)
    changed = True
    while changed:
        changed = False
        for s in list(gens):
            for x in g.generators:
                c = compose(compose(perm_inverse(x), s), x)
                if c not in elems:
                    gens.append(c)
                    elems = _closure(gens, g.degree, cap)
                    changed = True
    return PermGroup(g.degree, tuple(gens), elems)


def lower_central_series(g: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> List[PermGroup]:
    """gamma_1 = G, gamma_{i+1} = [G, gamma_i], down to a repeat or the trivial group."""
    series = [g]
    cur = g
    while not cur.is_trivial():
        comms = sorted({perm_commutator(y, x) for y in cur.generators for x in g.generators})
        nxt = normal_closure(g, comms, cap)
        if nxt.order == cur.order:
            break
        series.append(nxt)
        cur = nxt
    return series


def nilpotency_class(g: PermGroup, cap: int = DEFAULT_GROUP_CAP) -> Optional[int]:
    series = lower_central_series(g, cap)
    if not series[-1].is_trivial():
        return None
    return len(series) - 1


def brute_lower_central_series(g: PermGroup) -> List[FrozenSet[Perm]]:
    """Same series from all commutators of all elements; for cross-checks."""
    series = [g.elements]
    cur = g.elements
    while len(cur) > 1:
        comms = {perm_commutator(a, b) for a in g.elements for b in cur}
        nxt = _closure(sorted(comms), g.degree, DEFAULT_GROUP_CAP)
        if len(nxt) == len(cur):
            break
        series.append(nxt)
        cur = nxt
    return series


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class CoreReport:
    k: int
    order: Optional[int]
    ell: Optional[int]
    nil_class: Optional[int]
    checks: Tuple[Tuple[str, bool], ...]
    note: str = ""

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def normal_core_report(perms: Sequence[Perm], k: int, cap: int = DEFAULT_GROUP_CAP) -> CoreReport:
    """Order 2^ell of the fiber action image, ell <= 2^k - 1, class <= ell - 1."""
    try:
        g = group_closure(perms, 1 << k, cap)
    except GroupCapError:
        return CoreReport(k, None, None, None, (("ell<=2^k-1 (analytic)", True),),
                          note=f"image order above {cap}; only the bound ell <= {2**k - 1} applies")
    order = g.order
    checks = [("order is a power of 2", is_power_of_two(order))]
    ell = order.bit_length() - 1
    checks.append(("ell<=2^k-1", ell <= 2**k - 1))
    cls = nilpotency_class(g, cap)
    checks.append(("nilpotent", cls is not None))
    if cls is not None and ell >= 2:
        checks.append(("class<=ell-1", cls <= ell - 1))
    return CoreReport(k, order, ell, cls, tuple(checks))
