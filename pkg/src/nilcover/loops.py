"""Words in a free basis of the fundamental group of a surface with boundary.

The basis comes from a tree-cotree split rooted at the holes: the spanning
tree contributes nothing, each leftover edge is a free generator, and each
cotree edge is solved for from the face it is the parent edge of, visiting
faces leaf-first so the other edges of that face are already known.
"""

from __future__ import annotations

from typing import Dict, List, Sequence

from .homology import H1Space
from .nilpotent import Word, inverse, reduce_word
from .surface import Surface, SurfaceError, Walk


class FreeBasis:
    def __init__(self, s: Surface, root: int = 0):
        if s.is_closed:
            raise SurfaceError("the fundamental group of a closed surface is not free")
        h = H1Space(s, root=root)
        self.surface = s
        self.h1 = h
        self.rank = h.dim
        words: Dict[int, Word] = {}
        for e in h.tree_edges:
            words[2 * e] = ()
            words[2 * e + 1] = ()
        for j, e in enumerate(h.leftover):
            words[2 * e] = (j + 1,)
            words[2 * e + 1] = (-(j + 1),)
        for g in reversed(h.face_order):
            e = h.parent_edge[g]
            walk = s.faces[g]
            i = next(k for k, d in enumerate(walk) if d >> 1 == e)
            rest: List[int] = []
            for d in walk[i + 1:] + walk[:i]:
                rest.extend(words[d])
            w = reduce_word(inverse(rest))
            words[walk[i]] = w
            words[walk[i] ^ 1] = inverse(w)
        self._words = words
        for f in s.filled_faces():
            if self.word_of_darts(s.faces[f]):
                raise SurfaceError(f"face {f} does not give a trivial word")

    def word_of_darts(self, darts: Sequence[int]) -> Word:
        out: List[int] = []
        for d in darts:
            out.extend(self._words[d])
        return reduce_word(out)

    def word(self, walk: Walk) -> Word:
        if not walk.is_closed:
            raise SurfaceError("only closed walks have words")
        return self.word_of_darts(walk.darts)
