"""Mod-2 homology and cohomology of rotation-system surfaces.

Coordinates come from a tree-cotree decomposition: a breadth-first spanning
tree of the vertices, a breadth-first spanning tree of the filled faces in
the dual graph (rooted at the boundary when there is one), and the leftover
edges, whose fundamental cycles form a basis of H1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from . import f2
from .surface import Surface, SurfaceError, Walk

ROOT = -1


class HomologyError(ValueError):
    pass


class H1Space:
    def __init__(self, s: Surface, root: int = 0):
        self.surface = s
        self.root = root
        n = s.num_vertices
        parent = [-1] * n
        seen = [False] * n
        seen[root] = True
        order = [root]
        tree = set()
        dq = deque([root])
        while dq:
            v = dq.popleft()
            for d in s.rotations[v]:
                u = s.head(d)
                if not seen[u]:
                    seen[u] = True
                    parent[u] = d
                    tree.add(d >> 1)
                    order.append(u)
                    dq.append(u)
        self.parent_dart = parent
        self.tree_edges = frozenset(tree)

        nf = len(s.faces)
        bset = set(s.boundary_faces)
        node = lambda f: ROOT if f in bset else f
        if bset:
            root_face = ROOT
            start_darts = sorted(s.boundary_darts)
        else:
            root_face = 0
            start_darts = list(s.faces[0])
        parent_edge = [-1] * nf
        visited = {root_face}
        face_order: List[int] = []
        cotree = set()
        dq2 = deque([(root_face, start_darts)])
        while dq2:
            f, darts = dq2.popleft()
            for d in darts:
                e = d >> 1
                if e in tree or e in cotree:
                    continue
                g = node(s.face_of(d ^ 1))
                if g in visited:
                    continue
                visited.add(g)
                parent_edge[g] = e
                cotree.add(e)
                face_order.append(g)
                dq2.append((g, s.faces[g]))
        if len(face_order) + 1 != s.num_filled_faces + (1 if bset else 0):
            raise HomologyError("dual graph of the filled faces is disconnected")
        self.parent_edge = parent_edge
        self.face_order = face_order
        self.cotree_edges = frozenset(cotree)
        self.leftover: Tuple[int, ...] = tuple(
            e for e in range(s.num_edges) if e not in tree and e not in cotree
        )
        self.index = {e: j for j, e in enumerate(self.leftover)}
        self.face_chain = [0] * nf
        for f, walk in enumerate(s.faces):
            c = 0
            for d in walk:
                c ^= 1 << (d >> 1)
            self.face_chain[f] = c
        expected = 2 - s.euler_characteristic() - (1 if bset else 0)
        if self.dim != expected:
            raise HomologyError(f"H1 dimension {self.dim} differs from expected {expected}")
        self._pairing: Optional[List[int]] = None

    @property
    def dim(self) -> int:
        return len(self.leftover)

    def chain_of(self, walk: Walk) -> int:
        c = 0
        for d in walk.darts:
            c ^= 1 << (d >> 1)
        return c

    def reduce_chain(self, c: int) -> int:
        """Coordinates of a mod-2 cycle given as an edge bitmask."""
        for g in self.face_order:
            if (c >> self.parent_edge[g]) & 1:
                c ^= self.face_chain[g]
        x = 0
        for j, e in enumerate(self.leftover):
            if (c >> e) & 1:
                x |= 1 << j
        return x

    def class_of(self, walk: Walk) -> int:
        if not walk.is_closed:
            raise HomologyError("homology class of an open walk")
        return self.reduce_chain(self.chain_of(walk))

    def tree_path(self, x: int) -> List[int]:
        """Darts of the tree path from the root to ``x``."""
        path = []
        while x != self.root:
            d = self.parent_dart[x]
            path.append(d)
            x = self.surface.origin(d)
        path.reverse()
        return path

    def loop_through(self, d: int) -> Walk:
        """Root, tree path, dart ``d``, tree path back to the root."""
        s = self.surface
        darts = self.tree_path(s.origin(d)) + [d] + [x ^ 1 for x in reversed(self.tree_path(s.head(d)))]
        return Walk.of(s, darts, start=self.root) if darts else Walk((), self.root, self.root)

    def basis_walk(self, j: int) -> Walk:
        return self.loop_through(2 * self.leftover[j])

    def generator_loops(self) -> List[Walk]:
        """Loops at the root through each non-tree edge; they generate pi_1."""
        return [self.loop_through(2 * e) for e in range(self.surface.num_edges) if e not in self.tree_edges]

    def intersection_count(self, x_chain: int, y: Walk) -> int:
        """Mod-2 count of x meeting y pushed off to its left."""
        s = self.surface
        total = 0
        n = len(y.darts)
        for i in range(n):
            d_in, d_out = y.darts[i - 1], y.darts[i]
            for d in s.ccw_between(d_out, d_in ^ 1):
                if (x_chain >> (d >> 1)) & 1:
                    total ^= 1
        return total

    def pairing_matrix(self) -> List[int]:
        if self._pairing is None:
            walks = [self.basis_walk(j) for j in range(self.dim)]
            chains = [self.chain_of(w) for w in walks]
            rows = []
            for i in range(self.dim):
                r = 0
                for j in range(self.dim):
                    if self.intersection_count(chains[i], walks[j]):
                        r |= 1 << j
                rows.append(r)
            for i in range(self.dim):
                for j in range(self.dim):
                    if ((rows[i] >> j) & 1) != ((rows[j] >> i) & 1):
                        raise HomologyError("intersection form is not symmetric")
                if (rows[i] >> i) & 1:
                    raise HomologyError("intersection form is not alternating")
            if self.surface.is_closed and f2.rank(rows) != self.dim:
                raise HomologyError("intersection form is degenerate")
            self._pairing = rows
        return self._pairing

    def pairing(self, x: int, y: int) -> int:
        rows = self.pairing_matrix()
        acc = 0
        for i in f2.bits(x):
            acc ^= rows[i]
        return f2.dot(acc, y)

    def cocycle(self, phi: int) -> "Cocycle":
        return cocycle_from_functional(phi, self)


def h1(s: Surface) -> H1Space:
    return H1Space(s)


def class_of(walk: Walk, h: H1Space) -> int:
    return h.class_of(walk)


def pairing(x: int, y: int, h: H1Space) -> int:
    return h.pairing(x, y)


@dataclass(frozen=True)
class Cocycle:
    """Mod-2 edge values summing to zero around every filled face."""

    surface: Surface
    values: int
    phi: int = -1

    def edge(self, e: int) -> int:
        return (self.values >> e) & 1

    def evaluate(self, walk: Walk) -> int:
        acc = 0
        for d in walk.darts:
            acc ^= (self.values >> (d >> 1)) & 1
        return acc

    def check(self) -> None:
        s = self.surface
        for f in s.filled_faces():
            acc = 0
            for d in s.faces[f]:
                acc ^= (self.values >> (d >> 1)) & 1
            if acc:
                raise HomologyError(f"cocycle condition fails on face {f}")

    def hex(self) -> str:
        return format(self.values, "x")


def cocycle_from_functional(phi: int, h: H1Space) -> Cocycle:
    """Edge values realizing the functional ``phi`` on H1 coordinates."""
    vals = 0
    for j, e in enumerate(h.leftover):
        if (phi >> j) & 1:
            vals |= 1 << e
    for g in reversed(h.face_order):
        e = h.parent_edge[g]
        if f2.parity(vals & (h.face_chain[g] & ~(1 << e))):
            vals |= 1 << e
    c = Cocycle(h.surface, vals, phi)
    c.check()
    return c


def functional_of(c: Cocycle, h: H1Space) -> int:
    """The functional on H1 coordinates induced by a cocycle."""
    phi = 0
    for j in range(h.dim):
        if c.evaluate(h.basis_walk(j)):
            phi |= 1 << j
    return phi


class QuotientSpace:
    """H1 modulo the span of some classes, with coordinates on the rest."""

    def __init__(self, h: H1Space, killed: Sequence[int]):
        self.h1 = h
        self.killed = tuple(killed)
        self._eb = f2.EchelonBasis(killed)
        piv = set(self._eb.pivots)
        self.keep = tuple(j for j in range(h.dim) if j not in piv)

    @property
    def dim(self) -> int:
        return len(self.keep)

    def project(self, x: int) -> int:
        r = self._eb.reduce(x)
        y = 0
        for i, j in enumerate(self.keep):
            if (r >> j) & 1:
                y |= 1 << i
        return y

    def pull_back(self, phi: int) -> int:
        """Functional on H1 equal to ``phi`` after projection."""
        out = 0
        for j in range(self.h1.dim):
            if f2.dot(phi, self.project(1 << j)):
                out |= 1 << j
        return out


def quotient_by_beta(h: H1Space, beta_class: int) -> QuotientSpace:
    if beta_class == 0:
        raise HomologyError("cannot quotient by the zero class of beta")
    return QuotientSpace(h, [beta_class])


def beta_subwalk(s: Surface, beta: Walk, a: int, b: int, forward: bool = True) -> Walk:
    """The arc of the closed walk ``beta`` from vertex ``a`` to vertex ``b``."""
    vs = [s.origin(d) for d in beta.darts]
    n = len(vs)
    if a not in vs or b not in vs:
        raise SurfaceError("endpoint is not on beta")
    if forward:
        i, j = vs.index(a), vs.index(b)
        k = (j - i) % n
        darts = [beta.darts[(i + t) % n] for t in range(k)]
    else:
        rev = beta.reversed()
        return beta_subwalk(s, Walk.of(s, rev.darts), a, b, True)
    return Walk.of(s, darts, start=a) if darts else Walk((), a, a)


def relative_class(mu: Walk, beta: Walk, h: H1Space, q: QuotientSpace, forward: bool = True) -> int:
    """Class in H1 / <[beta]> of ``mu`` closed up along ``beta``."""
    s = h.surface
    eta = beta_subwalk(s, beta, mu.end, mu.start, forward)
    return q.project(h.reduce_chain(h.chain_of(mu) ^ h.chain_of(eta)))


class CapExceeded(ValueError):
    pass


def enumerate_functionals(
    dim: int,
    constraints: Sequence[Tuple[int, int]] = (),
    nonzero: bool = False,
    cap: int = 24,
) -> Iterator[int]:
    """All functionals on F2^dim, in increasing order, with ``f(v) = value``
    for every ``(v, value)`` constraint."""
    if dim > cap:
        raise CapExceeded(f"dimension {dim} is above the enumeration cap {cap}")
    for f in range(1 if nonzero else 0, 1 << dim):
        if all(f2.dot(f, v) == val for v, val in constraints):
            yield f
