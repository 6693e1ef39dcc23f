"""Oriented surfaces as rotation systems, with walks and curve pairs on them.

Edge ``e`` owns darts ``2e`` (tail to head) and ``2e + 1`` (head to tail);
``d ^ 1`` is the opposite dart.  Every vertex lists its outgoing darts in
counterclockwise order.  The face to the left of dart ``d`` continues with
``rot_prev(d ^ 1)``.  Faces are discs unless marked as boundary (holes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class SurfaceError(ValueError):
    """Invalid surface data or a violated precondition on surfaces."""


class NonTransverseError(SurfaceError):
    pass


class NotSeparatingError(SurfaceError):
    pass


class IterationCapError(SurfaceError):
    pass


def trace_faces(rotations: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Face walks of a rotation system, each started at its smallest dart."""
    where: Dict[int, Tuple[int, int]] = {}
    for v, rot in enumerate(rotations):
        for i, d in enumerate(rot):
            where[d] = (v, i)
    seen = set()
    faces = []
    for d0 in sorted(where):
        if d0 in seen:
            continue
        walk = []
        d = d0
        while d not in seen:
            seen.add(d)
            walk.append(d)
            v, i = where[d ^ 1]
            d = rotations[v][i - 1]
        faces.append(tuple(walk))
    return faces


class Surface:
    """Immutable rotation-system surface, possibly with holes."""

    def __init__(self, rotations: Sequence[Sequence[int]], boundary: Iterable[int] = ()):
        self.rotations: Tuple[Tuple[int, ...], ...] = tuple(tuple(r) for r in rotations)
        ndarts = sum(len(r) for r in self.rotations)
        if ndarts == 0 or ndarts % 2:
            raise SurfaceError("a surface needs a positive even number of darts")
        self._origin = [-1] * ndarts
        self._pos = [-1] * ndarts
        for v, rot in enumerate(self.rotations):
            if not rot:
                raise SurfaceError(f"vertex {v} has no darts")
            for i, d in enumerate(rot):
                if not 0 <= d < ndarts or self._origin[d] != -1:
                    raise SurfaceError(f"dart {d} at vertex {v} is out of range or repeated")
                self._origin[d] = v
                self._pos[d] = i
        self.faces: Tuple[Tuple[int, ...], ...] = tuple(trace_faces(self.rotations))
        self._face_of = [0] * ndarts
        for f, walk in enumerate(self.faces):
            for d in walk:
                self._face_of[d] = f
        bset = frozenset(boundary)
        bfaces = sorted({self._face_of[d] for d in bset})
        for f in bfaces:
            if not set(self.faces[f]) <= bset:
                raise SurfaceError(f"boundary darts cover face {f} only partially")
        self.boundary_faces: Tuple[int, ...] = tuple(bfaces)
        self.boundary_darts = frozenset(d for f in bfaces for d in self.faces[f])
        self._check_connected()

    def _check_connected(self) -> None:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for d in self.rotations[v]:
                u = self._origin[d ^ 1]
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(self.rotations):
            raise SurfaceError("the complex is disconnected")

    @classmethod
    def from_faces(cls, faces: Sequence[Sequence[int]], boundary_faces: Iterable[int] = ()) -> "Surface":
        """Glue polygons given as dart cycles; vertices come out of the gluing."""
        succ: Dict[int, int] = {}
        for walk in faces:
            for i, d in enumerate(walk):
                if d in succ:
                    raise SurfaceError(f"dart {d} appears in two face corners")
                succ[d] = walk[(i + 1) % len(walk)]
        n = len(succ)
        if set(succ) != set(range(n)):
            raise SurfaceError("face walks must use every dart exactly once")
        # rot_prev(e) = succ(e ^ 1); invert to walk each vertex counterclockwise
        rot_next = {succ[e ^ 1]: e for e in range(n)}
        seen = set()
        rotations = []
        for d0 in range(n):
            if d0 in seen:
                continue
            cyc = []
            d = d0
            while d not in seen:
                seen.add(d)
                cyc.append(d)
                d = rot_next[d]
            rotations.append(cyc)
        bdarts = [d for f in boundary_faces for d in faces[f]]
        return cls(rotations, bdarts)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Surface)
            and self.rotations == other.rotations
            and self.boundary_darts == other.boundary_darts
        )

    def __hash__(self) -> int:
        return hash((self.rotations, self.boundary_darts))

    def __repr__(self) -> str:
        return (
            f"Surface(V={self.num_vertices}, E={self.num_edges}, F={self.num_filled_faces}, "
            f"b={self.num_boundary}, chi={self.euler_characteristic()})"
        )

    @property
    def num_vertices(self) -> int:
        return len(self.rotations)

    @property
    def num_darts(self) -> int:
        return len(self._origin)

    @property
    def num_edges(self) -> int:
        return len(self._origin) // 2

    @property
    def num_filled_faces(self) -> int:
        return len(self.faces) - len(self.boundary_faces)

    @property
    def num_boundary(self) -> int:
        return len(self.boundary_faces)

    @property
    def is_closed(self) -> bool:
        return not self.boundary_faces

    def origin(self, d: int) -> int:
        return self._origin[d]

    def head(self, d: int) -> int:
        return self._origin[d ^ 1]

    def position(self, d: int) -> int:
        return self._pos[d]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def rot_next(self, d: int) -> int:
        rot = self.rotations[self._origin[d]]
        return rot[(self._pos[d] + 1) % len(rot)]

    def rot_prev(self, d: int) -> int:
        rot = self.rotations[self._origin[d]]
        return rot[self._pos[d] - 1]

    def face_next(self, d: int) -> int:
        return self.rot_prev(d ^ 1)

    def face_of(self, d: int) -> int:
        return self._face_of[d]

    def is_boundary_face(self, f: int) -> bool:
        return self.faces[f][0] in self.boundary_darts

    def filled_faces(self) -> List[int]:
        return [f for f in range(len(self.faces)) if not self.is_boundary_face(f)]

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_filled_faces

    def genus(self) -> int:
        g2 = 2 - self.euler_characteristic() - self.num_boundary
        return g2 // 2

    def ccw_between(self, a: int, b: int) -> List[int]:
        """Darts strictly between ``a`` and ``b`` going counterclockwise."""
        out = []
        d = self.rot_next(a)
        while d != b:
            out.append(d)
            d = self.rot_next(d)
        return out

    def boundary_vertices(self) -> set:
        return {self._origin[d] for d in self.boundary_darts}

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "rotation": list(r)} for v, r in enumerate(self.rotations)],
            "edges": [{"id": e, "darts": [2 * e, 2 * e + 1]} for e in range(self.num_edges)],
            "faces": [
                {"walk": list(w), "genus": 0, "boundary": self.is_boundary_face(f)}
                for f, w in enumerate(self.faces)
            ],
        }


@dataclass(frozen=True)
class Walk:
    """A walk given by its darts; ``start``/``end`` matter for empty walks."""

    darts: Tuple[int, ...]
    start: int
    end: int

    @classmethod
    def of(cls, s: Surface, darts: Sequence[int], start: Optional[int] = None) -> "Walk":
        darts = tuple(darts)
        if not darts:
            if start is None:
                raise SurfaceError("an empty walk needs an explicit start vertex")
            return cls((), start, start)
        if start is not None and s.origin(darts[0]) != start:
            raise SurfaceError(f"walk does not start at vertex {start}")
        for a, b in zip(darts, darts[1:]):
            if s.head(a) != s.origin(b):
                raise SurfaceError(f"darts {a} and {b} are not consecutive")
        return cls(darts, s.origin(darts[0]), s.head(darts[-1]))

    def __len__(self) -> int:
        return len(self.darts)

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    def reversed(self) -> "Walk":
        return Walk(tuple(d ^ 1 for d in reversed(self.darts)), self.end, self.start)

    def then(self, other: "Walk") -> "Walk":
        if self.end != other.start:
            raise SurfaceError("walks are not composable")
        return Walk(self.darts + other.darts, self.start, other.end)

    def vertices(self, s: Surface) -> List[int]:
        return [self.start] + [s.head(d) for d in self.darts]

    def rotated(self, s: Surface, i: int) -> "Walk":
        """Closed walk started at its ``i``-th dart."""
        darts = self.darts[i:] + self.darts[:i]
        return Walk.of(s, darts)

    def edges(self) -> set:
        return {d >> 1 for d in self.darts}


def free_reduce(darts: Sequence[int]) -> List[int]:
    out: List[int] = []
    for d in darts:
        if out and out[-1] == d ^ 1:
            out.pop()
        else:
            out.append(d)
    return out


def reduce_walk(w: Walk) -> Walk:
    return Walk(tuple(free_reduce(w.darts)), w.start, w.end)


def concatenate(mu: Walk, eta: Walk, s: Surface) -> Walk:
    """Closed, cyclically reduced walk ``mu`` followed by ``eta``."""
    if mu.end != eta.start or eta.end != mu.start:
        raise SurfaceError("endpoints of the two walks do not match up")
    darts = free_reduce(mu.darts + eta.darts)
    while len(darts) >= 2 and darts[0] == darts[-1] ^ 1:
        darts = darts[1:-1]
    if not darts:
        return Walk((), mu.start, mu.start)
    return Walk.of(s, darts)


def is_simple_closed(s: Surface, w: Walk) -> bool:
    if not w.darts or not w.is_closed:
        return False
    if len(w.darts) >= 2 and w.darts[0] == w.darts[-1] ^ 1:
        return False
    vs = [s.origin(d) for d in w.darts]
    return len(set(vs)) == len(vs)


@dataclass(frozen=True)
class Crossing:
    vertex: int
    alpha_index: int
    beta_index: int
    sign: int


@dataclass(frozen=True)
class CrossingSet:
    points: Tuple[Crossing, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def vertices(self) -> List[int]:
        return [p.vertex for p in self.points]


def _interleaved(s: Surface, a1: int, a2: int, b1: int, b2: int) -> bool:
    pa = sorted((s.position(a1), s.position(a2)))
    inside = [pa[0] < s.position(b) < pa[1] for b in (b1, b2)]
    return inside[0] != inside[1]


def crossings(alpha: Walk, beta: Walk, s: Surface) -> CrossingSet:
    """Transverse crossings of two edge-disjoint simple closed walks, along alpha."""
    if alpha.edges() & beta.edges():
        raise NonTransverseError("the curves share an edge")
    bpos = {s.origin(d): j for j, d in enumerate(beta.darts)}
    pts = []
    for i, d in enumerate(alpha.darts):
        x = s.origin(d)
        j = bpos.get(x)
        if j is None:
            continue
        a_out, a_back = d, alpha.darts[i - 1] ^ 1
        b_out, b_back = beta.darts[j], beta.darts[j - 1] ^ 1
        if not _interleaved(s, a_out, a_back, b_out, b_back):
            raise NonTransverseError(f"the curves touch without crossing at vertex {x}")
        # +1 when beta leaves into the sector counterclockwise after alpha's exit
        sign = 1 if b_out in s.ccw_between(a_out, a_back) else -1
        pts.append(Crossing(x, i, j, sign))
    return CrossingSet(tuple(pts))


@dataclass(frozen=True)
class CurveArcTriple:
    """Two based simple closed curves and a path from the first basepoint to the second."""

    surface: Surface
    alpha: Walk
    beta: Walk
    tau: Walk
    crossing_set: CrossingSet = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        s = self.surface
        for name, c in (("alpha", self.alpha), ("beta", self.beta)):
            if not is_simple_closed(s, c):
                raise SurfaceError(f"{name} is not a simple closed walk")
        if self.tau.start != self.alpha.start or self.tau.end != self.beta.start:
            raise SurfaceError("tau must run from the basepoint of alpha to that of beta")
        cs = crossings(self.alpha, self.beta, s)
        for p in cs:
            if s.degree(p.vertex) != 4:
                raise NonTransverseError(f"crossing vertex {p.vertex} does not have degree 4")
        object.__setattr__(self, "crossing_set", cs)

    @property
    def n(self) -> int:
        return len(self.crossing_set)

    @property
    def v(self) -> int:
        return self.alpha.start

    @property
    def w(self) -> int:
        return self.beta.start

    def witness_word(self) -> Walk:
        """The loop tau . beta^-1 . tau^-1 . alpha at the basepoint of alpha."""
        return self.tau.then(self.beta.reversed()).then(self.tau.reversed()).then(self.alpha)

    def to_dict(self) -> dict:
        out = self.surface.to_dict()
        out["curves"] = {
            "alpha": list(self.alpha.darts),
            "beta": list(self.beta.darts),
            "tau": list(self.tau.darts),
        }
        out["basepoints"] = {"v": self.v, "w": self.w}
        return out


def make_triple(s: Surface, alpha: Sequence[int], beta: Sequence[int], tau: Sequence[int],
                v: Optional[int] = None, w: Optional[int] = None) -> CurveArcTriple:
    a = Walk.of(s, alpha)
    b = Walk.of(s, beta)
    if v is not None and v != a.start:
        a = a.rotated(s, [s.origin(d) for d in a.darts].index(v))
    if w is not None and w != b.start:
        b = b.rotated(s, [s.origin(d) for d in b.darts].index(w))
    t = Walk.of(s, tau, start=a.start)
    return CurveArcTriple(s, a, b, t)


# ---------------------------------------------------------------- regions


@dataclass(frozen=True)
class Region:
    """A component of the complement of the curves, as a set of faces."""

    faces: Tuple[int, ...]
    chi: int
    cycles: Tuple[Tuple[int, ...], ...]
    labels: Tuple[Tuple[str, ...], ...]

    @property
    def is_disc(self) -> bool:
        return self.chi == 1 and len(self.cycles) == 1

    @property
    def corners(self) -> int:
        if len(self.labels) != 1:
            return -1
        lab = self.labels[0]
        return sum(1 for i in range(len(lab)) if lab[i] != lab[i - 1])


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def regions(s: Surface, curves: Dict[str, Walk]) -> List[Region]:
    """Complementary regions of the given curves with their boundary cycles."""
    label_of_edge: Dict[int, str] = {}
    for name, c in curves.items():
        for d in c.darts:
            label_of_edge[d >> 1] = name
    uf = _UnionFind(len(s.faces))
    for e in range(s.num_edges):
        if e not in label_of_edge:
            uf.union(s.face_of(2 * e), s.face_of(2 * e + 1))
    groups: Dict[int, List[int]] = {}
    for f in range(len(s.faces)):
        groups.setdefault(uf.find(f), []).append(f)
    on_curve = set()
    for c in curves.values():
        on_curve.update(s.origin(d) for d in c.darts)
    vcount: Dict[int, int] = {}
    for v in range(s.num_vertices):
        if v not in on_curve:
            r = uf.find(s.face_of(s.rotations[v][0]))
            vcount[r] = vcount.get(r, 0) + 1
    ecount: Dict[int, int] = {}
    for e in range(s.num_edges):
        if e not in label_of_edge:
            r = uf.find(s.face_of(2 * e))
            ecount[r] = ecount.get(r, 0) + 1
    out = []
    for r, fs in sorted(groups.items()):
        filled = sum(1 for f in fs if not s.is_boundary_face(f))
        chi = vcount.get(r, 0) - ecount.get(r, 0) + filled
        fset = set(fs)
        starts = [d for d in range(s.num_darts) if (d >> 1) in label_of_edge and s.face_of(d) in fset]
        seen = set()
        cycles, labels = [], []
        for d0 in starts:
            if d0 in seen:
                continue
            cyc = []
            d = d0
            while d not in seen:
                seen.add(d)
                cyc.append(d)
                nxt = s.rot_prev(d ^ 1)
                while (nxt >> 1) not in label_of_edge:
                    nxt = s.rot_prev(nxt)
                d = nxt
            cycles.append(tuple(cyc))
            labels.append(tuple(label_of_edge[x >> 1] for x in cyc))
        out.append(Region(tuple(fs), chi, tuple(cycles), tuple(labels)))
    return out


@dataclass(frozen=True)
class MinimalityWitness:
    kind: str  # "bigon" or "disc"
    region: Region


def is_minimal_position(alpha: Walk, beta: Walk, s: Surface) -> Tuple[bool, Optional[MinimalityWitness]]:
    """No bigon region and no disc bounded by a single curve."""
    crossings(alpha, beta, s)
    for reg in regions(s, {"alpha": alpha, "beta": beta}):
        if not reg.is_disc:
            continue
        c = reg.corners
        if c == 2:
            return False, MinimalityWitness("bigon", reg)
        if c == 0:
            return False, MinimalityWitness("disc", reg)
    return True, None


def isotopy_annulus(alpha: Walk, beta: Walk, s: Surface) -> Optional[Region]:
    """An annular region bounded by one copy of each curve, if there is one."""
    for reg in regions(s, {"alpha": alpha, "beta": beta}):
        if reg.chi == 0 and len(reg.cycles) == 2:
            kinds = sorted(set(lab) for lab in reg.labels)
            if all(len(k) == 1 for k in kinds) and {next(iter(k)) for k in kinds} == {"alpha", "beta"}:
                if len(reg.cycles[0]) + len(reg.cycles[1]) == len(alpha) + len(beta):
                    return reg
    return None


# ---------------------------------------------------------------- bigon surgery


def _remove_bigon(s: Surface, alpha: Walk, beta: Walk, reg: Region):
    """Push alpha across a bigon.  Returns the new surface, the new alpha as a
    dart cycle, a repair function for other walks and the basepoint data."""
    cyc, lab = reg.cycles[0], reg.labels[0]
    k = next(i for i in range(len(lab)) if lab[i] == "alpha" and lab[i - 1] == "beta")
    cyc = cyc[k:] + cyc[:k]
    lab = lab[k:] + lab[:k]
    nA = lab.index("beta")
    A, B = list(cyc[:nA]), list(cyc[nA:])
    P, Q = s.origin(A[0]), s.head(A[-1])
    if P == Q:
        raise SurfaceError("degenerate bigon with a single corner vertex")
    m = len(B)
    xs = [s.origin(B[0])] + [s.head(b) for b in B]
    bset = set(beta.darts) | {d ^ 1 for d in beta.darts}

    def beta_other(x: int, not_this: int) -> int:
        return next(d for d in s.rotations[x] if d in bset and d != not_this)

    V, E = s.num_vertices, s.num_edges
    rung = lambda j: 2 * (E + j)                 # x_j -> y_j
    rail = lambda j: 2 * (E + m + 1 + j)         # y_j -> y_{j+1}
    rot = [list(r) for r in s.rotations]
    new_rot: List[List[int]] = []
    moved: Dict[int, int] = {}
    for j, x in enumerate(xs):
        west = B[j - 1] ^ 1 if j > 0 else beta_other(x, B[0])
        east = B[j] if j < m else beta_other(x, B[m - 1] ^ 1)
        r = rot[x]
        i = r.index(west)
        r = r[i:] + r[:i]
        ie = r.index(east)
        north = r[1:ie]
        rot[x] = [west, rung(j)] + r[ie:]
        yr = [rung(j) + 1]
        if j > 0:
            yr.append(rail(j - 1) + 1)
        yr += north
        if j < m:
            yr.append(rail(j))
        new_rot.append(yr)
        for d in north:
            moved[d] = V + j
    s2 = Surface(rot + new_rot, s.boundary_darts)

    if A[0] in alpha.darts:
        i0 = alpha.darts.index(A[0])
        seq = alpha.darts[i0:] + alpha.darts[:i0]
        replacement = [rail(j) + 1 for j in range(m - 1, -1, -1)]
    else:
        i0 = alpha.darts.index(A[-1] ^ 1)
        seq = alpha.darts[i0:] + alpha.darts[:i0]
        replacement = [rail(j) for j in range(m)]
    new_alpha = replacement + list(seq[len(A):])
    a_vertices = {s.origin(d) for d in A} | {Q}

    def repair(w: Walk) -> Walk:
        out: List[int] = []
        cur = w.start
        for d in w.darts:
            o = s2.origin(d)
            if o != cur:
                out.append(_rung_between(s2, cur, o, xs, V, E))
            out.append(d)
            cur = s2.head(d)
        if cur != w.end:
            out.append(_rung_between(s2, cur, w.end, xs, V, E))
        return Walk.of(s2, free_reduce(out), start=w.start) if out else Walk((), w.start, w.end)

    # path inside the bigon from y_0 back to a vertex of A
    back_from_q = [rung(0) + 1]
    for d in reversed(A):
        back_from_q.append(d ^ 1)
    return s2, new_alpha, repair, a_vertices, back_from_q, V


def _rung_between(s2: Surface, a: int, b: int, xs: List[int], V: int, E: int) -> int:
    for j, x in enumerate(xs):
        if a == x and b == V + j:
            return 2 * (E + j)
        if b == x and a == V + j:
            return 2 * (E + j) + 1
    raise SurfaceError("walk cannot be repaired after surgery")


def reduce_to_minimal(t: CurveArcTriple, cap: Optional[int] = None) -> Tuple[CurveArcTriple, CrossingSet]:
    """Remove bigons by pushing alpha across them until none remain."""
    s, alpha, beta, tau = t.surface, t.alpha, t.beta, t.tau
    n0 = t.n
    limit = cap if cap is not None else s.num_edges * max(n0, 1) + 1
    steps = 0
    while True:
        ok, wit = is_minimal_position(alpha, beta, s)
        if ok:
            break
        if wit.kind != "bigon":
            raise SurfaceError("a curve bounds a disc; it is nullhomotopic")
        if steps >= limit:
            raise IterationCapError(f"bigon removal did not finish within {limit} steps")
        steps += 1
        before = len(crossings(alpha, beta, s))
        s2, cyc, repair, a_vertices, back, V = _remove_bigon(s, alpha, beta, wit.region)
        v = alpha.start
        new_beta = repair(beta)
        new_tau = repair(tau)
        if v in a_vertices:
            path = list(back)
            # walk back along A until v is reached
            cur = V
            trimmed = [path[0]]
            cur = s2.head(path[0])
            for d in path[1:]:
                if cur == v:
                    break
                trimmed.append(d)
                cur = s2.head(d)
            if cur != v:
                raise SurfaceError("basepoint is not on the pushed arc")
            new_tau = Walk.of(s2, free_reduce(trimmed + list(new_tau.darts)), start=V)
            start = V
        else:
            start = v
        a_walk = Walk.of(s2, cyc)
        k = [s2.origin(d) for d in a_walk.darts].index(start)
        alpha = a_walk.rotated(s2, k)
        beta, tau, s = new_beta, new_tau, s2
        after = len(crossings(alpha, beta, s))
        if after != before - 2:
            raise SurfaceError("bigon removal did not drop two crossings")
    t2 = CurveArcTriple(s, alpha, beta, tau)
    return t2, t2.crossing_set


# ---------------------------------------------------------------- relabelling


def rebuild(s: Surface, rotations: Dict[int, List[int]], pairs: List[Tuple[int, int]]):
    """Compact a modified rotation system.

    ``rotations`` maps surviving old vertices to cyclic lists of old dart
    ids, ``pairs`` lists the surviving edges as (dart, opposite dart).
    Returns the new surface, the old-to-new dart map and vertex map.
    """
    dmap: Dict[int, int] = {}
    for i, (a, b) in enumerate(pairs):
        dmap[a] = 2 * i
        dmap[b] = 2 * i + 1
    verts = sorted(rotations)
    vmap = {v: i for i, v in enumerate(verts)}
    rot = [[dmap[d] for d in rotations[v]] for v in verts]
    bd = [dmap[d] for d in s.boundary_darts if d in dmap]
    return Surface(rot, bd), dmap, vmap


def map_walk(s2: Surface, w: Walk, dmap: Dict[int, Optional[int]], vmap: Dict[int, int]) -> Walk:
    darts = [dmap[d] for d in w.darts if dmap.get(d) is not None]
    if not darts:
        return Walk((), vmap[w.start], vmap[w.start])
    return Walk.of(s2, darts, start=vmap[w.start])


# ---------------------------------------------------------------- cutting


@dataclass(frozen=True)
class Piece:
    surface: Surface
    vertex_map: Tuple[int, ...]
    dart_map: Tuple[int, ...]
    faces: Tuple[int, ...]

    def edge_map(self) -> Tuple[int, ...]:
        return tuple(self.dart_map[2 * e] >> 1 for e in range(self.surface.num_edges))


@dataclass(frozen=True)
class CutResult:
    ambient: Surface
    cycles: Tuple[Walk, ...]
    pieces: Tuple[Piece, ...]

    @property
    def side_S(self) -> Piece:
        return self.pieces[0]

    @property
    def side_Sprime(self) -> Piece:
        return self.pieces[1]


def cut_along(cycles: Sequence[Walk], s: Surface, require_split: bool = True) -> CutResult:
    """Cut ``s`` along disjoint embedded cycles into pieces with boundary."""
    cut_edges = set()
    cut_vertices = set()
    for c in cycles:
        if not is_simple_closed(s, c):
            raise SurfaceError("cut cycle is not embedded")
        vs = {s.origin(d) for d in c.darts}
        if vs & cut_vertices or c.edges() & cut_edges:
            raise SurfaceError("cut cycles must be disjoint")
        cut_vertices |= vs
        cut_edges |= c.edges()
    uf = _UnionFind(len(s.faces))
    for e in range(s.num_edges):
        if e not in cut_edges:
            uf.union(s.face_of(2 * e), s.face_of(2 * e + 1))
    groups: Dict[int, List[int]] = {}
    for f in range(len(s.faces)):
        groups.setdefault(uf.find(f), []).append(f)
    if require_split and len(groups) < 2:
        raise NotSeparatingError("the cycle does not separate the surface")
    pieces = []
    for _, fs in sorted(groups.items()):
        fset = set(fs)
        edges = sorted({d >> 1 for d in range(s.num_darts) if s.face_of(d) in fset})
        emap = {e: i for i, e in enumerate(edges)}
        darts = {2 * e for e in edges} | {2 * e + 1 for e in edges}
        verts = sorted({s.origin(d) for d in darts})
        rot = []
        for v in verts:
            rot.append([2 * emap[d >> 1] + (d & 1) for d in s.rotations[v] if d in darts])
        faces = trace_faces(rot)
        inv = [0] * (2 * len(edges))
        for e, i in emap.items():
            inv[2 * i] = 2 * e
            inv[2 * i + 1] = 2 * e + 1
        filled_ambient = {s.faces[f] for f in fs if not s.is_boundary_face(f)}
        bd = []
        for walk in faces:
            amb = tuple(inv[d] for d in walk)
            k = amb.index(min(amb))
            if amb[k:] + amb[:k] not in filled_ambient:
                bd.extend(walk)
        piece_s = Surface(rot, bd)
        pieces.append(Piece(piece_s, tuple(verts), tuple(inv), tuple(fs)))
    return CutResult(s, tuple(cycles), tuple(pieces))


def reglue(cut: CutResult) -> Surface:
    """Inverse of ``cut_along``: merge the pieces' rotations back together."""
    s = cut.ambient
    cyc_darts: Dict[int, Tuple[int, int]] = {}
    for c in cut.cycles:
        for i, d in enumerate(c.darts):
            cyc_darts[s.origin(d)] = (d, c.darts[i - 1] ^ 1)
    per_vertex: Dict[int, List[List[int]]] = {}
    for p in cut.pieces:
        for pv, v in enumerate(p.vertex_map):
            per_vertex.setdefault(v, []).append([p.dart_map[d] for d in p.surface.rotations[pv]])
    rotations = []
    for v in range(len(per_vertex)):
        lists = per_vertex[v]
        if v not in cyc_darts:
            rotations.append(lists[0])
            continue
        out_d, back_d = cyc_darts[v]
        xpart, ypart = [], []
        for r in lists:
            i = r.index(out_d)
            r = r[i:] + r[:i]
            j = r.index(back_d)
            xpart += r[1:j]
            ypart += r[j + 1:]
        rotations.append([out_d] + xpart + [back_d] + ypart)
    return Surface(rotations, s.boundary_darts)


# ---------------------------------------------------------------- doubling


@dataclass(frozen=True)
class DoubleEmbedding:
    """Inclusion of a surface with boundary into its double and the fold back."""

    vertex_map: Tuple[int, ...]
    dart_map: Tuple[int, ...]
    fold_vertex: Tuple[int, ...]
    fold_dart: Tuple[int, ...]

    def include(self, s2: Surface, w: Walk) -> Walk:
        return Walk(tuple(self.dart_map[d] for d in w.darts), self.vertex_map[w.start], self.vertex_map[w.end])

    def retract(self, w: Walk) -> Walk:
        return Walk(tuple(self.fold_dart[d] for d in w.darts), self.fold_vertex[w.start], self.fold_vertex[w.end])


def double(s: Surface) -> Tuple[Surface, DoubleEmbedding]:
    """Glue a mirror copy of ``s`` along its boundary circles."""
    if s.is_closed:
        raise SurfaceError("doubling needs a surface with boundary")
    bedges = {d >> 1 for d in s.boundary_darts}
    for e in bedges:
        if 2 * e in s.boundary_darts and 2 * e + 1 in s.boundary_darts:
            raise SurfaceError(f"edge {e} has holes on both sides")
    corner: Dict[int, Tuple[int, int]] = {}
    for f in s.boundary_faces:
        walk = s.faces[f]
        for i, d in enumerate(walk):
            x = s.head(d)
            if x in corner:
                raise SurfaceError(f"boundary is pinched at vertex {x}")
            corner[x] = (d ^ 1, walk[(i + 1) % len(walk)])
    V, E = s.num_vertices, s.num_edges
    vmirror = {}
    nv = V
    for v in range(V):
        if v in corner:
            vmirror[v] = v
        else:
            vmirror[v] = nv
            nv += 1
    emirror = {}
    ne = E
    for e in range(E):
        if e in bedges:
            emirror[e] = e
        else:
            emirror[e] = ne
            ne += 1
    mdart = lambda d: 2 * emirror[d >> 1] + (d & 1)
    rot: List[List[int]] = [[] for _ in range(nv)]
    for v in range(V):
        r = list(s.rotations[v])
        if v in corner:
            first, last = corner[v]
            i = r.index(first)
            r = r[i:] + r[:i]
            if r[-1] != last:
                raise SurfaceError(f"unexpected boundary corner at vertex {v}")
            rot[v] = r + [mdart(d) for d in reversed(r[1:-1])]
        else:
            rot[v] = r
            rot[vmirror[v]] = [mdart(d) for d in reversed(r)]
    s2 = Surface(rot)
    fold_v = list(range(V)) + [0] * (nv - V)
    for v, mv in vmirror.items():
        fold_v[mv] = v
    fold_d = list(range(2 * E)) + [0] * (2 * (ne - E))
    for e, me in emirror.items():
        fold_d[2 * me] = 2 * e
        fold_d[2 * me + 1] = 2 * e + 1
    emb = DoubleEmbedding(tuple(range(V)), tuple(range(2 * E)), tuple(fold_v), tuple(fold_d))
    return s2, emb


# ---------------------------------------------------------------- local moves


def insert_handles(s: Surface, corner_dart: int, h: int) -> Surface:
    """Attach ``h`` handles inside the face corner after ``corner_dart``."""
    rot = [list(r) for r in s.rotations]
    x = s.head(corner_dart)
    nxt = s.face_next(corner_dart)
    r = rot[x]
    i = r.index(nxt)
    E = s.num_edges
    new = []
    for j in range(h):
        a, b = 2 * (E + 2 * j), 2 * (E + 2 * j + 1)
        new += [a, b, a + 1, b + 1]
    rot[x] = r[: i + 1] + new + r[i + 1:]
    return Surface(rot, s.boundary_darts)


def puncture(s: Surface, face: int) -> Surface:
    """Remove a small disc from the interior of a filled face."""
    if s.is_boundary_face(face):
        raise SurfaceError("cannot puncture a hole")
    return puncture_corner(s, s.faces[face][0])


def puncture_corner(s: Surface, d: int) -> Surface:
    """Puncture the face left of ``d``, attached at the head of ``d``."""
    if s.is_boundary_face(s.face_of(d)):
        raise SurfaceError("cannot puncture a hole")
    x = s.head(d)
    nxt = s.face_next(d)
    rot = [list(r) for r in s.rotations]
    r = rot[x]
    i = r.index(nxt)
    E = s.num_edges
    spike, loop = 2 * E, 2 * (E + 1)
    rot[x] = r[: i + 1] + [spike] + r[i + 1:]
    rot.append([spike + 1, loop, loop + 1])
    return Surface(rot, set(s.boundary_darts) | {loop})


def _split_alpha_dart(t: CurveArcTriple, i: int) -> CurveArcTriple:
    """Insert a vertex in the middle of the edge under ``alpha.darts[i]``."""
    s = t.surface
    d = t.alpha.darts[i]
    y = s.head(d)
    n = 2 * s.num_edges
    rot = [list(r) for r in s.rotations]
    rot[y][rot[y].index(d ^ 1)] = n ^ 1
    rot.append([d ^ 1, n])
    s2 = Surface(rot, s.boundary_darts)

    def expand(darts: Sequence[int]) -> List[int]:
        out: List[int] = []
        for e in darts:
            out += [e, n] if e == d else [n ^ 1, e] if e == d ^ 1 else [e]
        return out

    tau = expand(t.tau.darts)
    return CurveArcTriple(
        s2,
        Walk.of(s2, expand(t.alpha.darts)),
        Walk.of(s2, t.beta.darts),
        Walk.of(s2, tau, start=t.v) if tau else Walk((), t.v, t.v),
    )


def finger_move(t: CurveArcTriple, i: int, j: int) -> Tuple[CurveArcTriple, int]:
    """Push alpha across beta inside a face shared by ``alpha.darts[i]`` and ``beta.darts[j]``.

    Adds two crossings and a new vertex on the tip of the finger.  Returns
    the new triple and a dart whose head corner lies inside the tip bigon.
    """
    t = _split_alpha_dart(_split_alpha_dart(t, i), i + 1)
    i += 1
    s = t.surface
    a, b = t.alpha.darts[i], t.beta.darts[j]
    da = db = None
    for x in (a, a ^ 1):
        for y in (b, b ^ 1):
            if da is None and s.face_of(x) == s.face_of(y) and not s.is_boundary_face(s.face_of(x)):
                da, db = x, y
    if da is None:
        raise SurfaceError("the two darts do not share a face")
    u, v, p, q = s.origin(da), s.head(da), s.origin(db), s.head(db)
    if len({u, v, p, q}) != 4:
        raise SurfaceError("the two edges must not share a vertex")
    V, E = s.num_vertices, s.num_edges
    c1, c2 = 2 * E, 2 * E + 2  # c1 -> c2, c2 -> q
    uc2, c2t, tc1, vc1 = 2 * E + 4, 2 * E + 6, 2 * E + 8, 2 * E + 10
    rot = [list(r) for r in s.rotations]
    rot[q][rot[q].index(db ^ 1)] = c2 ^ 1
    ru = rot[u]
    ru.insert(ru.index(da) + 1, uc2)
    rv = rot[v]
    rv.insert(rv.index(s.face_next(da)) + 1, vc1)
    rot.append([c1, vc1 ^ 1, db ^ 1, tc1 ^ 1])  # first crossing
    rot.append([c2, uc2 ^ 1, c1 ^ 1, c2t])  # second crossing
    rot.append([c2t ^ 1, tc1])  # tip
    s2 = Surface(rot, s.boundary_darts)
    assert s2.num_vertices == V + 3

    def expand_beta(darts: Sequence[int]) -> List[int]:
        out: List[int] = []
        for d in darts:
            if d == db:
                out += [db, c1, c2]
            elif d == db ^ 1:
                out += [c2 ^ 1, c1 ^ 1, db ^ 1]
            else:
                out.append(d)
        return out

    alpha = list(t.alpha.darts)
    alpha[i:i + 1] = [uc2, c2t, tc1, vc1 ^ 1] if a == da else [vc1, tc1 ^ 1, c2t ^ 1, uc2 ^ 1]
    tau = expand_beta(t.tau.darts)
    t2 = CurveArcTriple(
        s2,
        Walk.of(s2, alpha),
        Walk.of(s2, expand_beta(t.beta.darts)),
        Walk.of(s2, tau, start=t.v) if tau else Walk((), t.v, t.v),
    )
    return t2, tc1 ^ 1
