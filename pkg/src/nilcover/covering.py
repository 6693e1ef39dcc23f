"""Regular double covers built from mod-2 cocycles, lifting, and monodromy.

The cover of vertex ``v`` on sheet ``s`` is vertex ``2v + s``.  Edge ``e``
lifts to edges ``2e`` and ``2e + 1``; lifted edge ``2e + s`` leaves the tail
of ``e`` on sheet ``s`` and arrives on sheet ``s ^ psi(e)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .homology import Cocycle
from .surface import CrossingSet, CurveArcTriple, Surface, SurfaceError, Walk

CLOSED = "closed"
PARTIAL = "partially_closed"
NONCLOSED = "nonclosed"


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class DoubleCover:
    base: Surface
    total: Surface
    psi: Cocycle

    def lift_dart(self, d: int, sheet: int) -> Tuple[int, int]:
        e = d >> 1
        flip = (self.psi.values >> e) & 1
        if d & 1:
            tail_sheet = sheet ^ flip
            return 2 * (2 * e + tail_sheet) + 1, tail_sheet
        return 2 * (2 * e + sheet), sheet ^ flip

    @staticmethod
    def project_dart(D: int) -> int:
        return 2 * (D >> 2) + (D & 1)

    @staticmethod
    def project_vertex(x: int) -> int:
        return x >> 1

    @staticmethod
    def deck_dart(D: int) -> int:
        return D ^ 2

    @staticmethod
    def deck_vertex(x: int) -> int:
        return x ^ 1

    def project_walk(self, w: Walk) -> Walk:
        return Walk(tuple(self.project_dart(D) for D in w.darts), w.start >> 1, w.end >> 1)

    def deck_walk(self, w: Walk) -> Walk:
        return Walk(tuple(D ^ 2 for D in w.darts), w.start ^ 1, w.end ^ 1)


def build_double_cover(s: Surface, psi: Cocycle) -> DoubleCover:
    if psi.surface is not s and psi.surface != s:
        raise CoverError("cocycle lives on a different surface")
    psi.check()
    rot = []
    vals = psi.values
    for v in range(s.num_vertices):
        for sheet in (0, 1):
            r = []
            for d in s.rotations[v]:
                e = d >> 1
                if d & 1:
                    r.append(2 * (2 * e + (sheet ^ ((vals >> e) & 1))) + 1)
                else:
                    r.append(2 * (2 * e + sheet))
            rot.append(r)
    bd = []
    for d in s.boundary_darts:
        e = d >> 1
        bd += [2 * (2 * e) + (d & 1), 2 * (2 * e + 1) + (d & 1)]
    try:
        total = Surface(rot, bd)
    except SurfaceError as exc:
        if "disconnected" in str(exc):
            raise CoverError("cocycle is a coboundary; the cover is disconnected") from None
        raise
    return DoubleCover(s, total, psi)


def lift_walk(c: DoubleCover, walk: Walk, start_sheet: int) -> Tuple[Walk, int]:
    sheet = start_sheet
    out = []
    vals = c.psi.values
    for d in walk.darts:
        e = d >> 1
        flip = (vals >> e) & 1
        if d & 1:
            sheet ^= flip
            out.append(2 * (2 * e + sheet) + 1)
        else:
            out.append(2 * (2 * e + sheet))
            sheet ^= flip
    start = 2 * walk.start + start_sheet
    return Walk(tuple(out), start, 2 * walk.end + sheet), sheet


@dataclass(frozen=True)
class LiftClassification:
    kind: str
    alpha_closed: bool
    beta_closed: bool

    @classmethod
    def of(cls, alpha_closed: bool, beta_closed: bool) -> "LiftClassification":
        if alpha_closed and beta_closed:
            kind = CLOSED
        elif alpha_closed or beta_closed:
            kind = PARTIAL
        else:
            kind = NONCLOSED
        return cls(kind, alpha_closed, beta_closed)


@dataclass(frozen=True)
class LiftResult:
    classification: LiftClassification
    alpha: Walk
    tau: Walk
    beta: Walk
    triple: Optional[CurveArcTriple]


def lift_triple(c: DoubleCover, t: CurveArcTriple) -> LiftResult:
    a, sa = lift_walk(c, t.alpha, 0)
    tau, st = lift_walk(c, t.tau, 0)
    b, sb = lift_walk(c, t.beta, st)
    cls = LiftClassification.of(sa == 0, sb == st)
    triple = None
    if cls.kind == CLOSED:
        triple = CurveArcTriple(c.total, a, b, tau)
        base_vertices = set(t.crossing_set.vertices)
        for p in triple.crossing_set:
            if (p.vertex >> 1) not in base_vertices:
                raise CoverError("lifted crossing does not project to a crossing")
    return LiftResult(cls, a, tau, b, triple)


@dataclass(frozen=True)
class Tower:
    """Covers stacked so that level i+1 is built on the total surface of level i."""

    covers: Tuple[DoubleCover, ...]

    @property
    def k(self) -> int:
        return len(self.covers)

    @property
    def base(self) -> Surface:
        return self.covers[0].base

    def based_vertex(self, v: int, level: int) -> int:
        return v << level

    def lift_through(self, walk: Walk, sheets: Sequence[int]) -> Walk:
        for cov, s in zip(self.covers, sheets):
            walk, _ = lift_walk(cov, walk, s)
        return walk


@dataclass(frozen=True)
class Monodromy:
    k: int
    vertex: int
    generators: Tuple[Walk, ...]
    perms: Tuple[Tuple[int, ...], ...]

    @property
    def degree(self) -> int:
        return 1 << self.k

    def is_transitive(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for p in self.perms:
                y = p[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.degree


def fiber_endpoints(covers: Sequence[DoubleCover], walk: Walk) -> List[int]:
    """Endpoint label of the lift of a closed walk from each fiber point.

    Fiber labels are the sheet choices read as a binary number, first level
    in the high bit.
    """
    k = len(covers)
    out = [0] * (1 << k)
    base_v = walk.start

    def rec(level: int, w: Walk, label: int):
        if level == k:
            out[label] = w.end - (base_v << k)
            return
        for s in (0, 1):
            lw, _ = lift_walk(covers[level], w, s)
            rec(level + 1, lw, (label << 1) | s)

    rec(0, walk, 0)
    return out


def monodromy(tw: Tower, generators: Sequence[Walk]) -> Monodromy:
    if not generators:
        raise CoverError("need at least one generator")
    v = generators[0].start
    perms = []
    for g in generators:
        if not g.is_closed or g.start != v:
            raise CoverError("generators must be loops at a common basepoint")
        perm = fiber_endpoints(tw.covers, g)
        if sorted(perm) != list(range(1 << tw.k)):
            raise CoverError("lifted endpoints do not form a permutation")
        perms.append(tuple(perm))
    return Monodromy(tw.k, v, tuple(generators), tuple(perms))


def crossing_injects(lifted: CrossingSet, base: CrossingSet) -> bool:
    bv = set(base.vertices)
    return all((p.vertex >> 1) in bv for p in lifted)
