"""Subarcs of alpha cut out by beta, their relative classes and their lifts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import f2
from .covering import DoubleCover, lift_walk
from .functionals import ceil_div, splits
from .homology import H1Space, QuotientSpace, beta_subwalk, relative_class
from .surface import CurveArcTriple, Piece, Walk, concatenate, cut_along


class ArcError(ValueError):
    pass


@dataclass(frozen=True)
class BetaArc:
    index: int
    start: int          # index along alpha of the first dart
    walk: Walk

    @property
    def p1(self) -> int:
        return self.walk.start

    @property
    def p2(self) -> int:
        return self.walk.end

    def __len__(self) -> int:
        return len(self.walk)


def beta_arcs(t: CurveArcTriple) -> List[BetaArc]:
    """The N subwalks of alpha between consecutive crossings, in order."""
    pts = t.crossing_set.points
    n = len(pts)
    if n == 0:
        raise ArcError("the curves are disjoint; there are no arcs")
    s, darts = t.surface, t.alpha.darts
    L = len(darts)
    out = []
    for j in range(n):
        i0 = pts[j].alpha_index
        i1 = pts[(j + 1) % n].alpha_index
        length = (i1 - i0) % L or L
        seg = [darts[(i0 + k) % L] for k in range(length)]
        out.append(BetaArc(j, i0, Walk.of(s, seg)))
    return out


@dataclass(frozen=True)
class ArcSet:
    arcs: Tuple[BetaArc, ...]
    classes: Tuple[int, ...]

    @property
    def good(self) -> List[BetaArc]:
        return [a for a, c in zip(self.arcs, self.classes) if c]

    @property
    def bad(self) -> List[BetaArc]:
        return [a for a, c in zip(self.arcs, self.classes) if not c]


def select_disjoint(arcs: Sequence[BetaArc], offset: int = 0) -> List[BetaArc]:
    """Every other arc, starting from the arc after crossing ``offset``."""
    n = len(arcs)
    if n % 2:
        raise ArcError(f"an odd number of arcs ({n}) cannot be halved")
    chosen = [arcs[(offset + 2 * i) % n] for i in range(n // 2)]
    return sorted(chosen, key=lambda a: a.index)


def classify(arc: BetaArc, t: CurveArcTriple, h: H1Space, q: QuotientSpace) -> str:
    return "good" if relative_class(arc.walk, t.beta, h, q) else "bad"


def classified(arcs: Sequence[BetaArc], t: CurveArcTriple, h: H1Space, q: QuotientSpace) -> ArcSet:
    return ArcSet(tuple(arcs), tuple(relative_class(a.walk, t.beta, h, q) for a in arcs))


# ---------------------------------------------------------------- separating pairings


@dataclass(frozen=True)
class SeparatingPairing:
    arc: BetaArc
    eta: Walk
    cycle: Walk
    side: Piece          # away from beta
    beta_side: Piece     # contains the rest of beta
    V: Tuple[int, ...]
    W: Tuple[int, ...]


def side_image(p: Piece, h: H1Space) -> List[int]:
    """Classes in the ambient H1 of a basis of the piece's H1."""
    hp = H1Space(p.surface)
    amb = h.surface
    out = []
    for j in range(hp.dim):
        w = hp.basis_walk(j)
        darts = [p.dart_map[d] for d in w.darts]
        out.append(h.class_of(Walk.of(amb, darts)) if darts else 0)
    return out


def crossing_sign(t: CurveArcTriple, vertex: int) -> int:
    for p in t.crossing_set:
        if p.vertex == vertex:
            return p.sign
    raise ArcError(f"vertex {vertex} is not a crossing")


def make_separating_pairing(mu: BetaArc, t: CurveArcTriple, h: H1Space, q: QuotientSpace) -> SeparatingPairing:
    s = t.surface
    if crossing_sign(t, mu.p1) == crossing_sign(t, mu.p2):
        raise ArcError("arc endpoints cross beta with the same sign")
    options = []
    for forward in (True, False):
        eta = beta_subwalk(s, t.beta, mu.p2, mu.p1, forward)
        cyc = concatenate(mu.walk, eta, s)
        options.append((h.class_of(cyc), eta, cyc))
    zero = [o for o in options if o[0] == 0]
    if len(zero) != 1:
        raise ArcError("expected exactly one closure of the arc along beta to be null-homologous")
    _, eta, cyc = zero[0]
    cut = cut_along([cyc], s)
    if len(cut.pieces) != 2:
        raise ArcError("closed-up arc does not split the surface in two")
    for p in cut.pieces:
        if p.surface.euler_characteristic() == 1:
            raise ArcError("closed-up arc bounds a disc; the curves are not in minimal position")
    rest = t.beta.edges() - eta.edges()
    owner = set()
    for k, p in enumerate(cut.pieces):
        edges = {p.dart_map[2 * e] >> 1 for e in range(p.surface.num_edges)}
        if rest & edges - cyc.edges():
            owner.add(k)
    if len(owner) != 1:
        raise ArcError("the rest of beta is not on one side of the closed-up arc")
    kb = owner.pop()
    side, beta_side = cut.pieces[1 - kb], cut.pieces[kb]
    V = [q.project(x) for x in side_image(side, h)]
    W = [q.project(x) for x in side_image(beta_side, h)]
    Vb, Wb = f2.rref(V)[0], f2.rref(W)[0]
    if len(Vb) + len(Wb) != q.dim or f2.rank(Vb + Wb) != q.dim:
        raise ArcError("side images do not split the quotient")
    return SeparatingPairing(mu, eta, cyc, side, beta_side, tuple(Vb), tuple(Wb))


# ---------------------------------------------------------------- fates under a cover


@dataclass
class ArcFateReport:
    lifted: List[Walk]
    in_A1: List[bool]
    lifted_classes: List[Optional[int]]
    r: int
    r_good: int
    r_bad: int
    certified: List[int]
    split: List[int]
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def good_lifts(self) -> List[int]:
        return [i for i, c in enumerate(self.lifted_classes) if c]

    def summary(self) -> dict:
        return {
            "arcs": len(self.lifted),
            "A1": sum(self.in_A1),
            "A1_good": len(self.good_lifts),
            "r": self.r,
            "r_good": self.r_good,
            "r_bad": self.r_bad,
            "certified": len(self.certified),
            "split": len(self.split),
        }


def lift_arc(cover: DoubleCover, t1: CurveArcTriple, arc: BetaArc) -> Walk:
    """The piece of the based lift of alpha lying over ``arc``."""
    a1 = t1.alpha.darts
    L = len(a1)
    seg = [a1[(arc.start + k) % L] for k in range(len(arc))]
    return Walk.of(t1.surface, seg)


def arc_fates(
    cover: DoubleCover,
    t0: CurveArcTriple,
    t1: CurveArcTriple,
    arcset: ArcSet,
    pairings: Dict[int, SeparatingPairing],
    phi: int,
    h1_lift: H1Space,
    q1: QuotientSpace,
    beta1_class: int,
) -> ArcFateReport:
    s1 = t1.surface
    beta_vertices = {s1.origin(d) for d in t1.beta.darts}
    lifted, in_a1, classes = [], [], []
    r = r_good = r_bad = 0
    for arc, c0 in zip(arcset.arcs, arcset.classes):
        w = lift_arc(cover, t1, arc)
        lifted.append(w)
        ok = w.start in beta_vertices and w.end in beta_vertices
        in_a1.append(ok)
        if ok:
            classes.append(relative_class(w, t1.beta, h1_lift, q1))
        else:
            classes.append(None)
            r += 1
            if c0:
                r_good += 1
            else:
                r_bad += 1
    split, certified = [], []
    for i, (arc, c0) in enumerate(zip(arcset.arcs, arcset.classes)):
        if c0:
            continue
        pr = pairings[arc.index]
        if not splits(phi, pr.V, pr.W):
            continue
        split.append(i)
        if not in_a1[i]:
            continue
        eta1, _ = lift_walk(cover, pr.eta, lifted[i].end & 1)
        cyc = concatenate(lifted[i], eta1, s1)
        cl = h1_lift.class_of(cyc)
        if cl not in (0, beta1_class):
            certified.append(i)
    bad = len(arcset.bad)
    good0 = len(arcset.good)
    rep = ArcFateReport(lifted, in_a1, classes, r, r_good, r_bad, certified, split)
    rep.checks["r=r_good+r_bad"] = r == r_good + r_bad
    rep.checks["split>=ceil(3b/7)"] = len(split) >= ceil_div(3 * bad, 7)
    rep.checks["certified>=ceil(3b/7)-r_bad"] = len(certified) >= ceil_div(3 * bad, 7) - r_bad
    rep.checks["split lifts are good"] = all(i in certified for i in split if in_a1[i])
    rep.checks["good arcs stay good"] = all(
        classes[i] for i, c0 in enumerate(arcset.classes) if c0 and in_a1[i]
    )
    rep.checks["|A1g|>=|A0g|+ceil(3b/7)-r"] = len(rep.good_lifts) >= good0 + ceil_div(3 * bad, 7) - r
    rep.checks["N1<=N0-r"] = t1.n <= t0.n - r
    return rep
