"""Iterated double covers that resolve the intersection of two curves.

Each level picks a mod-2 class on the current surface, builds the double
cover, and lifts the triple from the basepoint.  The tower stops at the first
level where exactly one of the two curves fails to lift to a closed curve.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import bounds, f2
from .arcs import (
    ArcSet,
    SeparatingPairing,
    arc_fates,
    beta_arcs,
    classified,
    make_separating_pairing,
    select_disjoint,
    side_image,
)
from .covering import (
    CLOSED,
    PARTIAL,
    DoubleCover,
    LiftResult,
    Tower,
    build_double_cover,
    fiber_endpoints,
    lift_walk,
    lift_triple,
    monodromy,
)
from .functionals import (
    DEFAULT_EXHAUSTIVE_CAP,
    SplittingFamily,
    ceil_div,
    find_half_functional,
    find_splitting_functional,
)
from .homology import Cocycle, H1Space, cocycle_from_functional, quotient_by_beta
from .nilpotent import DEFAULT_GROUP_CAP, normal_core_report
from .surface import CurveArcTriple, Surface, Walk, cut_along

CERT_FORMAT = "nilcover-tower/1"


class TowerError(ValueError):
    pass


@dataclass(frozen=True)
class TowerConfig:
    seed: int = 0
    enum_cap: int = DEFAULT_EXHAUSTIVE_CAP
    group_cap: int = DEFAULT_GROUP_CAP
    monodromy_max_k: int = 8
    max_levels: int = 64


@dataclass
class Level:
    index: int
    step: str
    cover: DoubleCover
    phi: int
    classification: str
    n_before: int
    n_after: Optional[int]
    checks: Dict[str, bool] = field(default_factory=dict)
    info: Dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "level": self.index,
            "step": self.step,
            "cocycle": self.cover.psi.hex(),
            "edges": self.cover.base.num_edges,
            "classification": self.classification,
            "N_before": self.n_before,
            "N_after": self.n_after,
            "checks": dict(sorted(self.checks.items())),
            "info": self.info,
        }


# ---------------------------------------------------------------- functional choices


def different_functional(ca: int, cb: int) -> int:
    """Smallest functional separating two distinct classes."""
    x = ca ^ cb
    if not x:
        raise TowerError("the classes agree; no functional separates them")
    return x & -x


def _side_functionals(P: Sequence[int], Q: Sequence[int], kill: Sequence[int],
                      dim: int = 0, enum_cap: int = 0) -> Iterator[int]:
    """Functionals nonzero somewhere on P and on Q and zero on ``kill``.

    In dimension at most ``enum_cap`` they come in increasing order, so the
    first one accepted is the smallest; otherwise they are solved for pairwise.
    """
    if dim and dim <= enum_cap:
        for f in range(1, 1 << dim):
            if (any(f2.dot(f, u) for u in P) and any(f2.dot(f, w) for w in Q)
                    and not any(f2.dot(f, z) for z in kill)):
                yield f
        return
    seen = set()
    for u in P:
        if not u:
            continue
        for w in Q:
            if not w:
                continue
            f = f2.solve([u, w, *kill], [1, 1] + [0] * len(kill))
            if f and f not in seen:
                seen.add(f)
                yield f


def _two_sides(cycles: Sequence[Walk], s: Surface, h: H1Space):
    cut = cut_along(cycles, s)
    if len(cut.pieces) != 2:
        raise TowerError(f"cutting gave {len(cut.pieces)} pieces instead of 2")
    for p in cut.pieces:
        if p.surface.euler_characteristic() == 1:
            raise TowerError("a curve bounds a disc")
        if p.surface.euler_characteristic() == 0:
            raise TowerError("the curves cobound an annulus")
    return cut, side_image(cut.pieces[0], h), side_image(cut.pieces[1], h)


# ---------------------------------------------------------------- builder


class _Builder:
    def __init__(self, t: CurveArcTriple, config: TowerConfig):
        self.base = t
        self.cur = t
        self.config = config
        self.rng = random.Random(config.seed)
        self.levels: List[Level] = []
        self._h: Optional[H1Space] = None

    @property
    def h(self) -> H1Space:
        if self._h is None:
            self._h = H1Space(self.cur.surface, root=self.cur.v)
        return self._h

    def classes(self) -> Tuple[int, int]:
        return self.h.class_of(self.cur.alpha), self.h.class_of(self.cur.beta)

    @property
    def done(self) -> bool:
        return bool(self.levels) and self.levels[-1].classification != CLOSED

    def push(self, step: str, phi: int, checks=None, info=None) -> LiftResult:
        if len(self.levels) >= self.config.max_levels:
            raise TowerError(f"tower exceeded {self.config.max_levels} levels")
        if phi == 0:
            raise TowerError(f"{step}: zero functional")
        psi = cocycle_from_functional(phi, self.h)
        cov = build_double_cover(self.cur.surface, psi)
        res = lift_triple(cov, self.cur)
        n0 = self.cur.n
        n1 = res.triple.n if res.triple is not None else None
        checks = dict(checks or {})
        if n1 is not None:
            checks["N_after<=N_before"] = n1 <= n0
        lvl = Level(len(self.levels), step, cov, phi, res.classification.kind, n0, n1, checks, dict(info or {}))
        self.levels.append(lvl)
        if res.triple is not None:
            self.cur = res.triple
            self._h = None
        return res

    # ---- steps

    def step_different(self) -> LiftResult:
        ca, cb = self.classes()
        phi = different_functional(ca, cb)
        res = self.push("different", phi)
        self.levels[-1].checks["partially closed"] = res.classification.kind == PARTIAL
        return res

    def step_sep(self, which: str) -> LiftResult:
        t, h = self.cur, self.h
        delta = t.alpha if which == "alpha" else t.beta
        if h.class_of(delta):
            raise TowerError(f"{which} is not null-homologous")
        _, P, Q = _two_sides([delta], t.surface, h)
        for phi in _side_functionals(P, Q, [], h.dim, self.config.enum_cap):
            psi = cocycle_from_functional(phi, h)
            cov = build_double_cover(t.surface, psi)
            res = lift_triple(cov, t)
            lifted = res.alpha if which == "alpha" else res.beta
            if not lifted.is_closed:
                continue
            h1 = H1Space(cov.total)
            if h1.class_of(lifted) and h1.class_of(cov.deck_walk(lifted)):
                res = self.push("sep_" + which, phi, {"lift not null-homologous": True})
                return res
        raise TowerError(f"no class makes the lift of {which} non-separating")

    def step_bp(self) -> LiftResult:
        t, h = self.cur, self.h
        ca, cb = self.classes()
        if t.n != 0 or ca != cb or ca == 0:
            raise TowerError("bounding-pair step needs disjoint homologous nonzero curves")
        _, P, Q = _two_sides([t.alpha, t.beta], t.surface, h)
        for phi in _side_functionals(P, Q, [ca], h.dim, self.config.enum_cap):
            psi = cocycle_from_functional(phi, h)
            cov = build_double_cover(t.surface, psi)
            res = lift_triple(cov, t)
            if res.triple is None:
                continue
            h1 = H1Space(res.triple.surface)
            if h1.class_of(res.triple.alpha) != h1.class_of(res.triple.beta):
                return self.push("bounding_pair", phi, {"lifted classes differ": True})
        raise TowerError("no class separates the lifts of the bounding pair")

    # ---- basic move

    def make_good_step(self) -> Tuple[ArcSet, LiftResult, dict]:
        t0, h0 = self.cur, self.h
        _, cb = self.classes()
        q0 = quotient_by_beta(h0, cb)
        A0 = classified(select_disjoint(beta_arcs(t0)), t0, h0, q0)
        pairings: Dict[int, SeparatingPairing] = {}
        for arc in A0.bad:
            pairings[arc.index] = make_separating_pairing(arc, t0, h0, q0)
        info = {"A0": len(A0.arcs), "A0_good": len(A0.good), "A0_bad": len(A0.bad), "X_dim": q0.dim}
        if pairings:
            fam = SplittingFamily(q0.dim, tuple((p.V, p.W) for p in pairings.values()))
            sr = find_splitting_functional(fam, self.config.enum_cap, self.rng)
            phi_x = sr.functional
            info.update(search=sr.mode, split=sr.count, split_needed=sr.threshold)
        else:
            phi_x = 1
            info.update(search="none")
        phi = q0.pull_back(phi_x)
        res = self.push("make_good", phi, info=info)
        if res.classification.kind != CLOSED:
            raise TowerError("make-good cover must lift both curves to closed curves")
        t1 = res.triple
        h1 = self.h
        b1 = h1.class_of(t1.beta)
        fates = None
        if b1 and h1.class_of(t1.alpha) == b1:
            q1 = quotient_by_beta(h1, b1)
            fates = arc_fates(self.levels[-1].cover, t0, t1, A0, pairings, phi_x, h1, q1, b1)
            self.levels[-1].checks.update(fates.checks)
            self.levels[-1].info.update(fates.summary())
        return A0, res, {"fates": fates}

    def resolve_isect_step(self, fates) -> LiftResult:
        t1, h1 = self.cur, self.h
        _, b1 = self.classes()
        q1 = quotient_by_beta(h1, b1)
        good = fates.good_lifts
        vectors = [fates.lifted_classes[i] for i in good]
        sr = find_half_functional(vectors, q1.dim, self.config.enum_cap, self.rng)
        phi = q1.pull_back(sr.functional)
        n1 = t1.n
        info = {"A1_good": len(good), "hit": sr.count, "hit_needed": sr.threshold, "search": sr.mode}
        res = self.push("resolve_isect", phi, info=info)
        if res.triple is not None:
            self.levels[-1].checks["N2<=N1-ceil(|A1g|/2)"] = res.triple.n <= n1 - ceil_div(len(good), 2)
        return res

    def basic_move(self) -> None:
        n0 = self.cur.n
        start = len(self.levels)
        _, res, extra = self.make_good_step()
        fates = extra["fates"]
        ca, cb = self.classes()
        if ca != cb:
            self.step_different()
            return
        if not fates.good_lifts:
            self.levels[start].info["q"] = 1
        else:
            res = self.resolve_isect_step(fates)
            if res.triple is None:
                return
            ca, cb = self.classes()
        self.levels[-1].checks["28*N_after<=25*N_before"] = bounds.basic_move_ok(self.cur.n, n0)

    # ---- driver

    def step_one(self) -> None:
        while not self.done:
            ca, cb = self.classes()
            if ca != cb:
                self.step_different()
            elif self.cur.n == 0:
                self.step_bp()
            elif self.cur.n == 1:
                raise TowerError("one crossing with equal classes contradicts the intersection pairing")
            else:
                self.basic_move()

    def run(self) -> None:
        s = self.base.surface
        if s.is_closed and s.genus() < 2:
            raise TowerError("closed surfaces of genus below 2 are out of scope")
        ca, cb = self.classes()
        if ca == 0 or cb == 0:
            which = "alpha" if ca == 0 else "beta"
            res = self.step_sep(which)
            if res.triple is None:
                return
            ca, cb = self.classes()
            if (ca if which == "alpha" else cb) == 0:
                raise TowerError(f"separating step left {which} null-homologous")
        self.step_one()


# ---------------------------------------------------------------- results


@dataclass
class TowerCertificate:
    triple: CurveArcTriple
    config: TowerConfig
    levels: List[Level]
    witness_displacement: int
    monodromy_report: Optional[dict]
    checks: Dict[str, bool]

    @property
    def k(self) -> int:
        return len(self.levels)

    @property
    def tower(self) -> Tower:
        return Tower(tuple(l.cover for l in self.levels))

    @property
    def all_checks(self) -> bool:
        return all(self.checks.values()) and all(all(l.checks.values()) for l in self.levels)

    def summary(self) -> dict:
        m = self.monodromy_report or {}
        return {
            "N0": self.triple.n,
            "k": self.k,
            "k_bound": f"{bounds.tower_length_bound(self.triple.n):.6f}",
            "ell": m.get("ell"),
            "ell_bound": 2**self.k - 1,
            "class": m.get("class"),
            "depth_limit": bounds.depth_limit(self.k),
            "witness_displacement": self.witness_displacement,
            "all_checks": self.all_checks,
        }

    def as_dict(self) -> dict:
        return {
            "format": CERT_FORMAT,
            "input": self.triple.to_dict(),
            "config": {"seed": self.config.seed, "enum_cap": self.config.enum_cap,
                       "group_cap": self.config.group_cap},
            "levels": [l.as_dict() for l in self.levels],
            "final": self.levels[-1].classification,
            "monodromy": self.monodromy_report,
            "checks": dict(sorted(self.checks.items())),
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=1)


def witness_displacement(t: CurveArcTriple, covers: Sequence[DoubleCover]) -> int:
    """Fiber label reached by lifting the witness loop from the based point."""
    w = t.witness_word()
    return fiber_endpoints(covers, w)[0]


def _based_witness_endpoint(t: CurveArcTriple, covers: Sequence[DoubleCover]) -> int:
    w = t.witness_word()
    for c in covers:
        w, _ = lift_walk(c, w, 0)
    return w.end - (t.v << len(covers))


def monodromy_report(t: CurveArcTriple, covers: Sequence[DoubleCover], group_cap: int) -> dict:
    h = H1Space(t.surface, root=t.v)
    gens = h.generator_loops()
    mono = monodromy(Tower(tuple(covers)), gens)
    core = normal_core_report(mono.perms, len(covers), group_cap)
    return {
        "generators": len(gens),
        "transitive": mono.is_transitive(),
        "order": core.order,
        "ell": core.ell,
        "class": core.nil_class,
        "checks": {name: ok for name, ok in core.checks},
        "note": core.note,
    }


def build_resolving_tower(t: CurveArcTriple, config: Optional[TowerConfig] = None) -> TowerCertificate:
    config = config or TowerConfig()
    b = _Builder(t, config)
    b.run()
    levels = b.levels
    covers = [l.cover for l in levels]
    checks: Dict[str, bool] = {}
    checks["final level partially closed"] = levels[-1].classification == PARTIAL
    checks["earlier levels closed"] = all(l.classification == CLOSED for l in levels[:-1])
    checks["k<=2log(N)+1"] = bounds.tower_length_ok(len(levels), t.n)
    disp = _based_witness_endpoint(t, covers)
    checks["witness displaced"] = disp != 0
    mono = None
    if len(levels) <= config.monodromy_max_k:
        mono = monodromy_report(t, covers, config.group_cap)
        checks["monodromy transitive"] = mono["transitive"]
        checks.update({"group: " + k: v for k, v in mono["checks"].items()})
        disp_all = witness_displacement(t, covers)
        checks["witness moves the based fiber point"] = disp_all == disp != 0
    return TowerCertificate(t, config, levels, disp, mono, checks)


@dataclass(frozen=True)
class DriverReport:
    certificate: TowerCertificate
    chain: list
    depth_bound: int

    def as_dict(self) -> dict:
        return {
            "summary": self.certificate.summary(),
            "depth_bound": self.depth_bound,
            "chain": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.chain],
        }


def depth_driver(t: CurveArcTriple, d: Optional[int] = None,
                         config: Optional[TowerConfig] = None) -> DriverReport:
    """Build the tower and run the numeric consistency chain.

    ``d`` is the depth of the witness in the lower central series when known.
    Without it, the report gives the largest depth the tower allows.
    """
    cert = build_resolving_tower(t, config)
    m = cert.monodromy_report or {}
    ell, cls = m.get("ell"), m.get("class")
    limit = bounds.depth_limit(cert.k)
    if ell is not None and ell >= 2:
        limit = min(limit, ell - 1)
    if cls is not None:
        limit = min(limit, max(cls, 1))
    chain = []
    if d is not None:
        chain = bounds.consistency_chain(t.n, cert.k, d, ell, cls, not t.surface.is_closed)
    return DriverReport(cert, chain, limit)


# ---------------------------------------------------------------- validation


def validate_certificate(data: dict) -> List[str]:
    """Replay a certificate level by level; return the problems found."""
    from .io import triple_from_dict

    problems: List[str] = []
    if data.get("format") != CERT_FORMAT:
        return [f"unknown certificate format {data.get('format')!r}"]
    t = triple_from_dict(data["input"])
    cur = t
    covers = []
    levels = data.get("levels", [])
    if not levels:
        return ["certificate has no levels"]
    for i, lv in enumerate(levels):
        s = cur.surface
        if lv.get("edges") != s.num_edges:
            problems.append(f"level {i}: expected {s.num_edges} edges, certificate says {lv.get('edges')}")
            break
        vals = int(lv["cocycle"], 16) if lv["cocycle"] else 0
        if vals >> s.num_edges:
            problems.append(f"level {i}: cocycle has bits beyond the edge count")
            break
        psi = Cocycle(s, vals)
        try:
            psi.check()
            cov = build_double_cover(s, psi)
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            problems.append(f"level {i}: {exc}")
            break
        covers.append(cov)
        res = lift_triple(cov, cur)
        if res.classification.kind != lv["classification"]:
            problems.append(f"level {i}: lift is {res.classification.kind}, certificate says {lv['classification']}")
            break
        if res.triple is not None:
            if res.triple.n != lv["N_after"]:
                problems.append(f"level {i}: N_after is {res.triple.n}, certificate says {lv['N_after']}")
            cur = res.triple
        elif i != len(levels) - 1:
            problems.append(f"level {i}: lift is not closed but the tower continues")
            break
    else:
        if levels[-1]["classification"] != PARTIAL:
            problems.append("final level is not partially closed")
        if not bounds.tower_length_ok(len(levels), t.n):
            problems.append(f"k={len(levels)} exceeds the tower length bound for N={t.n}")
        if _based_witness_endpoint(t, covers) == 0:
            problems.append("witness loop lifts to a closed loop")
    return problems


def certificate_from_json(text: str) -> dict:
    return json.loads(text)
