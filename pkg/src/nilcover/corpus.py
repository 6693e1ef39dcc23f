"""The bundled example pairs and seeded random pairs.

Every named example is rebuilt from a seed by the overlay generator or by a
small explicit construction; the frozen JSON copies under ``data/`` are what
the command line and the tests read.
"""

from __future__ import annotations

import json
import random
from importlib import resources
from typing import Callable, Dict, Iterator, List, Tuple

from .builders import _bfs_path, random_weights, simplify, triangulated_polygon, triple_from_weights
from .homology import H1Space
from .io import triple_from_dict
from .surface import (
    CurveArcTriple,
    Surface,
    Walk,
    double,
    finger_move,
    free_reduce,
    insert_handles,
    isotopy_annulus,
    puncture,
    regions,
)


def from_seed(genus: int, top: int, seed: int, minimize: bool = True, punctures: int = 0) -> CurveArcTriple:
    base = triangulated_polygon(genus)
    rng = random.Random(seed)
    wa = random_weights(base, rng, top)
    wb = random_weights(base, rng, top)
    if wa is None or wb is None:
        raise ValueError(f"seed {seed} gives no admissible weights")
    return triple_from_weights(base, wa, wb, rng, puncture_faces=punctures, minimize=minimize)


def with_handle(t: CurveArcTriple) -> CurveArcTriple:
    """Attach a handle at a corner away from both curves."""
    s = t.surface
    on_curves = {s.origin(d) for d in t.alpha.darts + t.beta.darts}
    d = next(d for f in s.filled_faces() for d in s.faces[f] if s.head(d) not in on_curves)
    s2 = insert_handles(s, d, 1)
    return CurveArcTriple(s2, Walk.of(s2, t.alpha.darts), Walk.of(s2, t.beta.darts),
                          Walk.of(s2, t.tau.darts, start=t.v) if t.tau.darts else Walk((), t.v, t.v))


def _loop_triple(s: Surface, loops: List[int]) -> CurveArcTriple:
    a = Walk.of(s, [loops[0]])
    b = Walk.of(s, [loops[1]])
    tau = free_reduce(_bfs_path(s, a.start, b.start))
    return CurveArcTriple(s, a, b, Walk.of(s, tau, start=a.start) if tau else Walk((), a.start, a.start))


def _punctures(s: Surface, count: int) -> Tuple[Surface, List[int]]:
    loops = []
    for _ in range(count):
        f = s.filled_faces()[0]
        s = puncture(s, f)
        loops.append(2 * (s.num_edges - 1))
    return s, loops


def pants() -> CurveArcTriple:
    """Sphere with three holes; alpha and beta run around two of them."""
    s = Surface([[0], [1]])
    s, loops = _punctures(s, 3)
    return _loop_triple(s, loops)


def twice_punctured_torus() -> CurveArcTriple:
    s, loops = _punctures(triangulated_polygon(1), 2)
    return _loop_triple(s, loops)


def bounding_pair() -> CurveArcTriple:
    """Genus 3: the two hole curves of a twice-punctured torus, seen in its double."""
    return doubled_triple(twice_punctured_torus())


def both_separating() -> CurveArcTriple:
    """Two null-homologous curves meeting four times on genus 2."""
    base = triangulated_polygon(2)
    return triple_from_weights(base, [0, 2, 2, 2, 2, 2, 4, 2, 2], [0, 0, 2, 2, 0, 0, 0, 2, 2], random.Random(0))


def filled_bigons(both: bool = True) -> CurveArcTriple:
    """A finger move on a torus pair with a handle in its tip bigon.

    The tip becomes a one-holed torus with two corners, so the alpha arc
    along it closes up to a separating curve.  With ``both`` the base bigon
    gets a handle too and the pair is in minimal position on genus 3;
    otherwise the base bigon stays and the surface has genus 2.
    """
    base = triangulated_polygon(1)
    t = triple_from_weights(base, [0, 1, 1], [2, 1, 1], random.Random(0), coarsen=False)
    t, tip = finger_move(t, 0, 0)
    s = t.surface
    corners = [tip]
    if both:
        cross = set(t.crossing_set.vertices)
        corners = [next(d for f in r.faces for d in s.faces[f] if s.head(d) not in cross)
                   for r in regions(s, {"alpha": t.alpha, "beta": t.beta}) if r.is_disc and r.corners == 2]
    for d in corners:
        s = insert_handles(s, d, 1)
    tau = Walk.of(s, t.tau.darts, start=t.v) if t.tau.darts else Walk((), t.v, t.v)
    return simplify(CurveArcTriple(s, Walk.of(s, t.alpha.darts), Walk.of(s, t.beta.darts), tau))


def punctured_torus() -> CurveArcTriple:
    base = triangulated_polygon(1)
    return triple_from_weights(base, [1, 0, 1], [1, 2, 1], random.Random(1), puncture_faces=1)


BUILDERS: Dict[str, Callable[[], CurveArcTriple]] = {
    "g2-N0-diff": lambda: from_seed(2, 2, 47),
    "g2-N1": lambda: from_seed(2, 2, 1),
    "g2-N2": lambda: from_seed(2, 3, 640),
    "g2-N4": lambda: from_seed(2, 3, 1325),
    "g2-N6": lambda: from_seed(2, 3, 111),
    "g2-N10": lambda: from_seed(2, 3, 766),
    "g2-sep": lambda: from_seed(2, 3, 1324),
    "g2-wiggled": lambda: from_seed(2, 3, 16, minimize=False),
    "g2-both-sep": both_separating,
    "g2-bad-arc": lambda: filled_bigons(both=False),
    "g3-N2": lambda: with_handle(from_seed(2, 3, 640)),
    "g3-N0-bp": bounding_pair,
    "g3-bad-arc": filled_bigons,
    "punctured-torus": punctured_torus,
    "pants": pants,
}

# pairs meant for the tower; the two holed surfaces go through doubling first
CLOSED_EXAMPLES = [n for n in BUILDERS if n not in ("punctured-torus", "pants")]
BOUNDARY_EXAMPLES = ["punctured-torus", "pants"]


def build(name: str) -> CurveArcTriple:
    return BUILDERS[name]()


def to_json(name: str, t: CurveArcTriple) -> str:
    d = t.to_dict()
    d["name"] = name
    return json.dumps(d, sort_keys=True, indent=1) + "\n"


def names() -> List[str]:
    return list(BUILDERS)


def load(name: str) -> CurveArcTriple:
    text = resources.files("nilcover").joinpath("data", f"{name}.json").read_text()
    return triple_from_dict(json.loads(text))


def load_text(name: str) -> str:
    return resources.files("nilcover").joinpath("data", f"{name}.json").read_text()


def random_pairs(count: int = 50, equal_share: float = 0.5, genus: int = 2, top: int = 3,
                 start: int = 0) -> Iterator[Tuple[int, CurveArcTriple]]:
    """Seeded random pairs; about ``equal_share`` of them have equal mod-2 classes."""
    want_equal = int(count * equal_share)
    want_other = count - want_equal
    seed = start
    while want_equal or want_other:
        try:
            t = from_seed(genus, top, seed)
        except (ValueError, StopIteration):
            seed += 1
            continue
        if t.n == 0 and isotopy_annulus(t.alpha, t.beta, t.surface):
            seed += 1
            continue
        h = H1Space(t.surface)
        equal = h.class_of(t.alpha) == h.class_of(t.beta)
        if equal and want_equal:
            want_equal -= 1
            yield seed, t
        elif not equal and want_other:
            want_other -= 1
            yield seed, t
        seed += 1


def doubled_triple(t: CurveArcTriple) -> CurveArcTriple:
    """The triple carried into the closed double of its surface."""
    s2, emb = double(t.surface)
    return CurveArcTriple(s2, emb.include(s2, t.alpha), emb.include(s2, t.beta), emb.include(s2, t.tau))
