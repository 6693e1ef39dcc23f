import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from nilcover import corpus
from nilcover.builders import one_vertex_polygon, random_weights, triangulated_polygon, triple_from_weights
from nilcover.homology import H1Space
from nilcover.surface import (
    NonTransverseError,
    NotSeparatingError,
    Surface,
    SurfaceError,
    Walk,
    concatenate,
    crossings,
    cut_along,
    double,
    finger_move,
    insert_handles,
    is_minimal_position,
    is_simple_closed,
    isotopy_annulus,
    make_triple,
    puncture,
    reduce_to_minimal,
    reglue,
    regions,
)


def cyclic(rot):
    out = []
    for r in rot:
        r = list(r)
        k = r.index(min(r))
        out.append(tuple(r[k:] + r[:k]))
    return sorted(out)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_polygon_surfaces(g):
    s = one_vertex_polygon(g)
    assert (s.num_vertices, s.num_edges, len(s.faces)) == (1, 2 * g, 1)
    assert s.genus() == g and s.is_closed
    t = triangulated_polygon(g)
    assert t.euler_characteristic() == 2 - 2 * g
    assert all(len(f) == 3 for f in t.faces)


def test_face_tracing_follows_rotation():
    s = triangulated_polygon(2)
    for f, walk in enumerate(s.faces):
        for i, d in enumerate(walk):
            assert s.face_next(d) == walk[(i + 1) % len(walk)]
            assert s.face_of(d) == f


def test_bad_rotation_data():
    with pytest.raises(SurfaceError):
        Surface([[0, 0]])
    with pytest.raises(SurfaceError):
        Surface([[0, 1, 2]])
    with pytest.raises(SurfaceError):
        Surface([[0, 1], [2, 3]])  # two components


def test_walk_checks():
    t = corpus.load("g2-N2")
    s = t.surface
    with pytest.raises(SurfaceError):
        Walk.of(s, [])
    d = s.faces[0][0]
    e = next(e for e in range(s.num_darts) if s.origin(e) != s.head(d))
    with pytest.raises(SurfaceError):
        Walk.of(s, [d, e])
    face = Walk.of(s, s.faces[0])
    assert face.is_closed and face.reversed().reversed() == face
    assert is_simple_closed(s, t.alpha)
    assert not is_simple_closed(s, t.alpha.then(t.alpha))


def test_concatenate_cancels_backtracks():
    s = triangulated_polygon(2)
    a, b = s.faces[0][0], s.faces[0][1]
    mu = Walk.of(s, [a, b])
    eta = Walk.of(s, [b ^ 1, a ^ 1])
    assert concatenate(mu, eta, s).darts == ()


def test_single_crossing():
    t = corpus.load("g2-N1")
    assert t.n == 1
    (p,) = t.crossing_set
    assert t.surface.degree(p.vertex) == 4


def test_two_crossings_and_minimality():
    t = corpus.load("g2-N2")
    assert t.n == 2
    assert len({p.vertex for p in t.crossing_set}) == 2
    ok, wit = is_minimal_position(t.alpha, t.beta, t.surface)
    assert ok and wit is None


def test_shared_edge_is_not_transverse():
    t = corpus.load("g2-N2")
    with pytest.raises(NonTransverseError):
        crossings(t.alpha, t.alpha, t.surface)


def test_wiggled_pair_reduces_by_one_bigon():
    t = corpus.load("g2-wiggled")
    assert t.n == 4
    ok, wit = is_minimal_position(t.alpha, t.beta, t.surface)
    assert not ok and wit.kind == "bigon" and wit.region.corners == 2
    t2, cs = reduce_to_minimal(t)
    assert t2.n == len(cs) == 2
    assert is_minimal_position(t2.alpha, t2.beta, t2.surface)[0]
    h0, h2 = H1Space(t.surface), H1Space(t2.surface)
    assert h0.dim == h2.dim == 4
    # a minimal pair is a fixpoint
    t3, _ = reduce_to_minimal(t2)
    assert t3.n == 2


def test_disjoint_pair_is_minimal():
    t = corpus.load("g2-N0-diff")
    assert t.n == 0
    assert is_minimal_position(t.alpha, t.beta, t.surface)[0]
    assert reduce_to_minimal(t)[0].n == 0


def test_curve_bounding_a_disc_is_flagged():
    base = corpus.load("g3-N0-bp")
    s = base.surface
    on_curves = {s.origin(d) for d in base.alpha.darts + base.beta.darts}
    f = next(f for f in s.filled_faces() if not {s.origin(d) for d in s.faces[f]} & on_curves)
    disc = Walk.of(s, s.faces[f])
    ok, wit = is_minimal_position(disc, base.beta, s)
    assert not ok and wit.kind == "disc"


def test_cut_separating_curve():
    t = corpus.load("g2-sep")
    h = H1Space(t.surface)
    assert h.class_of(t.beta) == 0
    cut = cut_along([t.beta], t.surface)
    assert [(p.surface.euler_characteristic(), p.surface.genus(), p.surface.num_boundary) for p in cut.pieces] == [
        (-1, 1, 1),
        (-1, 1, 1),
    ]
    assert cyclic(reglue(cut).rotations) == cyclic(t.surface.rotations)
    with pytest.raises(NotSeparatingError):
        cut_along([t.alpha], t.surface)


def test_isotopic_copy_is_detected():
    t = corpus.load("g3-N0-bp")
    assert isotopy_annulus(t.alpha, t.beta, t.surface) is None
    s = triangulated_polygon(2)
    rng = random.Random(4437)
    wa = random_weights(s, rng, 4)
    wb = random_weights(s, rng, 4)
    pair = triple_from_weights(s, wa, wb, rng)
    assert pair.n == 0 and isotopy_annulus(pair.alpha, pair.beta, pair.surface) is not None


@pytest.mark.parametrize("name,genus,holes", [("punctured-torus", 1, 1), ("pants", 0, 3)])
def test_doubling(name, genus, holes):
    t = corpus.load(name)
    s = t.surface
    assert (s.genus(), s.num_boundary) == (genus, holes)
    s2, emb = double(s)
    assert s2.is_closed and s2.genus() == 2 * genus + holes - 1
    a2 = emb.include(s2, t.alpha)
    assert emb.retract(a2) == t.alpha
    with pytest.raises(SurfaceError):
        double(s2)


def test_handles_and_punctures():
    s = triangulated_polygon(1)
    s3 = insert_handles(s, s.faces[0][0], 2)
    assert s3.genus() == 3 and s3.is_closed
    p = puncture(s, 0)
    assert p.num_boundary == 1 and p.genus() == 1
    with pytest.raises(SurfaceError):
        puncture(p, p.boundary_faces[0])


def test_make_triple_rebases():
    t = corpus.load("g2-N2")
    v = t.surface.origin(t.alpha.darts[1])
    t2 = make_triple(t.surface, t.alpha.darts, t.beta.darts, [], v=v, w=t.beta.start) if v == t.beta.start else None
    t3 = make_triple(t.surface, t.alpha.darts, t.beta.darts, t.tau.darts)
    assert t3.n == t.n
    assert t2 is None or t2.v == v


# ---- properties


@st.composite
def rotation_systems(draw):
    edges = draw(st.integers(1, 7))
    darts = draw(st.permutations(list(range(2 * edges))))
    nv = draw(st.integers(1, 2 * edges))
    cuts = sorted(draw(st.sets(st.integers(1, 2 * edges - 1), min_size=nv - 1, max_size=nv - 1))) if nv > 1 else []
    bounds = [0, *cuts, 2 * edges]
    return [darts[a:b] for a, b in zip(bounds, bounds[1:])]


@settings(max_examples=200)
@given(rotation_systems())
def test_random_rotation_systems(rot):
    assume(all(rot))
    try:
        s = Surface(rot)
    except SurfaceError:
        return  # disconnected
    assert sorted(d for f in s.faces for d in f) == list(range(s.num_darts))
    chi = s.euler_characteristic()
    assert chi <= 2 and chi % 2 == 0
    glued = Surface.from_faces(s.faces)
    assert cyclic(glued.rotations) == cyclic(s.rotations)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6))
def test_random_overlays(seed):
    while True:
        try:
            t = corpus.from_seed(2, 3, seed)
            break
        except (ValueError, StopIteration):
            seed += 1
    s = t.surface
    assert s.genus() == 2 and s.is_closed
    assert is_simple_closed(s, t.alpha) and is_simple_closed(s, t.beta)
    assert t.tau.start == t.v and t.tau.end == t.w
    assert is_minimal_position(t.alpha, t.beta, s)[0]
    # the mod-2 intersection pairing counts crossings mod 2
    h = H1Space(s)
    assert h.pairing(h.class_of(t.alpha), h.class_of(t.beta)) == t.n % 2


def test_finger_move_adds_two_bigons():
    base = triangulated_polygon(1)
    t = triple_from_weights(base, [0, 1, 1], [2, 1, 1], random.Random(0), coarsen=False)
    assert t.n == 2
    h = H1Space(t.surface)
    t2, tip = finger_move(t, 0, 0)
    s2 = t2.surface
    assert s2.euler_characteristic() == 0 and t2.n == 4
    # algebraic intersection is unchanged
    assert sum(p.sign for p in t2.crossing_set) == sum(p.sign for p in t.crossing_set)
    assert not is_minimal_position(t2.alpha, t2.beta, s2)[0]
    # the move is an isotopy: classes are unchanged and bigon removal undoes it
    h2 = H1Space(s2)
    assert (h2.class_of(t2.alpha) == 0) == (h.class_of(t.alpha) == 0)
    assert reduce_to_minimal(t2)[0].n == 2
    corners = sorted(r.corners for r in regions(s2, {"alpha": t2.alpha, "beta": t2.beta}))
    assert corners == [2, 2, 4, 8]
    # the tip corner sits on the new vertex inside one of the bigons
    assert s2.head(tip) not in t2.crossing_set.vertices
    assert len(s2.faces[s2.face_of(tip)]) == 3


def test_finger_move_needs_a_shared_face():
    t = corpus.load("g2-N10")
    s = t.surface
    for i, a in enumerate(t.alpha.darts):
        for j, b in enumerate(t.beta.darts):
            if not {s.face_of(a), s.face_of(a ^ 1)} & {s.face_of(b), s.face_of(b ^ 1)}:
                with pytest.raises(SurfaceError, match="share a face"):
                    finger_move(t, i, j)
                return
    pytest.fail("every pair of darts shares a face")
