import pytest

from nilcover import corpus, f2
from nilcover.arcs import (
    ArcError,
    beta_arcs,
    classified,
    crossing_sign,
    make_separating_pairing,
    select_disjoint,
)
from nilcover.homology import H1Space, QuotientSpace, quotient_by_beta
from nilcover.surface import is_minimal_position

EQUAL = ["g2-N2", "g2-N4", "g2-N6", "g2-N10", "g3-N2"]


def setup(name):
    t = corpus.load(name)
    h = H1Space(t.surface)
    return t, h, quotient_by_beta(h, h.class_of(t.beta))


@pytest.mark.parametrize("name", EQUAL)
def test_arcs_tile_alpha(name):
    t = corpus.load(name)
    arcs = beta_arcs(t)
    assert len(arcs) == t.n
    crossings = set(t.crossing_set.vertices)
    darts = []
    for a, b in zip(arcs, arcs[1:] + arcs[:1]):
        assert a.p2 == b.p1
        assert a.p1 in crossings and a.p2 in crossings
        assert not {t.surface.origin(d) for d in a.walk.darts[1:]} & crossings
        darts.extend(a.walk.darts)
    start = t.alpha.darts.index(darts[0])
    assert tuple(darts) == t.alpha.darts[start:] + t.alpha.darts[:start]


@pytest.mark.parametrize("name", EQUAL)
@pytest.mark.parametrize("offset", [0, 1])
def test_selected_arcs_share_no_endpoints(name, offset):
    arcs = beta_arcs(corpus.load(name))
    chosen = select_disjoint(arcs, offset)
    assert len(chosen) == len(arcs) // 2
    ends = [p for a in chosen for p in (a.p1, a.p2)]
    assert len(ends) == len(set(ends))


def test_selection_counts():
    assert len(select_disjoint(beta_arcs(corpus.load("g2-N2")))) == 1
    assert len(select_disjoint(beta_arcs(corpus.load("g2-N6")))) == 3


def test_odd_and_empty_arc_sets():
    with pytest.raises(ArcError):
        select_disjoint(beta_arcs(corpus.load("g2-N1")))
    with pytest.raises(ArcError):
        beta_arcs(corpus.load("g2-N0-diff"))


@pytest.mark.parametrize("name", EQUAL)
def test_corpus_arcs_are_good(name):
    t, h, q = setup(name)
    arcs = classified(beta_arcs(t), t, h, q)
    assert not arcs.bad and len(arcs.good) == t.n


def test_same_sign_endpoints_are_refused():
    t, h, q = setup("g2-N2")
    arc = beta_arcs(t)[0]
    assert crossing_sign(t, arc.p1) == crossing_sign(t, arc.p2)
    with pytest.raises(ArcError, match="same sign"):
        make_separating_pairing(arc, t, h, q)


def test_arc_closing_to_a_disc_is_refused():
    # the non-minimal pair: the arc along the bigon closes up to a disc boundary
    t = corpus.load("g2-wiggled")
    assert not is_minimal_position(t.alpha, t.beta, t.surface)[0]
    h = H1Space(t.surface)
    q = QuotientSpace(h, [h.class_of(t.beta)])
    arcs = classified(beta_arcs(t), t, h, q)
    opposite = [a for a in arcs.bad if crossing_sign(t, a.p1) != crossing_sign(t, a.p2)]
    assert opposite
    with pytest.raises(ArcError, match="disc"):
        make_separating_pairing(opposite[0], t, h, q)


def test_crossing_sign_of_other_vertex():
    t = corpus.load("g2-N2")
    other = next(v for v in range(t.surface.num_vertices) if v not in t.crossing_set.vertices)
    with pytest.raises(ArcError):
        crossing_sign(t, other)


def test_bad_arcs_on_filled_bigons():
    t, h, q = setup("g3-bad-arc")
    assert t.n == 4 and t.surface.genus() == 3
    assert h.class_of(t.alpha) == h.class_of(t.beta) != 0
    assert is_minimal_position(t.alpha, t.beta, t.surface)[0]
    arcs = beta_arcs(t)
    assert len(classified(arcs, t, h, q).bad) == 2
    for offset in (0, 1):
        sel = classified(select_disjoint(arcs, offset), t, h, q)
        assert len(sel.bad) == 1 and len(sel.good) == 1


def test_separating_pairing_of_a_bad_arc():
    t, h, q = setup("g3-bad-arc")
    assert q.dim == 5
    for arc in classified(beta_arcs(t), t, h, q).bad:
        assert crossing_sign(t, arc.p1) != crossing_sign(t, arc.p2)
        pr = make_separating_pairing(arc, t, h, q)
        assert h.class_of(pr.cycle) == 0
        # the handle side is a one-holed torus, the other side holds the rest
        assert pr.side.surface.genus() == 1 and pr.beta_side.surface.genus() == 2
        assert len(pr.V) == 2 and len(pr.W) == 3
        assert f2.rank(list(pr.V) + list(pr.W)) == q.dim


def test_genus_two_bad_arc_splits_into_two_handles():
    t, h, q = setup("g2-bad-arc")
    assert t.surface.genus() == 2 and q.dim == 3
    assert h.class_of(t.alpha) == h.class_of(t.beta)
    bad = classified(beta_arcs(t), t, h, q).bad
    assert len(bad) == 2
    outcomes = []
    for arc in bad:
        try:
            pr = make_separating_pairing(arc, t, h, q)
        except ArcError as exc:
            # the base of the finger is an unfilled bigon
            assert "disc" in str(exc)
            outcomes.append("disc")
            continue
        assert (pr.side.surface.genus(), pr.beta_side.surface.genus()) == (1, 1)
        assert pr.side.surface.euler_characteristic() == pr.beta_side.surface.euler_characteristic() == -1
        assert (len(pr.V), len(pr.W)) == (2, 1)
        assert f2.rank(list(pr.V) + list(pr.W)) == 3
        assert len(pr.cycle) == len(arc.walk) + len(pr.eta)
        outcomes.append("pair")
    assert sorted(outcomes) == ["disc", "pair"]
