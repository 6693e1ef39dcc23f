import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from nilcover import corpus
from nilcover.covering import Tower, monodromy
from nilcover.homology import H1Space

from nilcover.nilpotent import (
    GroupCapError,
    TrivialWordError,
    brute_lower_central_series,
    commutator,
    format_word,
    group_closure,
    inverse,
    lcs_degree,
    left_normed,
    lower_central_series,
    magnus,
    nilpotency_class,
    normal_core_report,
    parse_word,
    reduce_word,
)
from nilcover.tower import build_resolving_tower

A, B = (1,), (2,)


def test_magnus_small_examples():
    assert magnus(A, 2, 2).as_dict() == {(): 1, (1,): 1}
    assert magnus(parse_word("abAB"), 2, 2).as_dict() == {(): 1, (1, 2): 1, (2, 1): -1}
    assert magnus(parse_word("aA"), 2, 4).as_dict() == {(): 1}


def test_word_parsing_round_trip():
    assert parse_word("abAB") == (1, 2, -1, -2)
    assert parse_word("x1 x2^-1") == (1, -2)
    assert parse_word("1") == ()
    assert format_word((1, -2)) == "aB"


def test_lcs_degree_examples():
    assert lcs_degree(A, 2, 6).value == 1
    assert lcs_degree(commutator(A, B), 2, 6).value == 2
    assert lcs_degree(commutator(commutator(A, B), B), 2, 6).value == 3
    with pytest.raises(TrivialWordError):
        lcs_degree(parse_word("abBA"), 2, 4)


def basic_commutators(d):
    # left-normed commutators [a, b, x3, ..., xd], all of weight exactly d
    for tail in itertools.product((A, B), repeat=d - 2):
        yield left_normed([A, B, *tail])


@pytest.mark.parametrize("d", range(2, 7))
def test_iterated_commutators_have_exact_depth(d):
    for w in basic_commutators(d):
        got = lcs_degree(w, 2, 6)
        assert got.exact and got.value == d


def test_depth_beyond_truncation_is_a_lower_bound():
    w = left_normed([A, B, A, A])
    got = lcs_degree(w, 2, 3)
    assert not got.exact and got.value == 4 and str(got) == ">=4"


words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10)


@settings(max_examples=200)
@given(words, words)
def test_magnus_is_a_homomorphism(u, v):
    lhs = magnus(tuple(u) + tuple(v), 2, 6)
    rhs = magnus(u, 2, 6) * magnus(v, 2, 6)
    assert lhs == rhs


@given(words)
def test_inverse_series(u):
    assert (magnus(u, 2, 5) * magnus(inverse(u), 2, 5)).as_dict() == {(): 1}
    assert reduce_word(tuple(u) + inverse(u)) == ()


# ---- permutation groups

D8 = [(1, 2, 3, 0), (0, 3, 2, 1)]
KLEIN = [(1, 0, 3, 2), (2, 3, 0, 1)]
WREATH = [(4, 5, 6, 7, 0, 1, 2, 3), (2, 3, 0, 1, 4, 5, 6, 7), (1, 0, 2, 3, 4, 5, 6, 7)]


def test_dihedral_group():
    g = group_closure(D8)
    assert g.order == 8
    assert nilpotency_class(g) == 2
    assert [h.order for h in lower_central_series(g)] == [8, 2, 1]


def test_klein_group():
    g = group_closure(KLEIN)
    assert g.order == 4 and nilpotency_class(g) == 1


def test_iterated_wreath_product():
    g = group_closure(WREATH)
    assert g.order == 128
    cls = nilpotency_class(g)
    assert cls == 4 and cls <= 6
    assert [h.order for h in lower_central_series(g)] == [len(x) for x in brute_lower_central_series(g)]


def test_non_nilpotent_group():
    s3 = group_closure([(1, 0, 2), (1, 2, 0)])
    assert s3.order == 6 and nilpotency_class(s3) is None


def test_group_cap():
    with pytest.raises(GroupCapError):
        group_closure(WREATH, cap=100)


def test_core_report():
    rep = normal_core_report(D8, 2)
    assert rep.order == 8 and rep.ell == 3 and rep.nil_class == 2 and rep.ok
    rep = normal_core_report([(1, 0)], 1)
    assert rep.order == 2 and rep.ell == 1 and rep.ok
    capped = normal_core_report(WREATH, 3, cap=100)
    assert capped.order is None and capped.ok


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_random_two_groups_match_brute_force(seed):
    rng = random.Random(seed)
    gens = rng.sample(list(group_closure(WREATH).elements), rng.randint(1, 3))
    g = group_closure(gens, 8)
    assert [h.order for h in lower_central_series(g)] == [len(x) for x in brute_lower_central_series(g)]
    assert nilpotency_class(g) is not None


@pytest.mark.parametrize("name", ["g2-N2", "g2-N10", "g3-bad-arc"])
def test_tower_monodromy_matches_sympy(name):
    # an independent permutation-group implementation as oracle
    from sympy.combinatorics import Permutation, PermutationGroup

    cert = build_resolving_tower(corpus.load(name))
    t = cert.triple
    gens = H1Space(t.surface, root=t.v).generator_loops()
    perms = monodromy(Tower(tuple(l.cover for l in cert.levels)), gens).perms
    g = group_closure(perms, 1 << cert.k)
    ref = PermutationGroup([Permutation(list(p)) for p in perms])
    assert g.order == ref.order()
    assert [h.order for h in lower_central_series(g)] == [h.order() for h in ref.lower_central_series()]
    assert (nilpotency_class(g) is not None) == ref.is_nilpotent
