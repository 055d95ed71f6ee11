import random

import pytest
from hypothesis import given, strategies as st

from mqindex.freegroup import (EMPTY, DerivedDepth, SplittingChain, Word, abelianized_fox_row, check_lemma_instance,
                               commutator, conjugate, derived_depth, format_word, free_reduce, kill_generators,
                               lemma_witness, parse_word, random_chain, random_derived_element,
                               random_lemma_instance, random_word, standard_images, word_inverse)

from mqindex.laurent import MultiLaurent

from conftest import words

x, y, z = Word.gen(1), Word.gen(2), Word.gen(3)


def naive_reduce(letters):
    """Repeatedly delete the first cancelling pair (quadratic, obviously right)."""
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i:i + 2]
                changed = True
                break
    return tuple(out)


@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=30))
def test_free_reduce_matches_naive_oracle(letters):
    assert free_reduce(letters) == naive_reduce(letters)


@given(words(), words(), words())
def test_group_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * ~a == EMPTY
    assert ~~a == a
    assert ~(a * b) == ~b * ~a


def test_product_and_inverse_examples():
    assert x * ~x == EMPTY
    assert (x * y) * (~y * z) == x * z
    assert (x * y).letters == (1, 2)
    assert word_inverse(x * y) == ~y * ~x
    assert word_inverse(EMPTY) == EMPTY
    assert word_inverse(~x * z * x) == ~x * ~z * x


def test_commutator_examples():
    assert commutator(x, y).letters == (-1, -2, 1, 2)
    assert commutator(x, x) == EMPTY
    assert commutator(EMPTY, x * y * ~z) == EMPTY
    assert conjugate(y, x) == ~x * y * x


def test_kill_generators_examples():
    assert kill_generators(commutator(x, y), {1}) == EMPTY
    assert kill_generators(z, {1, 2}) == z


@given(words(), words(), st.sets(st.integers(1, 3)))
def test_kill_generators_is_a_homomorphism(a, b, killed):
    assert kill_generators(a * b, killed) == kill_generators(a, killed) * kill_generators(b, killed)


# -- text syntax ---------------------------------------------------------------------

def test_parse_word_syntax():
    w, names = parse_word("[x,y]")
    assert format_word(w, names) == "x^-1 y^-1 x y"
    w, names = parse_word("X y^2 (x y)^-1")
    assert format_word(w, names) == "x^-1 y x^-1"
    assert parse_word("1")[0] == EMPTY
    assert format_word(EMPTY) == "1"
    with pytest.raises(ValueError):
        parse_word("[x,y")


@given(words(rank=3, max_len=12))
def test_format_parse_round_trip(w):
    assert parse_word(format_word(w, "xyz"), "xyz")[0] == w


# -- the witness construction -------------------------------------------------------------

def test_witness_identity_case():
    a, b = x * y, ~z
    g, cert = lemma_witness(a, b, EMPTY, EMPTY)
    assert g == EMPTY
    assert commutator(a, b) == g * commutator(a, b)


def test_witness_of_bare_commutator():
    g, cert = lemma_witness(EMPTY, EMPTY, x, y)
    assert g == commutator(x, y)
    assert cert.evaluate([x, y]) == g
    assert all(idx in (0, 1) and sign in (1, -1) for _, sign, idx in cert.factors)


@given(words(rank=6, max_len=8), words(rank=6, max_len=8), words(rank=6, max_len=8), words(rank=6, max_len=8))
def test_witness_identity_property(a, b, c, d):
    g, cert = lemma_witness(a, b, c, d)
    assert commutator(c * a, d * b) == g * commutator(a, b)
    assert cert.evaluate([c, d]) == g
    assert kill_generators(g, c.generators() | d.generators()) == EMPTY


def test_seeded_instances():
    rng = random.Random(11)
    assert all(check_lemma_instance(*random_lemma_instance(rng)) for _ in range(300))


def test_splitting_chain():
    chain = SplittingChain.build(x, y, [z, x * z], [~y, z * z])
    assert chain.a[0] == z * x * z * x and chain.b[0] == ~y * z * z * y
    assert chain.holds()
    rng = random.Random(3)
    assert all(random_chain(rng).holds() for _ in range(100))


def test_random_word_is_reduced():
    rng = random.Random(0)
    for n in range(20):
        w = random_word(rng, 3, n)
        assert len(w) == n and free_reduce(w.letters) == w.letters


# -- derived depth -----------------------------------------------------------------------

def test_abelianized_fox_examples():
    row = abelianized_fox_row(x, standard_images(2))
    assert str(row[0]) == "1" and row[1].is_zero()
    row = abelianized_fox_row(~x, standard_images(1))
    assert row[0] == MultiLaurent.monomial((-1,), -1)
    assert all(not e.is_zero() for e in abelianized_fox_row(commutator(x, y), standard_images(2)))


def test_derived_depth_examples():
    assert derived_depth(x, 3, 3) == DerivedDepth("exact", 0)
    assert derived_depth(commutator(x, y), 3, 3) == DerivedDepth("exact", 1)
    assert derived_depth(commutator(commutator(x, y), commutator(x, z)), 3, 3) == DerivedDepth("at_least", 2)
    assert derived_depth(EMPTY, 3, 3).kind == "trivial"
    assert derived_depth(commutator(x, y), 3, 1) == DerivedDepth("at_least", 1)
    with pytest.raises(ValueError):
        derived_depth(z, 2, 2)


@given(st.integers(0, 2), st.integers(0, 10 ** 6))
def test_nested_commutators_reach_their_depth(depth, seed):
    w = random_derived_element(random.Random(seed), 3, depth)
    v = derived_depth(w, 3, 3)
    if v.kind != "trivial":
        assert v.depth >= depth


@given(words(rank=3, max_len=20).filter(lambda w: len(w) > 0))
def test_nonempty_words_are_never_trivial(w):
    assert derived_depth(w, 3, 3).kind != "trivial"


@given(words(rank=3, max_len=12), words(rank=3, max_len=12))
def test_commutators_lie_in_first_derived_subgroup(a, b):
    v = derived_depth(commutator(a, b), 3, 3)
    assert v.kind == "trivial" or v.depth >= 1
